#pragma once

#include <pathred/error.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace pathred
{

/// Unbounded signed integer. Instance values along the reduction chain outgrow 64 bits quickly.
using Integer = boost::multiprecision::cpp_int;

inline bool fits_int64(const Integer& v)
{
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t to_int64(const Integer& v)
{
    if (!fits_int64(v))
        throw Error("integer " + v.str() + " does not fit in 64 bits");
    return v.convert_to<std::int64_t>();
}

inline std::string to_string(const Integer& v) { return v.str(); }

/// Exact number of solutions of an instance.
class SolutionCount
{
public:
    SolutionCount() = default;
    SolutionCount(std::uint64_t v) : m_value(v) {}
    explicit SolutionCount(Integer v) : m_value(std::move(v))
    {
        if (m_value < 0)
            throw Error("negative solution count");
    }

    const Integer& value() const noexcept { return m_value; }
    std::string str() const { return m_value.str(); }

    SolutionCount& operator+=(const SolutionCount& other)
    {
        m_value += other.m_value;
        return *this;
    }
    SolutionCount& operator++()
    {
        ++m_value;
        return *this;
    }

    friend bool operator==(const SolutionCount& a, const SolutionCount& b) { return a.m_value == b.m_value; }
    friend bool operator<(const SolutionCount& a, const SolutionCount& b) { return a.m_value < b.m_value; }
    friend std::ostream& operator<<(std::ostream& os, const SolutionCount& c) { return os << c.m_value; }

private:
    Integer m_value = 0;
};

/// A sequence stored as maximal runs of equal values (or of a repeated short block). Lengths are unbounded so that
/// sequences indexed by astronomically large coordinates (densities over [0, m), labels
/// of a (2m+3)-row grid) stay representable.
template <typename T>
class RunSequence
{
public:
    /// A run is either `length` copies of `value`, or, when `cycle` is non-empty, the block
    /// `cycle` repeated length / cycle.size() times (then value == cycle.front()).
    struct Run
    {
        T value;
        Integer length;
        std::vector<T> cycle;

        bool cyclic() const noexcept { return !cycle.empty(); }

        const T& at_offset(const Integer& offset) const
        {
            if (cycle.empty())
                return value;
            return cycle[static_cast<std::size_t>(offset % cycle.size())];
        }

        /// Each distinct position of the run's block (one entry for a plain run).
        std::vector<T> block() const { return cycle.empty() ? std::vector<T>{value} : cycle; }

        friend bool operator==(const Run&, const Run&) = default;
    };

    RunSequence() = default;

    explicit RunSequence(const std::vector<T>& dense)
    {
        for (const auto& v : dense)
            append(v);
    }

    void append(const T& value, const Integer& count = 1)
    {
        if (count <= 0)
            return;
        if (!m_runs.empty() && !m_runs.back().cyclic() && m_runs.back().value == value)
        {
            m_runs.back().length += count;
        }
        else
        {
            m_starts.push_back(m_size);
            m_runs.push_back(Run{value, count, {}});
        }
        m_size += count;
    }

    /// Appends `block` repeated `repeats` times. Plain runs are used when the block is constant.
    void append_cycle(const std::vector<T>& block, const Integer& repeats)
    {
        if (block.empty() || repeats <= 0)
            return;
        if (std::all_of(block.begin(), block.end(), [&](const T& v) { return v == block.front(); }))
        {
            append(block.front(), repeats * block.size());
            return;
        }
        if (repeats == 1)
        {
            for (const auto& v : block)
                append(v);
            return;
        }
        const Integer length = repeats * block.size();
        if (!m_runs.empty() && m_runs.back().cycle == block)
        {
            m_runs.back().length += length;
        }
        else
        {
            m_starts.push_back(m_size);
            m_runs.push_back(Run{block.front(), length, block});
        }
        m_size += length;
    }

    const Integer& size() const noexcept { return m_size; }
    bool empty() const noexcept { return m_size == 0; }
    const std::vector<Run>& runs() const noexcept { return m_runs; }

    /// 0-based index of the first element of run `r`.
    const Integer& run_start(std::size_t r) const { return m_starts[r]; }

    const T& at(const Integer& index) const
    {
        if (index < 0 || index >= m_size)
            throw Error("run sequence index " + index.str() + " out of range");
        auto it = std::upper_bound(m_starts.begin(), m_starts.end(), index);
        const auto r = static_cast<std::size_t>(std::distance(m_starts.begin(), it)) - 1;
        return m_runs[r].at_offset(index - m_starts[r]);
    }

    const T& operator[](std::int64_t index) const { return at(Integer(index)); }

    std::vector<T> to_vector(std::int64_t limit = 50'000'000) const
    {
        if (m_size > limit)
            throw Error("sequence of length " + m_size.str() + " is too long to materialize");
        std::vector<T> out;
        out.reserve(m_size.convert_to<std::size_t>());
        for (const auto& run : m_runs)
        {
            if (!run.cyclic())
            {
                out.insert(out.end(), run.length.template convert_to<std::size_t>(), run.value);
                continue;
            }
            const auto reps = run.length.template convert_to<std::size_t>() / run.cycle.size();
            for (std::size_t i = 0; i < reps; ++i)
                out.insert(out.end(), run.cycle.begin(), run.cycle.end());
        }
        return out;
    }

    /// Value equality: the same sequence may be stored with different run boundaries.
    friend bool operator==(const RunSequence& a, const RunSequence& b)
    {
        if (a.m_size != b.m_size)
            return false;
        std::size_t i = 0, j = 0;
        Integer pos = 0;
        while (pos < a.m_size)
        {
            const auto& ra = a.m_runs[i];
            const auto& rb = b.m_runs[j];
            const Integer end_a = a.m_starts[i] + ra.length, end_b = b.m_starts[j] + rb.length;
            const Integer stretch = (end_a < end_b ? end_a : end_b) - pos;
            // Both runs are periodic over the stretch, so one common period decides it.
            const auto pa = std::max<std::size_t>(1, ra.cycle.size()), pb = std::max<std::size_t>(1, rb.cycle.size());
            const Integer period = std::lcm(pa, pb);
            const Integer check = stretch < period ? stretch : period;
            for (Integer k = 0; k < check; ++k)
                if (!(ra.at_offset(pos + k - a.m_starts[i]) == rb.at_offset(pos + k - b.m_starts[j])))
                    return false;
            pos += stretch;
            i += pos == end_a;
            j += pos == end_b;
        }
        return true;
    }

private:
    std::vector<Run> m_runs;
    std::vector<Integer> m_starts;
    Integer m_size = 0;
};

}  // namespace pathred
