#include <pathred/oracles.h>

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace pathred
{
namespace
{
    void require_valid(const Violations& v, const char* what)
    {
        if (!v.empty())
            throw PreconditionError(std::string("invalid ") + what + ": " + join(v));
    }

    // ---------------------------------------------------------------------
    // 1-in-3-SAT

    class OneInThreeSearch
    {
    public:
        OneInThreeSearch(const Cnf1in3& f, const Visitor<Assignment>& visit)
            : m_f(f)
            , m_visit(visit)
            , m_closing(static_cast<std::size_t>(f.variable_count) + 1)
        {
            m_assignment.values.assign(static_cast<std::size_t>(f.variable_count), false);
            for (std::size_t c = 0; c < f.clauses.size(); ++c)
            {
                auto last = *std::max_element(f.clauses[c].begin(), f.clauses[c].end());
                m_closing[static_cast<std::size_t>(last)].push_back(c);
            }
        }

        void run() { assign(1); }

    private:
        bool clauses_ok(std::int64_t v) const
        {
            for (auto c : m_closing[static_cast<std::size_t>(v)])
            {
                int trues = 0;
                for (auto lit : m_f.clauses[c])
                    trues += m_assignment.values[static_cast<std::size_t>(lit - 1)] ? 1 : 0;
                if (trues != 1)
                    return false;
            }
            return true;
        }

        void assign(std::int64_t v)
        {
            if (v > m_f.variable_count)
            {
                m_visit(m_assignment);
                return;
            }
            for (bool value : {false, true})
            {
                m_assignment.values[static_cast<std::size_t>(v - 1)] = value;
                if (clauses_ok(v))
                    assign(v + 1);
            }
            m_assignment.values[static_cast<std::size_t>(v - 1)] = false;
        }

        const Cnf1in3& m_f;
        const Visitor<Assignment>& m_visit;
        std::vector<std::vector<std::size_t>> m_closing;
        Assignment m_assignment;
    };

    // ---------------------------------------------------------------------
    // 3DM exact cover

    class ExactCover
    {
    public:
        ExactCover(const Tripartite3dm& g, const Visitor<ThreeDmSolution>& visit)
            : m_g(g)
            , m_visit(visit)
            , m_n(static_cast<std::size_t>(g.part_size))
            , m_covered(3 * m_n, false)
            , m_containing(3 * m_n)
        {
            for (std::size_t t = 0; t < g.triples.size(); ++t)
                for (std::size_t e : elements(t))
                    m_containing[e].push_back(t);
        }

        void run() { search(0); }

    private:
        std::array<std::size_t, 3> elements(std::size_t t) const
        {
            const auto& tr = m_g.triples[t];
            return {static_cast<std::size_t>(tr[0] - 1), m_n + static_cast<std::size_t>(tr[1] - 1),
                    2 * m_n + static_cast<std::size_t>(tr[2] - 1)};
        }

        bool available(std::size_t t) const
        {
            for (std::size_t e : elements(t))
                if (m_covered[e])
                    return false;
            return true;
        }

        void search(std::size_t covered_parts)
        {
            if (covered_parts == m_n)
            {
                ThreeDmSolution s{m_chosen};
                std::sort(s.triples.begin(), s.triples.end());
                m_visit(s);
                return;
            }
            // Most-constrained uncovered element.
            std::size_t best = m_covered.size();
            std::size_t best_options = std::numeric_limits<std::size_t>::max();
            for (std::size_t e = 0; e < m_covered.size(); ++e)
            {
                if (m_covered[e])
                    continue;
                std::size_t options = 0;
                for (auto t : m_containing[e])
                    options += available(t) ? 1 : 0;
                if (options < best_options)
                {
                    best = e;
                    best_options = options;
                    if (options == 0)
                        return;
                }
            }
            for (auto t : m_containing[best])
            {
                if (!available(t))
                    continue;
                for (std::size_t e : elements(t))
                    m_covered[e] = true;
                m_chosen.push_back(t);
                search(covered_parts + 1);
                m_chosen.pop_back();
                for (std::size_t e : elements(t))
                    m_covered[e] = false;
            }
        }

        const Tripartite3dm& m_g;
        const Visitor<ThreeDmSolution>& m_visit;
        std::size_t m_n;
        std::vector<bool> m_covered;
        std::vector<std::vector<std::size_t>> m_containing;
        std::vector<std::size_t> m_chosen;
    };

    // ---------------------------------------------------------------------
    // Numerical k-DM

    /// Value-level matching search over coordinate multisets held as (value, count) lists.
    /// The first coordinate always takes its smallest remaining value; the remaining
    /// coordinates try each distinct value once. Tuples sharing a first value are generated
    /// in non-decreasing order of their tails, so each multiset of tuples appears once.
    template <typename Scalar>
    class MatchingSearch
    {
    public:
        using Bag = std::vector<std::pair<Scalar, int>>;

        MatchingSearch(const NumericalMatchingInstance& inst, const Visitor<NumericalMatchingSolution>& visit)
            : m_k(static_cast<std::size_t>(inst.k))
            , m_target(convert(inst.target))
            , m_visit(visit)
        {
            for (const auto& set : inst.sets)
            {
                std::map<Scalar, int> counts;
                for (const auto& v : set)
                    ++counts[convert(v)];
                m_bags.emplace_back(counts.begin(), counts.end());
            }
            m_remaining = inst.n();
        }

        void run()
        {
            std::vector<Scalar> none;
            search(none);
        }

    private:
        static Scalar convert(const Integer& v)
        {
            if constexpr (std::is_same_v<Scalar, Integer>)
                return v;
            else
                return v.convert_to<Scalar>();
        }

        void search(const std::vector<Scalar>& previous)
        {
            if (m_remaining == 0)
            {
                std::vector<std::vector<Integer>> tuples;
                for (const auto& t : m_tuples)
                    tuples.emplace_back(t.begin(), t.end());
                m_visit(NumericalMatchingSolution(std::move(tuples)));
                return;
            }
            auto& first = m_bags[0];
            std::size_t lead = 0;
            while (first[lead].second == 0)
                ++lead;
            std::vector<Scalar> tuple(m_k);
            tuple[0] = first[lead].first;
            --first[lead].second;
            --m_remaining;
            extend(tuple, 1, tuple[0], previous);
            ++m_remaining;
            ++first[lead].second;
        }

        void extend(std::vector<Scalar>& tuple, std::size_t coord, const Scalar& partial,
                    const std::vector<Scalar>& previous)
        {
            auto& bag = m_bags[coord];
            if (coord + 1 == m_k)
            {
                Scalar last = m_target - partial;
                auto it = std::lower_bound(bag.begin(), bag.end(), last,
                                           [](const auto& entry, const Scalar& v) { return entry.first < v; });
                if (it == bag.end() || it->first != last || it->second == 0)
                    return;
                tuple[coord] = last;
                if (!previous.empty() && previous[0] == tuple[0]
                    && std::lexicographical_compare(tuple.begin() + 1, tuple.end(), previous.begin() + 1,
                                                    previous.end()))
                    return;
                --it->second;
                m_tuples.push_back(tuple);
                search(tuple);
                m_tuples.pop_back();
                ++it->second;
                return;
            }
            for (auto& [value, count] : bag)
            {
                if (count == 0)
                    continue;
                Scalar sum = partial + value;
                if (sum >= m_target)
                    break;
                tuple[coord] = value;
                --count;
                extend(tuple, coord + 1, sum, previous);
                ++count;
            }
        }

        std::size_t m_k;
        Scalar m_target;
        const Visitor<NumericalMatchingSolution>& m_visit;
        std::vector<Bag> m_bags;
        std::size_t m_remaining = 0;
        std::vector<std::vector<Scalar>> m_tuples;
    };

    // ---------------------------------------------------------------------
    // Length Offsets

    /// Left-to-right sweep: at cell i the number of intervals starting there is forced to
    /// t_i minus the intervals still open, and the search chooses which lengths start.
    class OffsetSweep
    {
    public:
        OffsetSweep(const LengthOffsetsInstance& inst, const Visitor<LengthOffsetsSolution>& visit)
            : m_visit(visit)
            , m_m(to_int64(inst.horizon))
        {
            for (const auto& a : inst.lengths)
                m_lengths.push_back(to_int64(a));
            for (const auto& t : inst.densities.to_vector())
                m_densities.push_back(to_int64(t));
            m_offsets.assign(m_lengths.size(), -1);
            m_closing.assign(static_cast<std::size_t>(m_m) + 1, 0);
        }

        void run() { cell(0, 0, m_lengths.size()); }

    private:
        void cell(std::int64_t i, std::int64_t open, std::size_t unplaced)
        {
            open -= m_closing[static_cast<std::size_t>(i)];
            if (i == m_m)
            {
                if (unplaced == 0)
                {
                    LengthOffsetsSolution s;
                    for (auto b : m_offsets)
                        s.offsets.emplace_back(b);
                    m_visit(s);
                }
                return;
            }
            std::int64_t starts = m_densities[static_cast<std::size_t>(i)] - open;
            if (starts < 0 || static_cast<std::size_t>(starts) > unplaced)
                return;
            choose(i, open, unplaced, starts, 0);
        }

        void choose(std::int64_t i, std::int64_t open, std::size_t unplaced, std::int64_t still, std::size_t from)
        {
            if (still == 0)
            {
                cell(i + 1, open, unplaced);
                return;
            }
            for (std::size_t j = from; j < m_lengths.size(); ++j)
            {
                if (m_offsets[j] >= 0 || i + m_lengths[j] > m_m)
                    continue;
                m_offsets[j] = i;
                ++m_closing[static_cast<std::size_t>(i + m_lengths[j])];
                choose(i, open + 1, unplaced - 1, still - 1, j + 1);
                --m_closing[static_cast<std::size_t>(i + m_lengths[j])];
                m_offsets[j] = -1;
            }
        }

        const Visitor<LengthOffsetsSolution>& m_visit;
        std::int64_t m_m;
        std::vector<std::int64_t> m_lengths;
        std::vector<std::int64_t> m_densities;
        std::vector<std::int64_t> m_offsets;
        std::vector<std::int64_t> m_closing;
    };

    template <typename T, typename ForEach>
    std::vector<T> collect(ForEach&& for_each)
    {
        std::vector<T> out;
        for_each([&](const T& s) { out.push_back(s); });
        return out;
    }
}  // namespace

void for_each_1in3(const Cnf1in3& f, const Visitor<Assignment>& visit, const OracleLimits& limits)
{
    require_valid(validate(f), "formula");
    if (f.variable_count > limits.max_sat_variables)
        throw OracleCapExceeded("oracle cap exceeded: " + std::to_string(f.variable_count) + " variables > "
                                + std::to_string(limits.max_sat_variables));
    OneInThreeSearch(f, visit).run();
}

SolutionCount count_1in3(const Cnf1in3& f, const OracleLimits& limits)
{
    SolutionCount c;
    for_each_1in3(f, [&](const Assignment&) { ++c; }, limits);
    return c;
}

std::vector<Assignment> enumerate_1in3(const Cnf1in3& f, const OracleLimits& limits)
{
    return collect<Assignment>([&](auto&& v) { for_each_1in3(f, v, limits); });
}

void for_each_3dm(const Tripartite3dm& g, const Visitor<ThreeDmSolution>& visit, const OracleLimits& limits)
{
    require_valid(validate(g), "3DM instance");
    if (g.part_size > limits.max_3dm_part_size)
        throw OracleCapExceeded("oracle cap exceeded: 3DM part size " + std::to_string(g.part_size) + " > "
                                + std::to_string(limits.max_3dm_part_size));
    ExactCover(g, visit).run();
}

SolutionCount count_3dm(const Tripartite3dm& g, const OracleLimits& limits)
{
    SolutionCount c;
    for_each_3dm(g, [&](const ThreeDmSolution&) { ++c; }, limits);
    return c;
}

std::vector<ThreeDmSolution> enumerate_3dm(const Tripartite3dm& g, const OracleLimits& limits)
{
    return collect<ThreeDmSolution>([&](auto&& v) { for_each_3dm(g, v, limits); });
}

SolutionCount count_3dm_subsets(const Tripartite3dm& g)
{
    require_valid(validate(g), "3DM instance");
    if (g.triples.size() > 24)
        throw OracleCapExceeded("oracle cap exceeded: subset enumeration over " + std::to_string(g.triples.size())
                                + " triples");
    SolutionCount c;
    const std::uint64_t subsets = std::uint64_t{1} << g.triples.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask)
    {
        ThreeDmSolution s;
        for (std::size_t t = 0; t < g.triples.size(); ++t)
            if (mask >> t & 1)
                s.triples.push_back(t);
        if (validate(g, s).empty())
            ++c;
    }
    return c;
}

void for_each_nkdm(const NumericalMatchingInstance& inst, const Visitor<NumericalMatchingSolution>& visit,
                   const OracleLimits& limits)
{
    require_valid(validate(inst), "numerical matching instance");
    if (inst.n() > limits.max_nkdm_n)
        throw OracleCapExceeded("oracle cap exceeded: numerical matching n = " + std::to_string(inst.n()) + " > "
                                + std::to_string(limits.max_nkdm_n));
    if (inst.n() == 0)
    {
        visit(NumericalMatchingSolution{});
        return;
    }
    // Conservation: every tuple sums to t, so all values together sum to n * t.
    Integer total = 0;
    Integer largest = inst.target;
    for (const auto& set : inst.sets)
        for (const auto& v : set)
        {
            total += v;
            largest = std::max(largest, v);
        }
    if (total != inst.target * inst.n())
        return;

    if (largest * inst.k < Integer(std::numeric_limits<std::int64_t>::max() / 4))
        MatchingSearch<std::int64_t>(inst, visit).run();
    else
        MatchingSearch<Integer>(inst, visit).run();
}

SolutionCount count_nkdm(const NumericalMatchingInstance& inst, const OracleLimits& limits)
{
    SolutionCount c;
    for_each_nkdm(inst, [&](const NumericalMatchingSolution&) { ++c; }, limits);
    return c;
}

std::vector<NumericalMatchingSolution> enumerate_nkdm(const NumericalMatchingInstance& inst,
                                                      const OracleLimits& limits)
{
    return collect<NumericalMatchingSolution>([&](auto&& v) { for_each_nkdm(inst, v, limits); });
}

std::vector<LengthOffsetsSolution> enumerate_lo(const LengthOffsetsInstance& inst, const OracleLimits& limits)
{
    require_valid(validate(inst), "Length Offsets instance");
    if (inst.lengths.size() > limits.max_lo_n || inst.horizon > limits.max_lo_horizon)
        throw OracleCapExceeded("oracle cap exceeded: Length Offsets n = " + std::to_string(inst.lengths.size())
                                + ", m = " + inst.horizon.str());
    std::vector<LengthOffsetsSolution> out;
    OffsetSweep(inst, [&](const LengthOffsetsSolution& s) { out.push_back(s); }).run();
    std::sort(out.begin(), out.end());
    return out;
}

SolutionCount count_lo(const LengthOffsetsInstance& inst, const OracleLimits& limits)
{
    return SolutionCount(enumerate_lo(inst, limits).size());
}

}  // namespace pathred
