#include <pathred/instances.h>

#include <algorithm>
#include <map>
#include <set>

namespace pathred
{
namespace
{
    std::string locus(const std::string& field, std::size_t index)
    {
        return field + "[" + std::to_string(index + 1) + "]";
    }

    void add(Violations& out, std::string where, std::string what)
    {
        out.push_back(Violation{std::move(where), std::move(what)});
    }

    template <typename T>
    bool has_duplicates(std::vector<T> v)
    {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    }

    void check_labels(Violations& out, const RunSequence<Label>& labels, const std::string& field, const Integer& bound)
    {
        for (std::size_t r = 0; r < labels.runs().size(); ++r)
        {
            const auto block = labels.runs()[r].block();
            for (std::size_t k = 0; k < block.size(); ++k)
            {
                const Label& value = block[k];
                if (!value)
                    continue;
                const Integer first = labels.run_start(r) + k + 1;
                if (*value < 0)
                    add(out, field + "[" + first.str() + "]", "negative label " + value->str());
                else if (*value > bound)
                    add(out, field + "[" + first.str() + "]",
                        "label " + value->str() + " exceeds line length " + bound.str());
            }
        }
    }
}  // namespace

NumericalMatchingSolution::NumericalMatchingSolution(std::vector<std::vector<Integer>> t)
    : tuples(std::move(t))
{
    std::sort(tuples.begin(), tuples.end());
}

bool is_pairwise_sparse(const Tripartite3dm& g)
{
    // Two triples agree on two coordinates iff they share one of the three coordinate pairs.
    for (int skip = 0; skip < 3; ++skip)
    {
        std::set<std::pair<std::int64_t, std::int64_t>> seen;
        for (const auto& t : g.triples)
        {
            std::pair<std::int64_t, std::int64_t> key;
            switch (skip)
            {
            case 0: key = {t[1], t[2]}; break;
            case 1: key = {t[0], t[2]}; break;
            default: key = {t[0], t[1]}; break;
            }
            if (!seen.insert(key).second)
                return false;
        }
    }
    return true;
}

std::vector<std::int64_t> multiplicities(const Tripartite3dm& g, int part)
{
    std::vector<std::int64_t> m(static_cast<std::size_t>(std::max<std::int64_t>(g.part_size, 0)), 0);
    for (const auto& t : g.triples)
        if (t[part] >= 1 && t[part] <= g.part_size)
            ++m[static_cast<std::size_t>(t[part] - 1)];
    return m;
}

std::vector<bool> set_flags(const NumericalMatchingInstance& inst)
{
    std::vector<bool> flags;
    for (const auto& s : inst.sets)
        flags.push_back(!has_duplicates(s));
    return flags;
}

bool union_with_sums_is_set(const std::vector<Integer>& a, const std::vector<Integer>& b)
{
    std::vector<Integer> all = a;
    all.reserve(a.size() + a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b)
            all.push_back(x + y);
    return !has_duplicates(std::move(all));
}

char side_char(Side s)
{
    switch (s)
    {
    case Side::Left: return 'L';
    case Side::Right: return 'R';
    case Side::Top: return 'T';
    case Side::Bottom: return 'B';
    }
    return '?';
}

std::optional<Side> side_from_char(char c)
{
    switch (c)
    {
    case 'L': return Side::Left;
    case 'R': return Side::Right;
    case 'T': return Side::Top;
    case 'B': return Side::Bottom;
    default: return std::nullopt;
    }
}

GridPath canonical(GridPath path)
{
    if (!path.cells.empty() && path.cells.back() < path.cells.front())
        std::reverse(path.cells.begin(), path.cells.end());
    return path;
}

Violations validate(const Cnf1in3& f)
{
    Violations out;
    if (f.variable_count < 1)
        add(out, "variable_count", "must be positive");
    for (std::size_t c = 0; c < f.clauses.size(); ++c)
        for (auto v : f.clauses[c])
            if (v < 1 || v > f.variable_count)
                add(out, locus("clause", c), "variable index " + std::to_string(v) + " outside [1, "
                                                 + std::to_string(f.variable_count) + "]");
    return out;
}

Violations validate(const Tripartite3dm& g)
{
    Violations out;
    if (g.part_size < 1)
        add(out, "part_size", "must be positive");
    for (std::size_t i = 0; i < g.triples.size(); ++i)
        for (int p = 0; p < 3; ++p)
            if (g.triples[i][p] < 1 || g.triples[i][p] > g.part_size)
                add(out, locus("triple", i), "coordinate " + std::to_string(p + 1) + " = "
                                                 + std::to_string(g.triples[i][p]) + " out of range");
    std::map<Triple, std::size_t> first;
    for (std::size_t i = 0; i < g.triples.size(); ++i)
    {
        auto [it, fresh] = first.emplace(g.triples[i], i);
        if (!fresh)
            add(out, locus("triple", i), "duplicates triple " + std::to_string(it->second + 1));
    }
    return out;
}

Violations validate(const NumericalMatchingInstance& inst)
{
    Violations out;
    if (inst.k != 3 && inst.k != 4)
        add(out, "k", "arity must be 3 or 4, got " + std::to_string(inst.k));
    if (inst.sets.size() != static_cast<std::size_t>(std::max(inst.k, 0)))
        add(out, "sets", "expected " + std::to_string(inst.k) + " multisets, got " + std::to_string(inst.sets.size()));
    if (inst.target <= 0)
        add(out, "target", "must be positive");
    for (std::size_t s = 0; s < inst.sets.size(); ++s)
    {
        if (inst.sets[s].size() != inst.n())
            add(out, locus("set", s), "size " + std::to_string(inst.sets[s].size()) + " differs from "
                                          + std::to_string(inst.n()));
        for (std::size_t i = 0; i < inst.sets[s].size(); ++i)
            if (inst.sets[s][i] <= 0)
                add(out, locus("set", s) + locus("", i), "value " + inst.sets[s][i].str() + " is not positive");
    }
    return out;
}

Violations validate(const LengthOffsetsInstance& inst)
{
    Violations out;
    const Integer n = inst.lengths.size();
    if (inst.horizon < 0)
        add(out, "horizon", "must be nonnegative");
    for (std::size_t j = 0; j < inst.lengths.size(); ++j)
    {
        if (inst.lengths[j] <= 0)
            add(out, locus("lengths", j), "length " + inst.lengths[j].str() + " is not positive");
        else if (inst.lengths[j] > inst.horizon)
            add(out, locus("lengths", j), "length " + inst.lengths[j].str() + " exceeds m = " + inst.horizon.str());
    }
    if (has_duplicates(inst.lengths))
        add(out, "lengths", "lengths must be pairwise distinct");
    if (inst.densities.size() != inst.horizon)
        add(out, "densities", "expected " + inst.horizon.str() + " densities, got " + inst.densities.size().str());
    for (std::size_t r = 0; r < inst.densities.runs().size(); ++r)
    {
        const auto block = inst.densities.runs()[r].block();
        for (std::size_t k = 0; k < block.size(); ++k)
        {
            const Integer& v = block[k];
            const Integer first = inst.densities.run_start(r) + k;
            if (v < 0 || v > n)
                add(out, "densities[" + first.str() + "]", "density " + v.str() + " outside [0, " + n.str() + "]");
        }
    }
    return out;
}

Violations validate(const PathPuzzle& p)
{
    Violations out;
    if (p.rows < 1)
        add(out, "rows", "must be positive");
    if (p.cols < 1)
        add(out, "cols", "must be positive");
    if (p.row_labels.size() != p.rows)
        add(out, "row_labels", "expected " + p.rows.str() + " labels, got " + p.row_labels.size().str());
    if (p.col_labels.size() != p.cols)
        add(out, "col_labels", "expected " + p.cols.str() + " labels, got " + p.col_labels.size().str());
    if (p.doors[0] == p.doors[1])
        add(out, "doors", "the two doors coincide");
    for (std::size_t d = 0; d < 2; ++d)
    {
        const Door& door = p.doors[d];
        if (door.row < 1 || door.row > p.rows || door.col < 1 || door.col > p.cols)
        {
            add(out, locus("door", d), "cell (" + door.row.str() + ", " + door.col.str() + ") outside the grid");
            continue;
        }
        bool outward = false;
        switch (door.side)
        {
        case Side::Left: outward = door.col == 1; break;
        case Side::Right: outward = door.col == p.cols; break;
        case Side::Top: outward = door.row == p.rows; break;
        case Side::Bottom: outward = door.row == 1; break;
        }
        if (!outward)
            add(out, locus("door", d), std::string("side ") + side_char(door.side) + " does not face the boundary");
    }
    check_labels(out, p.row_labels, "row_labels", p.cols);
    check_labels(out, p.col_labels, "col_labels", p.rows);
    return out;
}

Violations validate(const GridPath& path)
{
    Violations out;
    if (path.cells.empty())
        add(out, "cells", "path is empty");
    for (std::size_t i = 1; i < path.cells.size(); ++i)
    {
        const auto& a = path.cells[i - 1];
        const auto& b = path.cells[i];
        if (std::abs(a.row - b.row) + std::abs(a.col - b.col) != 1)
            add(out, locus("cells", i), "not orthogonally adjacent to the previous cell");
    }
    std::vector<Cell> sorted = path.cells;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
        add(out, "cells", "cell (" + std::to_string(dup->row) + ", " + std::to_string(dup->col) + ") repeated");
    return out;
}

Violations validate(const Cnf1in3& f, const Assignment& a)
{
    Violations out = validate(f);
    if (!out.empty())
        return out;
    if (a.values.size() != static_cast<std::size_t>(f.variable_count))
    {
        add(out, "assignment", "expected " + std::to_string(f.variable_count) + " values");
        return out;
    }
    for (std::size_t c = 0; c < f.clauses.size(); ++c)
    {
        int trues = 0;
        for (auto v : f.clauses[c])
            trues += a.values[static_cast<std::size_t>(v - 1)] ? 1 : 0;
        if (trues != 1)
            add(out, locus("clause", c), std::to_string(trues) + " true literals");
    }
    return out;
}

Violations validate(const Tripartite3dm& g, const ThreeDmSolution& s)
{
    Violations out = validate(g);
    if (!out.empty())
        return out;
    std::vector<std::vector<int>> cover(3, std::vector<int>(static_cast<std::size_t>(g.part_size), 0));
    std::set<std::size_t> seen;
    for (auto idx : s.triples)
    {
        if (idx >= g.triples.size())
        {
            add(out, "solution", "triple index " + std::to_string(idx + 1) + " out of range");
            continue;
        }
        if (!seen.insert(idx).second)
            add(out, "solution", "triple " + std::to_string(idx + 1) + " chosen twice");
        for (int p = 0; p < 3; ++p)
            ++cover[p][static_cast<std::size_t>(g.triples[idx][p] - 1)];
    }
    static const char* part_names[] = {"X", "Y", "Z"};
    for (int p = 0; p < 3; ++p)
        for (std::size_t e = 0; e < cover[p].size(); ++e)
            if (cover[p][e] != 1)
                add(out, std::string(part_names[p]) + "[" + std::to_string(e + 1) + "]",
                    "covered " + std::to_string(cover[p][e]) + " times");
    return out;
}

Violations validate(const NumericalMatchingInstance& inst, const NumericalMatchingSolution& s)
{
    Violations out = validate(inst);
    if (!out.empty())
        return out;
    if (s.tuples.size() != inst.n())
        add(out, "solution", "expected " + std::to_string(inst.n()) + " tuples, got " + std::to_string(s.tuples.size()));
    std::vector<std::vector<Integer>> columns(static_cast<std::size_t>(inst.k));
    for (std::size_t i = 0; i < s.tuples.size(); ++i)
    {
        const auto& tuple = s.tuples[i];
        if (tuple.size() != static_cast<std::size_t>(inst.k))
        {
            add(out, locus("tuple", i), "arity " + std::to_string(tuple.size()));
            continue;
        }
        Integer sum = 0;
        for (std::size_t c = 0; c < tuple.size(); ++c)
        {
            sum += tuple[c];
            columns[c].push_back(tuple[c]);
        }
        if (sum != inst.target)
            add(out, locus("tuple", i), "sums to " + sum.str() + ", target " + inst.target.str());
    }
    for (std::size_t c = 0; c < columns.size(); ++c)
    {
        auto expected = inst.sets[c];
        std::sort(expected.begin(), expected.end());
        std::sort(columns[c].begin(), columns[c].end());
        if (expected != columns[c])
            add(out, locus("coordinate", c), "values do not match the input multiset");
    }
    return out;
}

Violations validate(const LengthOffsetsInstance& inst, const LengthOffsetsSolution& s)
{
    Violations out = validate(inst);
    if (!out.empty())
        return out;
    if (s.offsets.size() != inst.lengths.size())
    {
        add(out, "offsets", "expected " + std::to_string(inst.lengths.size()) + " offsets");
        return out;
    }
    std::map<Integer, Integer> delta;
    for (std::size_t j = 0; j < s.offsets.size(); ++j)
    {
        if (s.offsets[j] < 0)
            add(out, locus("offsets", j), "negative offset");
        else if (s.offsets[j] + inst.lengths[j] > inst.horizon)
            add(out, locus("offsets", j), "interval ends past m");
        delta[s.offsets[j]] += 1;
        delta[s.offsets[j] + inst.lengths[j]] -= 1;
    }
    if (!out.empty())
        return out;

    RunSequence<Integer> coverage;
    Integer position = 0;
    Integer level = 0;
    for (const auto& [at, change] : delta)
    {
        coverage.append(level, at - position);
        position = at;
        level += change;
    }
    coverage.append(level, inst.horizon - position);
    if (!(coverage == inst.densities))
        add(out, "densities", "interval coverage does not match the target densities");
    return out;
}

std::string join(const Violations& v, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (i)
            out += sep;
        out += v[i].str();
    }
    return out;
}

}  // namespace pathred
