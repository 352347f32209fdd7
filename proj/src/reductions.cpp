#include <pathred/reductions.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pathred
{
namespace
{
    void require_valid(const Violations& v, const std::string& what)
    {
        if (!v.empty())
            throw PreconditionError("invalid " + what + ": " + join(v));
    }

    void ensure_valid(const Violations& v, const std::string& what)
    {
        if (!v.empty())
            throw ConsistencyError("constructed " + what + " is invalid: " + join(v));
    }

    bool is_set(std::vector<Integer> v)
    {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    }

    /// (d5, ..., d0) in base B; digits may be negative.
    Integer digits(const Integer& base, std::initializer_list<std::int64_t> ds)
    {
        Integer v = 0;
        for (auto d : ds)
            v = v * base + d;
        return v;
    }
}  // namespace

std::string stage_tag(Stage s)
{
    switch (s)
    {
    case Stage::SatTo3dm: return "sat-3dm";
    case Stage::ThreeDmToN4dm: return "3dm-n4dm";
    case Stage::N4dmToN3dm: return "n4dm-n3dm";
    case Stage::N3dmToLo: return "n3dm-lo";
    case Stage::LoToPp: return "lo-pp";
    }
    return "?";
}

std::optional<Stage> stage_from_tag(const std::string& tag)
{
    for (Stage s : {Stage::SatTo3dm, Stage::ThreeDmToN4dm, Stage::N4dmToN3dm, Stage::N3dmToLo, Stage::LoToPp})
        if (stage_tag(s) == tag)
            return s;
    return std::nullopt;
}

Stage stage_of(const ReductionArtifact& a) { return static_cast<Stage>(a.index()); }

// ---------------------------------------------------------------------------
// 1-in-3-SAT -> 3DM

SatTo3dmArtifact reduce_sat_to_3dm(const Cnf1in3& f)
{
    require_valid(validate(f), "formula");
    if (f.clauses.empty())
        throw PreconditionError("empty formula");
    const auto vars = static_cast<std::size_t>(f.variable_count);
    std::vector<std::int64_t> occurrences(vars, 0);
    for (const auto& c : f.clauses)
        for (auto v : c)
            ++occurrences[static_cast<std::size_t>(v - 1)];
    for (std::size_t v = 0; v < vars; ++v)
        if (occurrences[v] == 0)
            throw PreconditionError("variable " + std::to_string(v + 1) + " occurs in no clause");

    SatTo3dmArtifact a;
    a.source = f;
    // Vertex ids: (part, 1-based index within the part). Part = color.
    auto add_vertex = [&](int color, std::string name) {
        a.names[static_cast<std::size_t>(color)].push_back(std::move(name));
        return std::pair<int, std::int64_t>{color, static_cast<std::int64_t>(a.names[color].size())};
    };

    // Clause vertices first: copy c of clause j has color c.
    std::vector<std::array<std::pair<int, std::int64_t>, 3>> clause_vertex(f.clauses.size());
    for (std::size_t j = 0; j < f.clauses.size(); ++j)
        for (int c = 0; c < 3; ++c)
            clause_vertex[j][static_cast<std::size_t>(c)] =
                add_vertex(c, "c" + std::to_string(j + 1) + "." + std::to_string(c));

    // Positive vertex x_i (color (2i + 2) mod 3) is identified with a clause vertex. Each
    // variable hands out its color-c positive vertices in increasing index order.
    std::vector<std::vector<std::pair<int, std::int64_t>>> positive(vars);
    std::vector<std::array<std::size_t, 3>> next_of_color(vars, {0, 0, 0});
    for (std::size_t v = 0; v < vars; ++v)
        positive[v].resize(static_cast<std::size_t>(3 * occurrences[v]));
    auto pool_index = [](int color, std::size_t k) {
        // x_i has color c iff (2i + 2) = c (mod 3), i.e. i = 2c + 2 (mod 3).
        const std::size_t first = static_cast<std::size_t>((2 * color + 2) % 3);
        return first + 3 * k;
    };
    for (std::size_t j = 0; j < f.clauses.size(); ++j)
        for (int c = 0; c < 3; ++c)
            for (auto var : f.clauses[j])
            {
                const auto v = static_cast<std::size_t>(var - 1);
                const std::size_t i = pool_index(c, next_of_color[v][static_cast<std::size_t>(c)]++);
                positive[v][i] = clause_vertex[j][static_cast<std::size_t>(c)];
            }

    a.gadgets.resize(vars);
    for (std::size_t v = 0; v < vars; ++v)
    {
        const auto nx = static_cast<std::size_t>(3 * occurrences[v]);
        const std::string x = "x" + std::to_string(v + 1);
        std::vector<std::pair<int, std::int64_t>> negative(nx), aux(2 * nx);
        for (std::size_t i = 0; i < nx; ++i)
            negative[i] = add_vertex(static_cast<int>((2 * i) % 3), "~" + x + "_" + std::to_string(i));
        for (std::size_t d = 0; d < 2 * nx; ++d)
            aux[d] = add_vertex(static_cast<int>(d % 3), x + "'" + std::to_string(d));

        auto edge = [&](std::vector<std::size_t>& into, std::initializer_list<std::pair<int, std::int64_t>> vs) {
            Triple t{};
            for (const auto& [color, index] : vs)
                t[static_cast<std::size_t>(color)] = index;
            into.push_back(a.target.triples.size());
            a.target.triples.push_back(t);
        };
        auto& gadget = a.gadgets[v];
        for (std::size_t i = 0; i < nx; ++i)
            edge(gadget.positive, {positive[v][i], aux[2 * i], aux[2 * i + 1]});
        for (std::size_t i = 0; i < nx; ++i)
            edge(gadget.negative, {negative[i], aux[2 * i + 1], aux[(2 * i + 2) % (2 * nx)]});
        for (std::size_t i = 0; i < nx / 3; ++i)
            edge(gadget.garbage, {negative[3 * i], negative[3 * i + 1], negative[3 * i + 2]});
    }

    if (a.names[0].size() != a.names[1].size() || a.names[1].size() != a.names[2].size())
        throw ConsistencyError("color classes have unequal sizes");
    a.target.part_size = static_cast<std::int64_t>(a.names[0].size());
    ensure_valid(validate(a.target), "3DM instance");
    if (!is_pairwise_sparse(a.target))
        throw ConsistencyError("constructed 3DM instance is not pairwise sparse");
    return a;
}

ThreeDmSolution lift_solution(const SatTo3dmArtifact& a, const Assignment& s)
{
    require_valid(validate(a.source, s), "assignment");
    ThreeDmSolution out;
    for (std::size_t v = 0; v < a.gadgets.size(); ++v)
    {
        const auto& g = a.gadgets[v];
        if (s.values[v])
        {
            out.triples.insert(out.triples.end(), g.positive.begin(), g.positive.end());
            out.triples.insert(out.triples.end(), g.garbage.begin(), g.garbage.end());
        }
        else
        {
            out.triples.insert(out.triples.end(), g.negative.begin(), g.negative.end());
        }
    }
    std::sort(out.triples.begin(), out.triples.end());
    ensure_valid(validate(a.target, out), "matching");
    return out;
}

Assignment project_solution(const SatTo3dmArtifact& a, const ThreeDmSolution& s)
{
    require_valid(validate(a.target, s), "matching");
    Assignment out;
    for (const auto& g : a.gadgets)
        out.values.push_back(std::binary_search(s.triples.begin(), s.triples.end(), g.positive.front()));
    ensure_valid(validate(a.source, out), "assignment");
    if (lift_solution(a, out) != s)
        throw ConsistencyError("matching is not the image of its projected assignment");
    return out;
}

// ---------------------------------------------------------------------------
// 3DM -> numerical 4DM

ThreeDmToN4dmArtifact reduce_3dm_to_n4dm(const Tripartite3dm& g)
{
    using Kind = ThreeDmToN4dmArtifact::Kind;
    require_valid(validate(g), "3DM instance");
    if (!is_pairwise_sparse(g))
        throw PreconditionError("3DM instance is not pairwise sparse");
    std::array<std::vector<std::int64_t>, 3> mult;
    for (int part = 0; part < 3; ++part)
    {
        mult[static_cast<std::size_t>(part)] = multiplicities(g, part);
        for (std::size_t e = 0; e < mult[part].size(); ++e)
            if (mult[part][e] == 0)
                throw PreconditionError(std::string("element ") + "xyz"[part] + std::to_string(e + 1)
                                        + " occurs in no triple");
    }

    ThreeDmToN4dmArtifact a;
    a.source = g;
    a.base = Integer(100) * g.part_size;
    const Integer& B = a.base;
    a.target.k = 4;
    a.target.sets.resize(4);
    a.target.target = digits(B, {40, 0, 0, 0, 0, 0});

    auto place = [&](int coord, const Integer& value, Kind kind, std::int64_t index, std::int64_t copies = 1) {
        for (std::int64_t c = 0; c < copies; ++c)
            a.target.sets[static_cast<std::size_t>(coord)].push_back(value);
        if (copies > 0)
            a.provenance[static_cast<std::size_t>(coord)].emplace(value, ThreeDmToN4dmArtifact::Tag{kind, index});
    };
    const std::int64_t n = g.part_size;
    for (std::int64_t i = 1; i <= n; ++i)
    {
        place(0, digits(B, {10, i, 0, 0, 0, 0}), Kind::XPlain, i);
        place(0, digits(B, {10, i, -i, 0, 0, 0}), Kind::XCleanup, i, mult[0][static_cast<std::size_t>(i - 1)] - 1);
        place(3, digits(B, {11, 0, -i, 0, 0, 0}), Kind::XNegative, i);
    }
    for (std::int64_t j = 1; j <= n; ++j)
    {
        place(1, digits(B, {10, 0, 0, j, 0, 0}), Kind::YPlain, j);
        place(1, digits(B, {10, 0, 0, j, -j, 0}), Kind::YCleanup, j, mult[1][static_cast<std::size_t>(j - 1)] - 1);
        place(0, digits(B, {12, 0, 0, 0, -j, 0}), Kind::YNegative, j);
    }
    for (std::int64_t k = 1; k <= n; ++k)
    {
        place(2, digits(B, {10, 0, 0, 0, 0, k}), Kind::ZPlain, k);
        place(1, digits(B, {7, 0, 0, 0, 0, -k}), Kind::ZNegative, k);
    }
    for (std::size_t t = 0; t < g.triples.size(); ++t)
    {
        const auto [i, j, k] = g.triples[t];
        place(2, digits(B, {10, 0, i, 0, j, k}), Kind::TripleY, static_cast<std::int64_t>(t));
        place(3, digits(B, {10, -i, 0, -j, 0, -k}), Kind::TripleZ, static_cast<std::int64_t>(t));
    }

    ensure_valid(validate(a.target), "numerical 4DM instance");
    if (!union_with_sums_is_set(a.target.sets[2], a.target.sets[3]))
        throw ConsistencyError("Y' together with Y' + Z' is not a set");
    return a;
}

NumericalMatchingSolution lift_solution(const ThreeDmToN4dmArtifact& a, const ThreeDmSolution& s)
{
    require_valid(validate(a.source, s), "matching");
    const Integer& B = a.base;
    std::vector<std::vector<Integer>> tuples;
    for (std::size_t t = 0; t < a.source.triples.size(); ++t)
    {
        const auto [i, j, k] = a.source.triples[t];
        const Integer triple_y = digits(B, {10, 0, i, 0, j, k});
        const Integer triple_z = digits(B, {10, -i, 0, -j, 0, -k});
        if (std::binary_search(s.triples.begin(), s.triples.end(), t))
        {
            tuples.push_back({digits(B, {10, i, 0, 0, 0, 0}), digits(B, {10, 0, 0, j, 0, 0}),
                              digits(B, {10, 0, 0, 0, 0, k}), triple_z});
            tuples.push_back({digits(B, {12, 0, 0, 0, -j, 0}), digits(B, {7, 0, 0, 0, 0, -k}), triple_y,
                              digits(B, {11, 0, -i, 0, 0, 0})});
        }
        else
        {
            tuples.push_back(
                {digits(B, {10, i, -i, 0, 0, 0}), digits(B, {10, 0, 0, j, -j, 0}), triple_y, triple_z});
        }
    }
    NumericalMatchingSolution out(std::move(tuples));
    ensure_valid(validate(a.target, out), "numerical 4DM solution");
    return out;
}

ThreeDmSolution project_solution(const ThreeDmToN4dmArtifact& a, const NumericalMatchingSolution& s)
{
    using Kind = ThreeDmToN4dmArtifact::Kind;
    require_valid(validate(a.target, s), "numerical 4DM solution");
    ThreeDmSolution out;
    for (const auto& tuple : s.tuples)
    {
        const auto& w = a.provenance[0].at(tuple[0]);
        const auto& z = a.provenance[3].at(tuple[3]);
        if (w.kind == Kind::XPlain && z.kind == Kind::TripleZ)
            out.triples.push_back(static_cast<std::size_t>(z.index));
    }
    std::sort(out.triples.begin(), out.triples.end());
    ensure_valid(validate(a.source, out), "matching");
    if (lift_solution(a, out) != s)
        throw ConsistencyError("numerical 4DM solution is not the image of its projected matching");
    return out;
}

// ---------------------------------------------------------------------------
// Normalization

namespace
{
    bool window_holds(const NumericalMatchingInstance& inst)
    {
        // k = 4: t/5 < v < t/3; k = 3: t/4 < v < t/2.
        const int lo = inst.k == 4 ? 5 : 4;
        const int hi = inst.k == 4 ? 3 : 2;
        for (const auto& set : inst.sets)
            for (const auto& v : set)
                if (v * lo <= inst.target || v * hi >= inst.target)
                    return false;
        return true;
    }
}  // namespace

bool in_window(const NumericalMatchingInstance& inst)
{
    return window_holds(inst) && (inst.k != 4 || inst.target % 4 == 0);
}

NormalizedNkdm normalize_nkdm(const NumericalMatchingInstance& inst, bool force)
{
    require_valid(validate(inst), "numerical matching instance");
    if (inst.k != 3 && inst.k != 4)
        throw PreconditionError("normalization needs k = 3 or k = 4");
    NormalizedNkdm out;
    out.instance = inst;
    if (force || !window_holds(inst))
    {
        for (const auto& set : inst.sets)
            for (const auto& v : set)
                if (v >= inst.target)
                    throw TriviallyUnsolvable("element " + v.str() + " >= t = " + inst.target.str());
        out.map.shift = inst.k == 4 ? inst.target * 2 : inst.target;
    }
    out.target_shift = out.map.shift * inst.k;
    // The mod-4 separation of the next reduction needs t divisible by 4.
    if (inst.k == 4 && (inst.target + out.target_shift) % 4 != 0)
        out.map.scale = 4;
    for (auto& set : out.instance.sets)
        for (auto& v : set)
            v = out.map.apply(v);
    out.instance.target = (inst.target + out.target_shift) * out.map.scale;
    if (!in_window(out.instance))
        throw ConsistencyError("normalized instance is outside the window");
    return out;
}

NumericalMatchingSolution apply(const NormalizedNkdm& norm, const NumericalMatchingSolution& s)
{
    auto tuples = s.tuples;
    for (auto& t : tuples)
        for (auto& v : t)
            v = norm.map.apply(v);
    return NumericalMatchingSolution(std::move(tuples));
}

NumericalMatchingSolution invert(const NormalizedNkdm& norm, const NumericalMatchingSolution& s)
{
    auto tuples = s.tuples;
    for (auto& t : tuples)
        for (auto& v : t)
            v = norm.map.invert(v);
    return NumericalMatchingSolution(std::move(tuples));
}

std::optional<std::pair<int, int>> find_sum_set_pair(const NumericalMatchingInstance& inst)
{
    for (int a = 0; a < inst.k; ++a)
        for (int b = 0; b < inst.k; ++b)
            if (a != b && union_with_sums_is_set(inst.sets[static_cast<std::size_t>(a)], inst.sets[static_cast<std::size_t>(b)]))
                return std::pair{a, b};
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Numerical 4DM -> numerical 3DM

N4dmToN3dmArtifact reduce_n4dm_to_n3dm(const NumericalMatchingInstance& inst, std::pair<int, int> pair)
{
    using Kind = N4dmToN3dmArtifact::Kind;
    require_valid(validate(inst), "numerical 4DM instance");
    if (inst.k != 4)
        throw PreconditionError("expected k = 4");
    const auto [pw, px] = pair;
    if (pw < 0 || pw > 3 || px < 0 || px > 3 || pw == px)
        throw PreconditionError("invalid sum-set coordinate pair");
    if (!window_holds(inst))
        throw PreconditionError("elements must lie strictly between t/5 and t/3; apply normalize_nkdm first");
    if (inst.target % 4 != 0)
        throw PreconditionError("t must be divisible by 4; apply normalize_nkdm first");
    const auto& W = inst.sets[static_cast<std::size_t>(pw)];
    const auto& X = inst.sets[static_cast<std::size_t>(px)];
    if (!union_with_sums_is_set(W, X))
        throw PreconditionError("W together with W + X is not a set");

    N4dmToN3dmArtifact a;
    a.source = inst;
    std::size_t next = 2;
    a.roles = {pw, px, 0, 0};
    for (int c = 0; c < 4; ++c)
        if (c != pw && c != px)
            a.roles[next++] = c;
    const auto& Y = inst.sets[static_cast<std::size_t>(a.roles[2])];
    const auto& Z = inst.sets[static_cast<std::size_t>(a.roles[3])];

    a.base = inst.target;
    const Integer& B = a.base;
    a.target.k = 3;
    a.target.sets.resize(3);
    a.target.target = 64 * B + 4;
    auto place = [&](int coord, const Integer& value, Kind kind, const Integer& first, const Integer& second = 0) {
        a.target.sets[static_cast<std::size_t>(coord)].push_back(value);
        a.provenance[static_cast<std::size_t>(coord)].emplace(value, N4dmToN3dmArtifact::Tag{kind, first, second});
    };
    for (const auto& w : W)
        place(0, 21 * B + 4 * w + 1, Kind::WPrime, w);
    for (const auto& w : W)
        for (const auto& x : X)
            place(0, 20 * B + 4 * (w + x) + 2, Kind::UBar, w, x);
    for (const auto& x : X)
        place(1, 19 * B + 4 * x + 1, Kind::XPrime, x);
    for (const auto& z : Z)
        place(1, 21 * B + 4 * z + 1, Kind::ZPrime, z);
    const std::size_t n = inst.n();
    for (std::size_t c = 0; c < n * n - n; ++c)
        place(1, 20 * B, Kind::Filler, 0);
    for (const auto& w : W)
        for (const auto& x : X)
            place(2, 24 * B - 4 * (w + x) + 2, Kind::U, w, x);
    for (const auto& y : Y)
        place(2, 19 * B + 4 * y + 1, Kind::YPrime, y);

    ensure_valid(validate(a.target), "numerical 3DM instance");
    if (!is_set(a.target.sets[0]))
        throw ConsistencyError("X' is not a set");
    if (!mod4_separated(a))
        throw ConsistencyError("constructed values violate the mod-4 separation");
    return a;
}

bool mod4_separated(const N4dmToN3dmArtifact& a)
{
    using Kind = N4dmToN3dmArtifact::Kind;
    if (a.base % 4 != 0)
        return false;
    for (const auto& map : a.provenance)
        for (const auto& [value, tag] : map)
        {
            int expected = 1;
            if (tag.kind == Kind::UBar || tag.kind == Kind::U)
                expected = 2;
            else if (tag.kind == Kind::Filler)
                expected = 0;
            if (value % 4 != expected)
                return false;
        }
    return true;
}

NumericalMatchingSolution lift_solution(const N4dmToN3dmArtifact& a, const NumericalMatchingSolution& s)
{
    require_valid(validate(a.source, s), "numerical 4DM solution");
    const Integer& B = a.base;
    const auto& W = a.source.sets[static_cast<std::size_t>(a.roles[0])];
    const auto& X = a.source.sets[static_cast<std::size_t>(a.roles[1])];
    std::set<std::pair<Integer, Integer>> used;
    std::vector<std::vector<Integer>> tuples;
    for (const auto& q : s.tuples)
    {
        const Integer& w = q[static_cast<std::size_t>(a.roles[0])];
        const Integer& x = q[static_cast<std::size_t>(a.roles[1])];
        const Integer& y = q[static_cast<std::size_t>(a.roles[2])];
        const Integer& z = q[static_cast<std::size_t>(a.roles[3])];
        used.emplace(w, x);
        tuples.push_back({21 * B + 4 * w + 1, 19 * B + 4 * x + 1, 24 * B - 4 * (w + x) + 2});
        tuples.push_back({20 * B + 4 * (w + x) + 2, 21 * B + 4 * z + 1, 19 * B + 4 * y + 1});
    }
    for (const auto& w : W)
        for (const auto& x : X)
            if (!used.count({w, x}))
                tuples.push_back({20 * B + 4 * (w + x) + 2, 20 * B, 24 * B - 4 * (w + x) + 2});
    NumericalMatchingSolution out(std::move(tuples));
    ensure_valid(validate(a.target, out), "numerical 3DM solution");
    return out;
}

NumericalMatchingSolution project_solution(const N4dmToN3dmArtifact& a, const NumericalMatchingSolution& s)
{
    using Kind = N4dmToN3dmArtifact::Kind;
    require_valid(validate(a.target, s), "numerical 3DM solution");
    std::vector<std::pair<Integer, Integer>> pairs;
    std::map<std::pair<Integer, Integer>, std::pair<Integer, Integer>> yz;
    for (const auto& t : s.tuples)
    {
        const auto& p0 = a.provenance[0].at(t[0]);
        const auto& p1 = a.provenance[1].at(t[1]);
        const auto& p2 = a.provenance[2].at(t[2]);
        if (p0.kind == Kind::WPrime && p1.kind == Kind::XPrime && p2.kind == Kind::U)
            pairs.emplace_back(p0.first, p1.first);
        else if (p0.kind == Kind::UBar && p1.kind == Kind::ZPrime && p2.kind == Kind::YPrime)
            yz[{p0.first, p0.second}] = {p2.first, p1.first};
        else if (!(p0.kind == Kind::UBar && p1.kind == Kind::Filler && p2.kind == Kind::U))
            throw ConsistencyError("triple of an unexpected form in numerical 3DM solution");
    }
    std::vector<std::vector<Integer>> tuples;
    for (const auto& wx : pairs)
    {
        auto it = yz.find(wx);
        if (it == yz.end())
            throw ConsistencyError("no (u-bar, z', y') triple for pair (" + wx.first.str() + ", " + wx.second.str()
                                   + ")");
        std::vector<Integer> q(4);
        q[static_cast<std::size_t>(a.roles[0])] = wx.first;
        q[static_cast<std::size_t>(a.roles[1])] = wx.second;
        q[static_cast<std::size_t>(a.roles[2])] = it->second.first;
        q[static_cast<std::size_t>(a.roles[3])] = it->second.second;
        tuples.push_back(std::move(q));
    }
    NumericalMatchingSolution out(std::move(tuples));
    ensure_valid(validate(a.source, out), "numerical 4DM solution");
    if (lift_solution(a, out) != s)
        throw ConsistencyError("numerical 3DM solution is not the image of its projection");
    return out;
}

// ---------------------------------------------------------------------------
// Numerical 3DM -> Length Offsets

RunSequence<Integer> lo_densities(const NumericalMatchingInstance& inst)
{
    const Integer& t = inst.target;
    const auto& Y = inst.sets[1];
    const auto& Z = inst.sets[2];
    Integer current = static_cast<std::int64_t>(inst.n());
    std::map<Integer, std::int64_t> delta;
    for (const auto& y : Y)
    {
        if (y > 0)
            --current;
        if (y > 0)
            ++delta[y];
    }
    for (const auto& z : Z)
    {
        if (t - z <= 0)
            --current;
        else
            --delta[t - z];
    }
    RunSequence<Integer> out;
    Integer position = 0;
    for (const auto& [p, d] : delta)
    {
        if (p >= t)
            break;
        out.append(current, p - position);
        current += d;
        position = p;
    }
    out.append(current, t - position);
    return out;
}

N3dmToLoArtifact reduce_n3dm_to_lo(const NumericalMatchingInstance& inst)
{
    require_valid(validate(inst), "numerical 3DM instance");
    if (inst.k != 3)
        throw PreconditionError("expected k = 3");
    if (!is_set(inst.sets[0]))
        throw PreconditionError("X is not a set");
    if (!window_holds(inst))
        throw PreconditionError("elements must lie strictly between t/4 and t/2; apply normalize_nkdm first");
    N3dmToLoArtifact a;
    a.source = inst;
    a.target.lengths = inst.sets[0];
    a.target.horizon = inst.target;
    a.target.densities = lo_densities(inst);
    ensure_valid(validate(a.target), "Length Offsets instance");
    return a;
}

LengthOffsetsSolution lift_solution(const N3dmToLoArtifact& a, const NumericalMatchingSolution& s)
{
    require_valid(validate(a.source, s), "numerical 3DM solution");
    const auto& lengths = a.target.lengths;
    LengthOffsetsSolution out;
    out.offsets.resize(lengths.size());
    for (const auto& t : s.tuples)
    {
        auto j = static_cast<std::size_t>(std::find(lengths.begin(), lengths.end(), t[0]) - lengths.begin());
        out.offsets[j] = t[1];
    }
    ensure_valid(validate(a.target, out), "Length Offsets solution");
    return out;
}

NumericalMatchingSolution project_solution(const N3dmToLoArtifact& a, const LengthOffsetsSolution& s)
{
    require_valid(validate(a.target, s), "Length Offsets solution");
    std::vector<std::vector<Integer>> tuples;
    for (std::size_t j = 0; j < s.offsets.size(); ++j)
    {
        const Integer& x = a.target.lengths[j];
        const Integer& y = s.offsets[j];
        tuples.push_back({x, y, a.source.target - x - y});
    }
    NumericalMatchingSolution out(std::move(tuples));
    ensure_valid(validate(a.source, out), "numerical 3DM solution");
    return out;
}

// ---------------------------------------------------------------------------

bool check_endpoint_disjoint(const LengthOffsetsInstance& inst, const LengthOffsetsSolution& s)
{
    std::set<Integer> right;
    for (std::size_t j = 0; j < s.offsets.size(); ++j)
        right.insert(inst.lengths[j] + s.offsets[j]);
    for (const auto& b : s.offsets)
        if (right.count(b))
            return false;
    return true;
}

bool certify_endpoint_disjoint(const LengthOffsetsInstance& inst, const OracleLimits& limits)
{
    for (const auto& s : enumerate_lo(inst, limits))
        if (!check_endpoint_disjoint(inst, s))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Traces

namespace
{
    template <typename Indices>
    void write_indices(std::ostream& os, const char* label, const Indices& v)
    {
        os << ' ' << label;
        for (auto i : v)
            os << ' ' << i + 1;
    }

    const char* kind_name(ThreeDmToN4dmArtifact::Kind k)
    {
        using K = ThreeDmToN4dmArtifact::Kind;
        switch (k)
        {
        case K::XPlain: return "x";
        case K::XCleanup: return "x-cleanup";
        case K::YNegative: return "y-neg";
        case K::YPlain: return "y";
        case K::YCleanup: return "y-cleanup";
        case K::ZNegative: return "z-neg";
        case K::ZPlain: return "z";
        case K::TripleY: return "triple-y";
        case K::XNegative: return "x-neg";
        case K::TripleZ: return "triple-z";
        }
        return "?";
    }

    const char* kind_name(N4dmToN3dmArtifact::Kind k)
    {
        using K = N4dmToN3dmArtifact::Kind;
        switch (k)
        {
        case K::WPrime: return "w'";
        case K::UBar: return "ubar";
        case K::XPrime: return "x'";
        case K::ZPrime: return "z'";
        case K::Filler: return "C";
        case K::U: return "u";
        case K::YPrime: return "y'";
        }
        return "?";
    }

    void write(std::ostream& os, const SatTo3dmArtifact& a)
    {
        for (std::size_t v = 0; v < a.gadgets.size(); ++v)
        {
            os << "gadget " << v + 1;
            write_indices(os, "positive", a.gadgets[v].positive);
            write_indices(os, "negative", a.gadgets[v].negative);
            write_indices(os, "garbage", a.gadgets[v].garbage);
            os << '\n';
        }
        for (std::size_t part = 0; part < 3; ++part)
            for (std::size_t i = 0; i < a.names[part].size(); ++i)
                os << "vertex " << "XYZ"[part] << ' ' << i + 1 << ' ' << a.names[part][i] << '\n';
    }

    void write(std::ostream& os, const ThreeDmToN4dmArtifact& a)
    {
        os << "base " << a.base << '\n';
        os << "sum-set-pair " << a.sum_set_pair.first << ' ' << a.sum_set_pair.second << '\n';
        for (std::size_t c = 0; c < 4; ++c)
            for (const auto& [value, tag] : a.provenance[c])
                os << "value " << "WXYZ"[c] << ' ' << value << ' ' << kind_name(tag.kind) << ' '
                   << tag.index + (tag.kind == ThreeDmToN4dmArtifact::Kind::TripleY
                                           || tag.kind == ThreeDmToN4dmArtifact::Kind::TripleZ
                                       ? 1
                                       : 0)
                   << '\n';
    }

    void write(std::ostream& os, const N4dmToN3dmArtifact& a)
    {
        os << "base " << a.base << '\n';
        os << "roles " << a.roles[0] << ' ' << a.roles[1] << ' ' << a.roles[2] << ' ' << a.roles[3] << '\n';
        using K = N4dmToN3dmArtifact::Kind;
        for (std::size_t c = 0; c < 3; ++c)
            for (const auto& [value, tag] : a.provenance[c])
            {
                os << "value " << "XYZ"[c] << ' ' << value << ' ' << kind_name(tag.kind);
                if (tag.kind != K::Filler)
                    os << ' ' << tag.first;
                if (tag.kind == K::UBar || tag.kind == K::U)
                    os << ' ' << tag.second;
                os << '\n';
            }
    }

    void write(std::ostream& os, const N3dmToLoArtifact& a)
    {
        for (std::size_t j = 0; j < a.target.lengths.size(); ++j)
            os << "align " << j + 1 << ' ' << a.target.lengths[j] << '\n';
    }

    void write(std::ostream& os, const LoToPpArtifact& a)
    {
        os << "grid " << a.target.rows << ' ' << a.target.cols << '\n';
        os << "endpoint-disjoint " << (a.endpoint_disjoint ? 1 : 0) << '\n';
        for (std::size_t j = 0; j < a.block_start.size(); ++j)
        {
            os << "block " << j + 1 << " start " << a.block_start[j] << " middle " << a.middle[j];
            if (j < a.lone.size())
                os << " lone " << a.lone[j];
            os << '\n';
        }
    }
}  // namespace

std::string trace(const ReductionArtifact& a)
{
    std::ostringstream os;
    os << "trace " << stage_tag(stage_of(a)) << '\n';
    std::visit([&](const auto& x) { write(os, x); }, a);
    return os.str();
}

}  // namespace pathred
