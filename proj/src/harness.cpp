#include <pathred/harness.h>
#include <pathred/text_io.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace pathred
{

std::string problem_tag(Problem p)
{
    switch (p)
    {
    case Problem::OneInThree: return "1in3";
    case Problem::ThreeDm: return "3dm";
    case Problem::N4dm: return "n4dm";
    case Problem::N3dm: return "n3dm";
    case Problem::LengthOffsets: return "lo";
    case Problem::Puzzle: return "pp";
    }
    return "?";
}

std::optional<Problem> problem_from_tag(const std::string& tag)
{
    for (Problem p : {Problem::OneInThree, Problem::ThreeDm, Problem::N4dm, Problem::N3dm, Problem::LengthOffsets,
                      Problem::Puzzle})
        if (problem_tag(p) == tag)
            return p;
    return std::nullopt;
}

std::string serialize(const Instance& inst)
{
    return std::visit([](const auto& v) { return serialize(v); }, inst);
}

Instance parse_instance(std::string_view text)
{
    switch (detect_kind(text))
    {
    case FileKind::Cnf: return parse_cnf(text);
    case FileKind::ThreeDm: return parse_3dm(text);
    case FileKind::Nkdm: return parse_nkdm(text);
    case FileKind::LengthOffsets: return parse_lo(text);
    case FileKind::Puzzle: return parse_puzzle(text);
    default: throw PreconditionError("expected an instance file, found " + kind_name(detect_kind(text)));
    }
}

// ---------------------------------------------------------------------------
// Generators

namespace
{
    using Rng = std::mt19937_64;

    std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi)
    {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    }

    /// Fills `slots` with every item once plus random extras, shuffled.
    std::vector<std::int64_t> covering(Rng& rng, const std::vector<std::int64_t>& items, std::size_t slots)
    {
        std::vector<std::int64_t> out = items;
        while (out.size() < slots)
            out.push_back(items[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(items.size()) - 1))]);
        std::shuffle(out.begin(), out.end(), rng);
        return out;
    }

    /// Planted: one true variable and two false ones per clause, all three distinct.
    Cnf1in3 gen_1in3(const GenParams& g, Rng& rng)
    {
        const std::int64_t v = g.vars, c = g.clauses;
        const std::int64_t lo = std::max<std::int64_t>(1, v - 2 * c), hi = std::min(c, v - 2);
        if (v < 3 || c < 1 || lo > hi)
            throw PreconditionError("no planted formula with " + std::to_string(v) + " variables and "
                                    + std::to_string(c) + " clauses uses every variable");
        std::vector<std::int64_t> vars(static_cast<std::size_t>(v));
        std::iota(vars.begin(), vars.end(), 1);
        std::shuffle(vars.begin(), vars.end(), rng);
        const auto true_count = static_cast<std::size_t>(uniform(rng, lo, hi));
        const std::vector<std::int64_t> yes(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(true_count));
        const std::vector<std::int64_t> no(vars.begin() + static_cast<std::ptrdiff_t>(true_count), vars.end());

        const auto ones = covering(rng, yes, static_cast<std::size_t>(c));
        // False pairs: walk a shuffled copy of `no` so each appears once, then fill at random.
        std::vector<std::int64_t> order = no;
        std::shuffle(order.begin(), order.end(), rng);
        auto other = [&](std::int64_t not_this) {
            std::int64_t pick;
            do
                pick = no[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(no.size()) - 1))];
            while (pick == not_this);
            return pick;
        };
        std::vector<std::int64_t> pairs;
        for (std::int64_t k = 0; k < c; ++k)
        {
            const auto at = static_cast<std::size_t>(2 * k);
            const std::int64_t first = at < order.size() ? order[at] : other(0);
            const std::int64_t second = at + 1 < order.size() ? order[at + 1] : other(first);
            pairs.push_back(first);
            pairs.push_back(second);
        }
        Cnf1in3 f;
        f.variable_count = v;
        for (std::int64_t k = 0; k < c; ++k)
        {
            std::array<std::int64_t, 3> clause{ones[static_cast<std::size_t>(k)], pairs[static_cast<std::size_t>(2 * k)],
                                               pairs[static_cast<std::size_t>(2 * k + 1)]};
            std::shuffle(clause.begin(), clause.end(), rng);
            f.clauses.push_back(clause);
        }
        return f;
    }

    /// A planted perfect matching plus random triples, added greedily.
    Tripartite3dm gen_3dm(const GenParams& g, Rng& rng)
    {
        const std::int64_t n = g.n;
        if (n < 1 || n > 40)
            throw PreconditionError("3dm part size must lie in [1, 40]");
        const std::int64_t most = g.sparse ? n * n : n * n * n;
        std::int64_t want = g.triples;
        const bool exact = want != 0;  // a random target may stall below it; that is fine
        if (!exact)
            want = uniform(rng, n, std::min(most, 3 * n));
        if (want < n || want > most)
            throw PreconditionError("cannot place " + std::to_string(want) + " triples on parts of size "
                                    + std::to_string(n) + (g.sparse ? " while pairwise sparse" : ""));
        std::vector<std::int64_t> py(static_cast<std::size_t>(n)), pz(static_cast<std::size_t>(n));
        std::iota(py.begin(), py.end(), 1);
        std::iota(pz.begin(), pz.end(), 1);
        std::shuffle(py.begin(), py.end(), rng);
        std::shuffle(pz.begin(), pz.end(), rng);

        std::set<Triple> chosen;
        std::set<std::array<std::int64_t, 3>> pairs;  // (which, a, b)
        auto fits = [&](const Triple& t) {
            if (chosen.count(t))
                return false;
            return !g.sparse
                   || (!pairs.count({0, t[0], t[1]}) && !pairs.count({1, t[0], t[2]}) && !pairs.count({2, t[1], t[2]}));
        };
        auto take = [&](const Triple& t) {
            chosen.insert(t);
            pairs.insert({0, t[0], t[1]});
            pairs.insert({1, t[0], t[2]});
            pairs.insert({2, t[1], t[2]});
        };
        for (std::int64_t i = 0; i < n; ++i)
            take({i + 1, py[static_cast<std::size_t>(i)], pz[static_cast<std::size_t>(i)]});
        std::vector<Triple> pool;
        for (std::int64_t x = 1; x <= n; ++x)
            for (std::int64_t y = 1; y <= n; ++y)
                for (std::int64_t z = 1; z <= n; ++z)
                    pool.push_back({x, y, z});
        std::shuffle(pool.begin(), pool.end(), rng);
        for (const auto& t : pool)
        {
            if (static_cast<std::int64_t>(chosen.size()) >= want)
                break;
            if (fits(t))
                take(t);
        }
        if (exact && static_cast<std::int64_t>(chosen.size()) < want)
            throw PreconditionError("greedy placement stalled at " + std::to_string(chosen.size()) + " of "
                                    + std::to_string(want) + " triples");
        Tripartite3dm out;
        out.part_size = n;
        out.triples.assign(chosen.begin(), chosen.end());
        std::shuffle(out.triples.begin(), out.triples.end(), rng);
        return out;
    }

    /// Planted tuples inside the open window (t/(k+1), t/(k-1)). k = 4 keeps W distinct and
    /// all sums W + X distinct, so (W, X) is a sum-set pair; k = 3 keeps X distinct.
    NumericalMatchingInstance gen_nkdm(int k, const GenParams& g, Rng& rng)
    {
        const std::int64_t n = g.n;
        if (n < 1 || n > 12)
            throw PreconditionError("NkDM generator supports 1 <= n <= 12");
        for (int attempt = 0; attempt < 1000; ++attempt)
        {
            // Wide enough windows keep collisions rare.
            std::int64_t t_lo = k == 4 ? 40 * n : 4 * n + 12, t_hi = k == 4 ? 120 * n : 12 * n + 12;
            if (g.max_target > 0)
            {
                t_hi = std::min(t_hi, g.max_target);
                t_lo = std::min(t_lo, t_hi);
            }
            const std::int64_t t = k == 4 ? 4 * uniform(rng, (t_lo + 3) / 4, t_hi / 4) : uniform(rng, t_lo, t_hi);
            const std::int64_t lo = t / (k + 1) + 1, hi = (t - 1) / (k - 1);
            std::vector<std::vector<std::int64_t>> tuples;
            std::set<std::int64_t> firsts, sums;
            std::vector<std::int64_t> seconds;
            for (int guard = 0; guard < 10000 && static_cast<std::int64_t>(tuples.size()) < n; ++guard)
            {
                std::vector<std::int64_t> tup;
                std::int64_t rest = t;
                for (int j = 0; j + 1 < k; ++j)
                {
                    tup.push_back(uniform(rng, lo, hi));
                    rest -= tup.back();
                }
                if (rest < lo || rest > hi || firsts.count(tup[0]))
                    continue;
                if (k == 4)
                {
                    std::set<std::int64_t> fresh;
                    bool clash = false;
                    auto add_sum = [&](std::int64_t s) { clash = clash || sums.count(s) || !fresh.insert(s).second; };
                    add_sum(tup[0] + tup[1]);
                    for (auto w : firsts)
                        add_sum(w + tup[1]);
                    for (auto x : seconds)
                        add_sum(tup[0] + x);
                    if (clash)
                        continue;
                    sums.insert(fresh.begin(), fresh.end());
                }
                tup.push_back(rest);
                firsts.insert(tup[0]);
                seconds.push_back(tup[1]);
                tuples.push_back(tup);
            }
            if (static_cast<std::int64_t>(tuples.size()) < n)
                continue;
            NumericalMatchingInstance inst;
            inst.k = k;
            inst.target = t;
            inst.sets.assign(static_cast<std::size_t>(k), {});
            for (int j = 0; j < k; ++j)
            {
                for (const auto& tup : tuples)
                    inst.sets[static_cast<std::size_t>(j)].push_back(tup[static_cast<std::size_t>(j)]);
                std::shuffle(inst.sets[static_cast<std::size_t>(j)].begin(), inst.sets[static_cast<std::size_t>(j)].end(),
                             rng);
            }
            return inst;
        }
        throw PreconditionError("could not plant a window-conforming instance");
    }

    LengthOffsetsInstance gen_lo(const GenParams& g, Rng& rng)
    {
        const std::int64_t n = g.n, m = g.horizon;
        if (n < 1 || m < n)
            throw PreconditionError("Length Offsets needs 1 <= n <= m for distinct lengths");
        std::vector<std::int64_t> all(static_cast<std::size_t>(m));
        std::iota(all.begin(), all.end(), 1);
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<Integer> density(static_cast<std::size_t>(m), 0);
        LengthOffsetsInstance inst;
        inst.horizon = m;
        for (std::int64_t j = 0; j < n; ++j)
        {
            const std::int64_t a = all[static_cast<std::size_t>(j)];
            const std::int64_t b = uniform(rng, 0, m - a);
            inst.lengths.push_back(a);
            for (std::int64_t i = b; i < b + a; ++i)
                density[static_cast<std::size_t>(i)] += 1;
        }
        inst.densities = RunSequence<Integer>(density);
        return inst;
    }

    Side boundary_side(const Cell& c, std::int64_t rows, std::int64_t cols)
    {
        if (c.col == 1)
            return Side::Left;
        if (c.col == cols)
            return Side::Right;
        return c.row == rows ? Side::Top : Side::Bottom;
    }

    bool on_boundary(const Cell& c, std::int64_t rows, std::int64_t cols)
    {
        return c.row == 1 || c.row == rows || c.col == 1 || c.col == cols;
    }

    /// A random self-avoiding walk between boundary cells; about a quarter of the lines blank.
    PathPuzzle gen_pp(const GenParams& g, Rng& rng)
    {
        const std::int64_t rows = g.rows, cols = g.cols;
        if (rows < 1 || cols < 1 || rows * cols < 2 || rows * cols > 400)
            throw PreconditionError("puzzle generator supports 2..400 cells");
        for (int attempt = 0; attempt < 10000; ++attempt)
        {
            std::vector<Cell> path;
            do
                path = {Cell{uniform(rng, 1, rows), uniform(rng, 1, cols)}};
            while (!on_boundary(path[0], rows, cols));
            std::set<Cell> seen{path[0]};
            const std::int64_t length = uniform(rng, 1, rows * cols);
            while (static_cast<std::int64_t>(path.size()) < length)
            {
                std::vector<Cell> options;
                for (auto [dr, dc] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                {
                    const Cell n{path.back().row + dr, path.back().col + dc};
                    if (n.row >= 1 && n.row <= rows && n.col >= 1 && n.col <= cols && !seen.count(n))
                        options.push_back(n);
                }
                if (options.empty())
                    break;
                path.push_back(options[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(options.size()) - 1))]);
                seen.insert(path.back());
            }
            if (path.size() < 2 || !on_boundary(path.back(), rows, cols))
                continue;
            std::vector<Label> row_labels(static_cast<std::size_t>(rows)), col_labels(static_cast<std::size_t>(cols));
            for (std::int64_t r = 1; r <= rows; ++r)
                if (uniform(rng, 0, 3) != 0)
                    row_labels[static_cast<std::size_t>(r - 1)] =
                        Integer(std::count_if(path.begin(), path.end(), [&](const Cell& c) { return c.row == r; }));
            for (std::int64_t c = 1; c <= cols; ++c)
                if (uniform(rng, 0, 3) != 0)
                    col_labels[static_cast<std::size_t>(c - 1)] =
                        Integer(std::count_if(path.begin(), path.end(), [&](const Cell& x) { return x.col == c; }));
            PathPuzzle p;
            p.rows = rows;
            p.cols = cols;
            p.doors = {Door{path.front().row, path.front().col, boundary_side(path.front(), rows, cols)},
                       Door{path.back().row, path.back().col, boundary_side(path.back(), rows, cols)}};
            p.row_labels = RunSequence<Label>(row_labels);
            p.col_labels = RunSequence<Label>(col_labels);
            return p;
        }
        throw PreconditionError("could not plant a boundary-to-boundary walk");
    }
}  // namespace

Instance gen_instance(Problem problem, const GenParams& params, std::uint64_t seed)
{
    Rng rng(seed);
    switch (problem)
    {
    case Problem::OneInThree: return gen_1in3(params, rng);
    case Problem::ThreeDm: return gen_3dm(params, rng);
    case Problem::N4dm: return gen_nkdm(4, params, rng);
    case Problem::N3dm: return gen_nkdm(3, params, rng);
    case Problem::LengthOffsets: return gen_lo(params, rng);
    case Problem::Puzzle: return gen_pp(params, rng);
    }
    throw PreconditionError("unknown problem");
}

// ---------------------------------------------------------------------------
// Parsimony checks

std::string verdict_tag(Verdict v)
{
    switch (v)
    {
    case Verdict::Equal: return "equal";
    case Verdict::Mismatch: return "mismatch";
    case Verdict::OracleCap: return "oracle-cap";
    case Verdict::SearchBudget: return "search-budget";
    }
    return "?";
}

std::string digest(const std::string& text)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace
{
    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point start)
    {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }

    /// Outcome of enumerating one side.
    template <typename Solution>
    struct Side
    {
        std::optional<std::vector<Solution>> solutions;
        std::optional<SolutionCount> count;
        std::optional<Verdict> blocked;  ///< OracleCap or SearchBudget
        double seconds = 0;
    };

    std::vector<Assignment> solutions_of(const Cnf1in3& f, const HarnessOptions& o) { return enumerate_1in3(f, o.limits); }
    std::vector<ThreeDmSolution> solutions_of(const Tripartite3dm& g, const HarnessOptions& o)
    {
        return enumerate_3dm(g, o.limits);
    }
    std::vector<NumericalMatchingSolution> solutions_of(const NumericalMatchingInstance& i, const HarnessOptions& o)
    {
        return enumerate_nkdm(i, o.limits);
    }
    std::vector<LengthOffsetsSolution> solutions_of(const LengthOffsetsInstance& i, const HarnessOptions& o)
    {
        return enumerate_lo(i, o.limits);
    }

    template <typename Instance>
    auto enumerate_side(const Instance& inst, const HarnessOptions& o)
    {
        using Solution = typename decltype(solutions_of(inst, o))::value_type;
        Side<Solution> side;
        const auto start = Clock::now();
        try
        {
            auto sols = solutions_of(inst, o);
            std::sort(sols.begin(), sols.end());
            side.count = SolutionCount(static_cast<std::uint64_t>(sols.size()));
            side.solutions = std::move(sols);
        }
        catch (const OracleCapExceeded&)
        {
            side.blocked = Verdict::OracleCap;
        }
        catch (const SearchBudgetExceeded&)
        {
            side.blocked = Verdict::SearchBudget;
        }
        side.seconds = seconds_since(start);
        return side;
    }

    /// Puzzles: the frontier engine counts, the backtracking engine enumerates.
    Side<GridPath> enumerate_side(const PathPuzzle& p, const HarnessOptions& o, std::vector<std::string>& notes)
    {
        Side<GridPath> side;
        if (p.rows * p.cols > o.search.max_cells)
        {
            side.blocked = Verdict::OracleCap;
            notes.push_back("target: grid of " + p.rows.str() + " x " + p.cols.str() + " cells exceeds the cap of "
                            + std::to_string(o.search.max_cells));
            return side;
        }
        const auto start = Clock::now();
        try
        {
            SearchOptions counting = o.search;
            counting.engine = SearchEngine::Transfer;
            side.count = count_paths(p, counting);
        }
        catch (const SearchBudgetExceeded& e)
        {
            side.blocked = Verdict::SearchBudget;
            notes.push_back(std::string("target count: ") + e.what());
        }
        if (p.rows * p.cols > o.enumeration_max_cells)
        {
            notes.push_back("target not enumerated: more than " + std::to_string(o.enumeration_max_cells) + " cells");
            side.seconds = seconds_since(start);
            return side;
        }
        try
        {
            SearchOptions walking = o.search;
            walking.engine = SearchEngine::Backtrack;
            walking.node_budget = o.enumeration_budget;
            auto paths = enumerate_paths(p, walking);
            std::sort(paths.begin(), paths.end());
            if (side.count && SolutionCount(static_cast<std::uint64_t>(paths.size())) != *side.count)
                notes.push_back("path engines disagree: frontier " + side.count->str() + ", backtracking "
                                + std::to_string(paths.size()));
            if (!side.count)
                side.count = SolutionCount(static_cast<std::uint64_t>(paths.size()));
            side.solutions = std::move(paths);
            side.blocked.reset();
        }
        catch (const SearchBudgetExceeded& e)
        {
            side.blocked = Verdict::SearchBudget;
            notes.push_back(std::string("target enumeration: ") + e.what());
        }
        side.seconds = seconds_since(start);
        return side;
    }

    template <typename T>
    bool contains(const std::vector<T>& sorted, const T& v)
    {
        return std::binary_search(sorted.begin(), sorted.end(), v);
    }

    template <typename S, typename T, typename Lift, typename Project>
    void round_trip(ParsimonyReport& r, const std::optional<std::vector<S>>& sources,
                    const std::optional<std::vector<T>>& targets, Lift lift, Project project)
    {
        if (!sources || !targets)
        {
            r.notes.push_back("round trip skipped: a side could not be enumerated");
            return;
        }
        bool ok = true;
        auto fail = [&](const std::string& what) {
            if (ok)
                r.notes.push_back("round trip: " + what);
            ok = false;
        };
        for (std::size_t i = 0; i < sources->size(); ++i)
        {
            const S& s = (*sources)[i];
            try
            {
                const T t = lift(s);
                if (!contains(*targets, t))
                    fail("lift of source solution " + std::to_string(i) + " is not a target solution");
                else if (!(project(t) == s))
                    fail("project(lift(s)) != s for source solution " + std::to_string(i));
            }
            catch (const Error& e)
            {
                fail("source solution " + std::to_string(i) + ": " + e.what());
            }
            ++r.round_trip_checked;
        }
        for (std::size_t i = 0; i < targets->size(); ++i)
        {
            const T& t = (*targets)[i];
            try
            {
                const S s = project(t);
                if (!contains(*sources, s))
                    fail("projection of target solution " + std::to_string(i) + " is not a source solution");
                else if (!(lift(s) == t))
                    fail("lift(project(t)) != t for target solution " + std::to_string(i));
            }
            catch (const Error& e)
            {
                fail("target solution " + std::to_string(i) + ": " + e.what());
            }
            ++r.round_trip_checked;
        }
        r.round_trip = ok;
    }

    void invariant(ParsimonyReport& r, bool holds, const std::string& locus, const std::string& message)
    {
        if (!holds)
            r.invariants.push_back(Violation{locus, message});
    }

    template <typename S, typename T>
    void finish(ParsimonyReport& r, const Side<S>& source, const Side<T>& target)
    {
        r.source_count = source.count;
        r.target_count = target.count;
        r.source_seconds = source.seconds;
        r.target_seconds = target.seconds;
        const bool differ = r.source_count && r.target_count && !(*r.source_count == *r.target_count);
        const bool engines = std::any_of(r.notes.begin(), r.notes.end(),
                                         [](const std::string& n) { return n.rfind("path engines disagree", 0) == 0; });
        if (differ || engines || r.round_trip == false || !r.invariants.empty())
            r.verdict = Verdict::Mismatch;
        else if (source.blocked == Verdict::SearchBudget || target.blocked == Verdict::SearchBudget)
            r.verdict = Verdict::SearchBudget;
        else if (!r.source_count || !r.target_count || !r.round_trip)
            r.verdict = Verdict::OracleCap;
        else
            r.verdict = Verdict::Equal;
    }

    ParsimonyReport check(const SatTo3dmArtifact& a, const HarnessOptions& o)
    {
        ParsimonyReport r;
        r.stage = Stage::SatTo3dm;
        r.source_digest = digest(serialize(a.source));
        invariant(r, is_pairwise_sparse(a.target), "target", "not pairwise sparse");
        const auto source = enumerate_side(a.source, o);
        const auto target = enumerate_side(a.target, o);
        round_trip(
            r, source.solutions, target.solutions, [&](const Assignment& s) { return lift_solution(a, s); },
            [&](const ThreeDmSolution& t) { return project_solution(a, t); });
        finish(r, source, target);
        return r;
    }

    ParsimonyReport check(const ThreeDmToN4dmArtifact& a, const HarnessOptions& o)
    {
        ParsimonyReport r;
        r.stage = Stage::ThreeDmToN4dm;
        r.source_digest = digest(serialize(a.source));
        invariant(r, union_with_sums_is_set(a.target.sets[2], a.target.sets[3]), "target",
                  "Y' together with Y' + Z' is not a set");
        const auto source = enumerate_side(a.source, o);
        const auto target = enumerate_side(a.target, o);
        round_trip(
            r, source.solutions, target.solutions, [&](const ThreeDmSolution& s) { return lift_solution(a, s); },
            [&](const NumericalMatchingSolution& t) { return project_solution(a, t); });
        finish(r, source, target);
        return r;
    }

    ParsimonyReport check(const N4dmToN3dmArtifact& a, const HarnessOptions& o)
    {
        ParsimonyReport r;
        r.stage = Stage::N4dmToN3dm;
        r.source_digest = digest(serialize(a.source));
        invariant(r, set_flags(a.target)[0], "target", "X' is not a set");
        invariant(r, mod4_separated(a), "target", "element families are not separated mod 4");
        const auto source = enumerate_side(a.source, o);
        const auto target = enumerate_side(a.target, o);
        round_trip(
            r, source.solutions, target.solutions,
            [&](const NumericalMatchingSolution& s) { return lift_solution(a, s); },
            [&](const NumericalMatchingSolution& t) { return project_solution(a, t); });
        finish(r, source, target);
        return r;
    }

    ParsimonyReport check(const N3dmToLoArtifact& a, const HarnessOptions& o)
    {
        ParsimonyReport r;
        r.stage = Stage::N3dmToLo;
        r.source_digest = digest(serialize(a.source));
        const auto source = enumerate_side(a.source, o);
        const auto target = enumerate_side(a.target, o);
        if (target.solutions)
            for (std::size_t i = 0; i < target.solutions->size(); ++i)
                invariant(r, check_endpoint_disjoint(a.target, (*target.solutions)[i]), "target solution " + std::to_string(i),
                          "an offset coincides with a right endpoint");
        else
            r.notes.push_back("endpoint disjointness not checked: target not enumerated");
        round_trip(
            r, source.solutions, target.solutions,
            [&](const NumericalMatchingSolution& s) { return lift_solution(a, s); },
            [&](const LengthOffsetsSolution& t) { return project_solution(a, t); });
        finish(r, source, target);
        return r;
    }

    ParsimonyReport check(const LoToPpArtifact& a, const HarnessOptions& o)
    {
        ParsimonyReport r;
        r.stage = Stage::LoToPp;
        r.source_digest = digest(serialize(a.source));
        if (auto v = validate(a.target); !v.empty())
            r.invariants.insert(r.invariants.end(), v.begin(), v.end());
        const auto source = enumerate_side(a.source, o);
        const auto target = enumerate_side(a.target, o, r.notes);
        round_trip(
            r, source.solutions, target.solutions,
            [&](const LengthOffsetsSolution& s) { return canonical(lift_lo_solution_to_path(a, s)); },
            [&](const GridPath& t) { return project_path_to_lo(a, t); });
        finish(r, source, target);
        return r;
    }

    template <typename T>
    const T& expect(const Instance& inst, const char* what)
    {
        if (const T* v = std::get_if<T>(&inst))
            return *v;
        throw PreconditionError(std::string("this stage reduces ") + what);
    }

    const NumericalMatchingInstance& expect_nkdm(const Instance& inst, int k)
    {
        const auto& v = expect<NumericalMatchingInstance>(inst, k == 4 ? "an n4dm instance" : "an n3dm instance");
        if (v.k != k)
            throw PreconditionError("expected k = " + std::to_string(k) + ", found k = " + std::to_string(v.k));
        return v;
    }

    /// Builds one stage. `from_n3dm` records that an LO source came out of the previous stage,
    /// whose solutions are endpoint-disjoint by construction.
    ReductionArtifact build(Stage stage, const Instance& source, const HarnessOptions& o, bool from_n3dm)
    {
        switch (stage)
        {
        case Stage::SatTo3dm: return reduce_sat_to_3dm(expect<Cnf1in3>(source, "a 1in3 formula"));
        case Stage::ThreeDmToN4dm: return reduce_3dm_to_n4dm(expect<Tripartite3dm>(source, "a 3dm instance"));
        case Stage::N4dmToN3dm:
        {
            const auto& inst = expect_nkdm(source, 4);
            const auto pair = find_sum_set_pair(inst);
            if (!pair)
                throw PreconditionError("no coordinate pair whose union with its sums is a set");
            return reduce_n4dm_to_n3dm(inst, *pair);
        }
        case Stage::N3dmToLo: return reduce_n3dm_to_lo(expect_nkdm(source, 3));
        case Stage::LoToPp:
        {
            const auto& inst = expect<LengthOffsetsInstance>(source, "a Length Offsets instance");
            bool disjoint = from_n3dm;
            if (!disjoint)
            {
                try
                {
                    disjoint = certify_endpoint_disjoint(inst, o.limits);
                }
                catch (const OracleCapExceeded&)
                {
                }
            }
            return reduce_lo_to_pp(inst, disjoint);
        }
        }
        throw PreconditionError("unknown stage");
    }

    Instance target_of(const ReductionArtifact& a)
    {
        return std::visit([](const auto& v) { return Instance(v.target); }, a);
    }
}  // namespace

ParsimonyReport check_parsimony(const ReductionArtifact& artifact, const HarnessOptions& options)
{
    return std::visit([&](const auto& a) { return check(a, options); }, artifact);
}

ParsimonyReport check_parsimony(Stage stage, const Instance& source, const HarnessOptions& options)
{
    return check_parsimony(build(stage, source, options, false), options);
}

bool ChainResult::all_equal() const
{
    return std::all_of(steps.begin(), steps.end(), [](const ChainStep& s) { return s.report.verdict == Verdict::Equal; });
}

std::optional<Stage> first_stage(const Instance& source)
{
    if (std::holds_alternative<Cnf1in3>(source))
        return Stage::SatTo3dm;
    if (std::holds_alternative<Tripartite3dm>(source))
        return Stage::ThreeDmToN4dm;
    if (const auto* v = std::get_if<NumericalMatchingInstance>(&source))
    {
        if (v->k == 4)
            return Stage::N4dmToN3dm;
        if (v->k == 3)
            return Stage::N3dmToLo;
        return std::nullopt;
    }
    if (std::holds_alternative<LengthOffsetsInstance>(source))
        return Stage::LoToPp;
    return std::nullopt;
}

ChainResult run_chain(const Instance& source, Stage stop, const HarnessOptions& options)
{
    const auto first = first_stage(source);
    if (!first)
        throw PreconditionError("no reduction starts from this instance");
    ChainResult out;
    Instance current = source;
    for (int s = static_cast<int>(*first); s <= static_cast<int>(stop); ++s)
    {
        const auto stage = static_cast<Stage>(s);
        Normalization norm;
        if (stage == Stage::N4dmToN3dm || stage == Stage::N3dmToLo)
        {
            const auto& inst = std::get<NumericalMatchingInstance>(current);
            if (!in_window(inst))
            {
                auto normalized = normalize_nkdm(inst);
                norm = normalized.map;
                current = std::move(normalized.instance);
            }
        }
        auto artifact = build(stage, current, options, stage == Stage::LoToPp && s != static_cast<int>(*first));
        auto report = check_parsimony(artifact, options);
        if (!norm.identity())
            report.notes.push_back("source normalized: shift " + norm.shift.str() + ", scale " + norm.scale.str());
        current = target_of(artifact);
        out.steps.push_back(ChainStep{std::move(artifact), std::move(report), norm});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize(const ParsimonyReport& r, bool timings)
{
    auto count = [](const std::optional<SolutionCount>& c) { return c ? c->str() : std::string("-"); };
    std::ostringstream os;
    os << "report " << stage_tag(r.stage) << "\n";
    os << "digest " << r.source_digest << "\n";
    os << "source-count " << count(r.source_count) << "\n";
    os << "target-count " << count(r.target_count) << "\n";
    os << "verdict " << verdict_tag(r.verdict) << "\n";
    os << "round-trip " << (!r.round_trip ? "skipped" : *r.round_trip ? "ok" : "failed") << " " << r.round_trip_checked
       << "\n";
    os << "invariants " << (r.invariants.empty() ? "ok" : join(r.invariants)) << "\n";
    for (const auto& n : r.notes)
        os << "note " << n << "\n";
    if (timings)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", r.source_seconds);
        os << "source-seconds " << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.6f", r.target_seconds);
        os << "target-seconds " << buf << "\n";
    }
    os << "end\n";
    return os.str();
}

std::string serialize(const ChainResult& c, bool timings)
{
    std::string out = "chain " + std::to_string(c.steps.size()) + "\n";
    for (const auto& step : c.steps)
        out += serialize(step.report, timings);
    return out;
}

int exit_code(const std::vector<ParsimonyReport>& reports)
{
    bool blocked = false;
    for (const auto& r : reports)
    {
        if (r.verdict == Verdict::Mismatch)
            return 1;
        blocked = blocked || r.verdict != Verdict::Equal;
    }
    return blocked ? 3 : 0;
}

}  // namespace pathred
