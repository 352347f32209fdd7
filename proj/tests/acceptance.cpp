// Acceptance run: one PASS/FAIL line per criterion. Tolerances and time limits are fixed here.
#include <pathred/harness.h>
#include <pathred/pathpuzzle.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace pathred;

namespace
{
    constexpr int kSeeds = 200;

    struct Outcome
    {
        bool pass = true;
        std::string detail;
    };

    const NumericalMatchingInstance kSample{3, {{5, 6, 7}, {4, 5, 5}, {4, 4, 5}}, 15};

    HarnessOptions stage_options()
    {
        HarnessOptions o;
        o.limits.max_nkdm_n = 20;  // n = 4 in N4DM gives n' = 20 in N3DM
        return o;
    }

    /// Criterion-3 fixture for one stage and seed, inside the stated caps.
    Instance fixture(Stage stage, int seed)
    {
        const auto s = static_cast<std::uint64_t>(seed);
        GenParams g;
        switch (stage)
        {
        case Stage::SatTo3dm:
            g.clauses = 1 + seed % 4;
            g.vars = std::min<std::int64_t>(8, 3 + seed % 6);
            g.vars = std::min<std::int64_t>(g.vars, 3 * g.clauses);
            return gen_instance(Problem::OneInThree, g, s);
        case Stage::ThreeDmToN4dm:
            g.n = 1 + seed % 3;
            return gen_instance(Problem::ThreeDm, g, s);
        case Stage::N4dmToN3dm:
            g.n = 1 + seed % 4;
            return gen_instance(Problem::N4dm, g, s);
        case Stage::N3dmToLo:
            g.n = 1 + seed % 3;
            g.max_target = 20;
            return gen_instance(Problem::N3dm, g, s);
        case Stage::LoToPp:
            g.n = 1 + seed % 2;
            g.horizon = 2 + seed % 5;
            return gen_instance(Problem::LengthOffsets, g, s);
        }
        return {};
    }

    struct Fixtures
    {
        std::map<Stage, std::vector<ParsimonyReport>> reports;
        std::vector<LoToPpArtifact> puzzles;
    };

    Fixtures& fixtures()
    {
        static Fixtures f = [] {
            Fixtures out;
            const auto opts = stage_options();
            for (Stage stage : {Stage::SatTo3dm, Stage::ThreeDmToN4dm, Stage::N4dmToN3dm, Stage::N3dmToLo, Stage::LoToPp})
                for (int seed = 0; seed < kSeeds; ++seed)
                {
                    const auto inst = fixture(stage, seed);
                    out.reports[stage].push_back(check_parsimony(stage, inst, opts));
                    if (stage == Stage::LoToPp)
                    {
                        const auto& lo = std::get<LengthOffsetsInstance>(inst);
                        out.puzzles.push_back(reduce_lo_to_pp(lo, certify_endpoint_disjoint(lo)));
                    }
                }
            return out;
        }();
        return f;
    }

    Outcome golden_lo()
    {
        Outcome o;
        const auto a = reduce_n3dm_to_lo(kSample);
        const std::vector<Integer> want{0, 0, 0, 0, 1, 3, 3, 3, 3, 3, 2, 0, 0, 0, 0};
        const auto lo = count_lo(a.target), nk = count_nkdm(kSample);
        const auto b = lift_solution(a, NumericalMatchingSolution({{5, 5, 5}, {6, 5, 4}, {7, 4, 4}}));
        o.pass = a.target.densities.to_vector() == want && lo == SolutionCount(1) && nk == SolutionCount(1)
                 && b.offsets == std::vector<Integer>{5, 5, 4};
        o.detail = "count_lo " + lo.str() + " count_nkdm " + nk.str();
        return o;
    }

    Outcome golden_pp()
    {
        Outcome o;
        const auto a = reduce_lo_to_pp(reduce_n3dm_to_lo(kSample).target, true);
        const auto& p = a.target;
        const auto top = std::set<Integer>{*p.row_labels.at(to_int64(p.rows) - 1), *p.row_labels.at(to_int64(p.rows) - 2)};
        std::vector<Integer> middle;
        for (const auto& c : a.middle)
            middle.push_back(*p.col_labels.at(to_int64(c) - 1));
        const auto path = lift_lo_solution_to_path(a, LengthOffsetsSolution{{5, 5, 4}});
        const auto v = verify_path(p, path);
        o.pass = p.rows == 33 && p.cols == 125 && a.lone == std::vector<Integer>{42, 84}
                 && middle == std::vector<Integer>{11, 13, 15} && top == std::set<Integer>{12, 14} && v.empty();
        o.detail = p.rows.str() + "x" + p.cols.str() + ", path " + (v.empty() ? "verified" : v.front().str());
        return o;
    }

    Outcome stage_parsimony()
    {
        Outcome o;
        std::ostringstream d;
        for (const auto& [stage, reports] : fixtures().reports)
        {
            int equal = 0, round_trip = 0;
            std::map<std::string, int> other;
            std::string example;
            for (const auto& r : reports)
            {
                const bool ok = r.verdict == Verdict::Equal;
                equal += ok;
                round_trip += r.round_trip.value_or(false);
                if (!ok)
                {
                    ++other[verdict_tag(r.verdict)];
                    if (example.empty() && r.source_count && r.target_count)
                        example = " e.g. " + r.source_count->str() + " vs " + r.target_count->str();
                }
            }
            o.pass = o.pass && equal == kSeeds && round_trip == kSeeds;
            d << stage_tag(stage) << " " << equal << "/" << kSeeds << " equal";
            for (const auto& [tag, n] : other)
                d << " " << n << " " << tag;
            d << example << ", round trip " << round_trip;
            if (stage == Stage::LoToPp)
            {
                int doubled = 0;
                for (std::size_t i = 0; i < reports.size(); ++i)
                    doubled += reports[i].source_count && reports[i].target_count
                               && reports[i].target_count->value()
                                      == (Integer(1) << static_cast<unsigned>(fixtures().puzzles[i].n))
                                             * reports[i].source_count->value();
                d << ", target = 2^n * source in " << doubled;
            }
            d << "; ";
        }
        o.detail = d.str();
        return o;
    }

    Outcome invariants()
    {
        Outcome o;
        int violations = 0;
        std::string first;
        for (const auto& [stage, reports] : fixtures().reports)
            for (const auto& r : reports)
            {
                violations += static_cast<int>(r.invariants.size());
                if (first.empty() && !r.invariants.empty())
                    first = stage_tag(stage) + ": " + r.invariants.front().str();
            }
        o.pass = violations == 0;
        o.detail = std::to_string(violations) + " violations" + (first.empty() ? "" : ", first " + first);
        return o;
    }

    Outcome perfect_information()
    {
        Outcome o;
        int checked = 0, skipped = 0, bad = 0;
        for (const auto& a : fixtures().puzzles)
        {
            if (!a.endpoint_disjoint)
            {
                ++skipped;
                continue;
            }
            ++checked;
            const auto full = complete_row_labels(a);
            auto partial = enumerate_paths(a.target), complete = enumerate_paths(full);
            bool ok = partial == complete;
            Integer rows = 0, cols = 0;
            for (const auto& l : full.row_labels.to_vector())
                rows += l.value_or(-1);
            for (const auto& l : full.col_labels.to_vector())
                cols += l.value_or(-1);
            for (const auto& path : complete)
                ok = ok && rows == cols && rows == Integer(path.cells.size());
            bad += !ok;
        }
        o.pass = bad == 0 && checked > 0;
        o.detail = std::to_string(checked) + " fixtures, " + std::to_string(bad) + " differ, " + std::to_string(skipped)
                   + " without endpoint disjointness skipped";
        return o;
    }

    Outcome engine_cross_check()
    {
        Outcome o;
        std::vector<PathPuzzle> small;
        for (const auto& a : fixtures().puzzles)
            if (a.target.rows * a.target.cols <= 9 * 17)
                small.push_back(a.target);
        for (int seed = 0; seed < kSeeds; ++seed)
        {
            GenParams g;
            g.rows = 2 + seed % 8;
            g.cols = 2 + (seed / 8) % 8;
            small.push_back(std::get<PathPuzzle>(gen_instance(Problem::Puzzle, g, static_cast<std::uint64_t>(seed))));
        }
        SearchOptions pruned, paranoid;
        paranoid.paranoid = true;
        int bad = 0;
        for (const auto& p : small)
            bad += count_paths(p, pruned) != count_paths(p, paranoid);
        o.pass = bad == 0;
        o.detail = std::to_string(small.size()) + " puzzles, " + std::to_string(bad) + " differ";
        return o;
    }

    Outcome end_to_end()
    {
        Outcome o;
        std::ostringstream d;
        const auto single = run_chain(Cnf1in3{3, {{1, 2, 3}}});
        const auto& first = single.steps.front().report;
        const bool single_ok = single.steps.size() == 5 && first.verdict == Verdict::Equal
                               && first.source_count == SolutionCount(3) && first.target_count == SolutionCount(3);
        d << "single clause " << (first.source_count ? first.source_count->str() : "-") << " = "
          << (first.target_count ? first.target_count->str() : "-") << ", " << single.steps.size()
          << " stages constructed; micro";

        HarnessOptions opts;
        opts.limits.max_lo_horizon = 260;  // the micro chain reaches m = 260
        const auto micro = run_chain(NumericalMatchingInstance{4, {{1}, {1}, {1}, {1}}, 4}, Stage::LoToPp, opts);
        bool micro_ok = micro.steps.size() == 3;
        for (const auto& s : micro.steps)
        {
            const auto& r = s.report;
            const bool one = r.source_count == SolutionCount(1) && r.target_count == SolutionCount(1);
            micro_ok = micro_ok && one && r.verdict == Verdict::Equal;
            d << " " << stage_tag(r.stage) << " " << (r.source_count ? r.source_count->str() : "-") << "/"
              << (r.target_count ? r.target_count->str() : "-");
        }
        o.pass = single_ok && micro_ok;
        o.detail = d.str();
        return o;
    }
}  // namespace

int main()
{
    struct Criterion
    {
        int id;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    // Criteria 3 to 6 share the fixture build; its cost is charged to criterion 3.
    const std::vector<Criterion> criteria{
        {1, 1.0, golden_lo},     {2, 1.0, golden_pp},           {3, 600.0, stage_parsimony},
        {4, 600.0, invariants},  {5, 600.0, perfect_information}, {6, 300.0, engine_cross_check},
        {7, 120.0, end_to_end},
    };
    int failures = 0;
    for (const auto& c : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("error: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = o.pass && seconds < c.limit_seconds;
        failures += !pass;
        std::printf("criterion %d: %s (%.2fs, limit %.0fs) %s\n", c.id, pass ? "PASS" : "FAIL", seconds,
                    c.limit_seconds, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
