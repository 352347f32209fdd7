// pathred: generate, reduce, solve and cross-check instances along the reduction chain.
#include <pathred/harness.h>
#include <pathred/text_io.h>

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace pathred;

namespace
{
    struct Global
    {
        std::uint64_t seed = 1;
        std::vector<std::string> caps;
        std::uint64_t budget = 0;
        std::string format = "auto";
    };

    HarnessOptions harness_options(const Global& g)
    {
        HarnessOptions o;
        if (g.budget)
            o.search.node_budget = o.enumeration_budget = g.budget;
        for (const auto& cap : g.caps)
        {
            const auto eq = cap.find('=');
            if (eq == std::string::npos)
                throw PreconditionError("--cap expects name=value, got '" + cap + "'");
            const std::string name = cap.substr(0, eq);
            std::int64_t value = 0;
            try
            {
                value = std::stoll(cap.substr(eq + 1));
            }
            catch (const std::exception&)
            {
                throw PreconditionError("--cap " + name + ": not an integer");
            }
            if (name == "sat-vars")
                o.limits.max_sat_variables = value;
            else if (name == "3dm-n")
                o.limits.max_3dm_part_size = value;
            else if (name == "nkdm-n")
                o.limits.max_nkdm_n = static_cast<std::size_t>(value);
            else if (name == "lo-n")
                o.limits.max_lo_n = static_cast<std::size_t>(value);
            else if (name == "lo-m")
                o.limits.max_lo_horizon = value;
            else if (name == "pp-cells")
                o.search.max_cells = value;
            else if (name == "pp-states")
                o.search.max_states = static_cast<std::size_t>(value);
            else if (name == "pp-enum-cells")
                o.enumeration_max_cells = value;
            else
                throw PreconditionError("unknown cap '" + name
                                        + "' (sat-vars, 3dm-n, nkdm-n, lo-n, lo-m, pp-cells, pp-states, pp-enum-cells)");
        }
        return o;
    }

    std::string read_input(const std::string& path)
    {
        if (path == "-")
            return std::string(std::istreambuf_iterator<char>(std::cin), {});
        return read_file(path);
    }

    void write_output(const std::string& path, const std::string& text)
    {
        if (path.empty() || path == "-")
            std::cout << text;
        else
            write_file(path, text);
    }

    Instance load_instance(const std::string& path, const Global& g)
    {
        const std::string text = read_input(path);
        if (g.format != "auto" && kind_name(detect_kind(text)) != g.format)
            throw PreconditionError(path + ": expected a '" + g.format + "' file, found '" + kind_name(detect_kind(text)) + "'");
        return parse_instance(text);
    }

    Stage stage_arg(const std::string& tag, const Instance& inst)
    {
        if (tag.empty())
        {
            if (auto s = first_stage(inst))
                return *s;
            throw PreconditionError("no reduction starts from a puzzle");
        }
        if (auto s = stage_from_tag(tag))
            return *s;
        throw PreconditionError("unknown stage '" + tag + "' (sat-3dm, 3dm-n4dm, n4dm-n3dm, n3dm-lo, lo-pp)");
    }

    /// Builds the artifact the way check_parsimony does.
    ReductionArtifact reduce(Stage stage, const Instance& inst, const HarnessOptions& o)
    {
        auto need = [&](auto* p, const char* what) -> decltype(*p) {
            if (!p)
                throw PreconditionError(std::string("stage ") + stage_tag(stage) + " reduces " + what);
            return *p;
        };
        switch (stage)
        {
        case Stage::SatTo3dm: return reduce_sat_to_3dm(need(std::get_if<Cnf1in3>(&inst), "a p1in3 formula"));
        case Stage::ThreeDmToN4dm: return reduce_3dm_to_n4dm(need(std::get_if<Tripartite3dm>(&inst), "a 3dm instance"));
        case Stage::N4dmToN3dm:
        {
            const auto& v = need(std::get_if<NumericalMatchingInstance>(&inst), "an nkdm instance with k = 4");
            const auto pair = find_sum_set_pair(v);
            if (!pair)
                throw PreconditionError("no coordinate pair whose union with its sums is a set");
            return reduce_n4dm_to_n3dm(v, *pair);
        }
        case Stage::N3dmToLo: return reduce_n3dm_to_lo(need(std::get_if<NumericalMatchingInstance>(&inst), "an nkdm instance"));
        case Stage::LoToPp:
        {
            const auto& v = need(std::get_if<LengthOffsetsInstance>(&inst), "an lo instance");
            bool disjoint = false;
            try
            {
                disjoint = certify_endpoint_disjoint(v, o.limits);
            }
            catch (const OracleCapExceeded&)
            {
            }
            return reduce_lo_to_pp(v, disjoint);
        }
        }
        throw PreconditionError("unknown stage");
    }

    std::string target_text(const ReductionArtifact& a)
    {
        return std::visit([](const auto& v) { return serialize(v.target); }, a);
    }

    // Solutions of any instance kind, as text.
    std::vector<std::string> solutions(const Instance& inst, const HarnessOptions& o, bool first_only)
    {
        std::vector<std::string> out;
        auto keep = [&](auto&& list, auto&& text) {
            for (const auto& s : list)
            {
                out.push_back(text(s));
                if (first_only)
                    break;
            }
        };
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Cnf1in3>)
                    keep(enumerate_1in3(v, o.limits), [](const Assignment& s) { return serialize(s); });
                else if constexpr (std::is_same_v<T, Tripartite3dm>)
                    keep(enumerate_3dm(v, o.limits), [&](const ThreeDmSolution& s) { return serialize(v, s); });
                else if constexpr (std::is_same_v<T, NumericalMatchingInstance>)
                    keep(enumerate_nkdm(v, o.limits), [](const NumericalMatchingSolution& s) { return serialize(s); });
                else if constexpr (std::is_same_v<T, LengthOffsetsInstance>)
                    keep(enumerate_lo(v, o.limits), [](const LengthOffsetsSolution& s) { return serialize(s); });
                else
                {
                    SearchOptions walk = o.search;
                    walk.engine = SearchEngine::Backtrack;
                    if (first_only)
                    {
                        // Stop at the first path by unwinding out of the visitor.
                        struct Found
                        {
                            GridPath path;
                        };
                        try
                        {
                            for_each_path(v, [](const GridPath& p) { throw Found{p}; }, walk);
                        }
                        catch (const Found& f)
                        {
                            out.push_back(serialize(f.path));
                        }
                    }
                    else
                        keep(enumerate_paths(v, walk), [](const GridPath& s) { return serialize(s); });
                }
            },
            inst);
        return out;
    }

    SolutionCount count(const Instance& inst, const HarnessOptions& o)
    {
        return std::visit(
            [&](const auto& v) -> SolutionCount {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Cnf1in3>)
                    return count_1in3(v, o.limits);
                else if constexpr (std::is_same_v<T, Tripartite3dm>)
                    return count_3dm(v, o.limits);
                else if constexpr (std::is_same_v<T, NumericalMatchingInstance>)
                    return count_nkdm(v, o.limits);
                else if constexpr (std::is_same_v<T, LengthOffsetsInstance>)
                    return count_lo(v, o.limits);
                else
                {
                    SearchStats stats;
                    auto c = count_paths(v, o.search, &stats);
                    std::cerr << "nodes " << stats.nodes << " floods " << stats.floods << "\n";
                    return c;
                }
            },
            inst);
    }

    Violations verify(const Instance& inst, const std::string& text)
    {
        return std::visit(
            [&](const auto& v) -> Violations {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Cnf1in3>)
                    return validate(v, parse_assignment(text));
                else if constexpr (std::is_same_v<T, Tripartite3dm>)
                    return validate(v, parse_3dm_solution(text, v));
                else if constexpr (std::is_same_v<T, NumericalMatchingInstance>)
                    return validate(v, parse_nkdm_solution(text));
                else if constexpr (std::is_same_v<T, LengthOffsetsInstance>)
                    return validate(v, parse_lo_solution(text));
                else
                    return verify_path(v, parse_path(text));
            },
            inst);
    }

    std::string lift(const ReductionArtifact& artifact, const std::string& text)
    {
        return std::visit(
            [&](const auto& a) -> std::string {
                using A = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<A, SatTo3dmArtifact>)
                    return serialize(a.target, lift_solution(a, parse_assignment(text)));
                else if constexpr (std::is_same_v<A, ThreeDmToN4dmArtifact>)
                    return serialize(lift_solution(a, parse_3dm_solution(text, a.source)));
                else if constexpr (std::is_same_v<A, N4dmToN3dmArtifact>)
                    return serialize(lift_solution(a, parse_nkdm_solution(text)));
                else if constexpr (std::is_same_v<A, N3dmToLoArtifact>)
                    return serialize(lift_solution(a, parse_nkdm_solution(text)));
                else
                    return serialize(lift_lo_solution_to_path(a, parse_lo_solution(text)));
            },
            artifact);
    }

    std::string project(const ReductionArtifact& artifact, const std::string& text)
    {
        return std::visit(
            [&](const auto& a) -> std::string {
                using A = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<A, SatTo3dmArtifact>)
                    return serialize(project_solution(a, parse_3dm_solution(text, a.target)));
                else if constexpr (std::is_same_v<A, ThreeDmToN4dmArtifact>)
                    return serialize(a.source, project_solution(a, parse_nkdm_solution(text)));
                else if constexpr (std::is_same_v<A, N4dmToN3dmArtifact>)
                    return serialize(project_solution(a, parse_nkdm_solution(text)));
                else if constexpr (std::is_same_v<A, N3dmToLoArtifact>)
                    return serialize(project_solution(a, parse_lo_solution(text)));
                else
                    return serialize(project_path_to_lo(a, parse_path(text)));
            },
            artifact);
    }

    const std::map<std::string, Stage> kStageForProblem = {
        {"1in3", Stage::SatTo3dm}, {"3dm", Stage::ThreeDmToN4dm}, {"n4dm", Stage::N4dmToN3dm},
        {"n3dm", Stage::N3dmToLo}, {"lo", Stage::LoToPp}};
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pathred: reductions from positive 1-in-3-SAT to Path Puzzles, with counting oracles"};
    app.fallthrough();  // global flags may follow the subcommand
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "Generator seed")->capture_default_str();
    app.add_option("--cap", g.caps, "Oracle or search cap, name=value (repeatable)");
    app.add_option("--budget", g.budget, "Node budget of the path search");
    app.add_option("--format", g.format, "Expected input grammar: auto, p1in3, 3dm, nkdm, lo, pp")
        ->check(CLI::IsMember({"auto", "p1in3", "3dm", "nkdm", "lo", "pp"}))
        ->capture_default_str();

    std::string in, out, trace_path, stage, solution_path, problem, stop = "lo-pp";
    GenParams gp;
    bool dense = false, all = false, no_timings = false;
    std::int64_t instances = 1;

    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("problem", problem, "1in3, 3dm, n4dm, n3dm, lo, pp")->required();
    gen->add_option("--vars", gp.vars);
    gen->add_option("--clauses", gp.clauses);
    gen->add_option("-n", gp.n, "Part size, tuples or intervals");
    gen->add_option("--triples", gp.triples);
    gen->add_flag("--dense", dense, "3dm: allow triples sharing two coordinates");
    gen->add_option("--horizon", gp.horizon, "lo: m");
    gen->add_option("--max-target", gp.max_target, "nkdm: bound on t");
    gen->add_option("--rows", gp.rows);
    gen->add_option("--cols", gp.cols);
    gen->add_option("--out", out);

    auto* red = app.add_subcommand("reduce", "Apply one reduction");
    red->add_option("--stage", stage, "Stage tag; defaults to the one consuming the input");
    red->add_option("--in", in)->required();
    red->add_option("--out", out);
    red->add_option("--trace", trace_path, "Write the bookkeeping tables here");

    auto* solve = app.add_subcommand("solve", "Print one solution (or all with --all)");
    solve->add_option("--in", in)->required();
    solve->add_flag("--all", all);
    solve->add_option("--out", out);

    auto* cnt = app.add_subcommand("count", "Count solutions");
    cnt->add_option("--in", in)->required();

    auto* ver = app.add_subcommand("verify", "Check a solution against an instance");
    ver->add_option("--in", in)->required();
    ver->add_option("--solution", solution_path)->required();

    auto* lft = app.add_subcommand("lift", "Map a source solution to the target of a stage");
    lft->add_option("--stage", stage);
    lft->add_option("--in", in, "Source instance")->required();
    lft->add_option("--solution", solution_path)->required();
    lft->add_option("--out", out);

    auto* prj = app.add_subcommand("project", "Map a target solution back to the source of a stage");
    prj->add_option("--stage", stage);
    prj->add_option("--in", in, "Source instance")->required();
    prj->add_option("--solution", solution_path, "Target solution")->required();
    prj->add_option("--out", out);

    auto* par = app.add_subcommand("check-parsimony", "Compare source and target counts of a stage");
    par->add_option("--stage", stage);
    par->add_option("--in", in, "Source instance; omit to generate");
    par->add_option("--gen", problem, "Generate sources of this problem");
    par->add_option("--instances", instances, "Number of generated sources (seeds seed, seed+1, ...)");
    par->add_option("-n", gp.n);
    par->add_option("--vars", gp.vars);
    par->add_option("--clauses", gp.clauses);
    par->add_option("--horizon", gp.horizon);
    par->add_option("--max-target", gp.max_target);
    par->add_flag("--no-timings", no_timings);
    par->add_option("--out", out);

    auto* chn = app.add_subcommand("chain", "Run the reduction chain from an instance");
    chn->add_option("--in", in)->required();
    chn->add_option("--stop", stop, "Last stage");
    chn->add_flag("--no-timings", no_timings);
    chn->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try
    {
        const HarnessOptions o = harness_options(g);
        if (*gen)
        {
            const auto p = problem_from_tag(problem);
            if (!p)
                throw PreconditionError("unknown problem '" + problem + "'");
            gp.sparse = !dense;
            write_output(out, serialize(gen_instance(*p, gp, g.seed)));
        }
        else if (*red)
        {
            const Instance inst = load_instance(in, g);
            const auto artifact = reduce(stage_arg(stage, inst), inst, o);
            write_output(out, target_text(artifact));
            if (!trace_path.empty())
                write_file(trace_path, trace(artifact));
        }
        else if (*solve)
        {
            const auto sols = solutions(load_instance(in, g), o, !all);
            if (sols.empty())
            {
                std::cerr << "no solution\n";
                return 1;
            }
            std::string text;
            for (const auto& s : sols)
                text += s;
            write_output(out, text);
        }
        else if (*cnt)
            std::cout << count(load_instance(in, g), o) << "\n";
        else if (*ver)
        {
            const auto v = verify(load_instance(in, g), read_input(solution_path));
            for (const auto& x : v)
                std::cerr << x.str() << "\n";
            std::cout << (v.empty() ? "valid" : "invalid") << "\n";
            return v.empty() ? 0 : 1;
        }
        else if (*lft || *prj)
        {
            const Instance inst = load_instance(in, g);
            const auto artifact = reduce(stage_arg(stage, inst), inst, o);
            const std::string text = read_input(solution_path);
            write_output(out, *lft ? lift(artifact, text) : project(artifact, text));
        }
        else if (*par)
        {
            std::vector<ParsimonyReport> reports;
            if (!in.empty())
            {
                const Instance inst = load_instance(in, g);
                reports.push_back(check_parsimony(stage_arg(stage, inst), inst, o));
            }
            else
            {
                const auto p = problem_from_tag(problem);
                if (!p || !kStageForProblem.count(problem))
                    throw PreconditionError("check-parsimony needs --in or --gen with 1in3, 3dm, n4dm, n3dm or lo");
                const Stage s = stage.empty() ? kStageForProblem.at(problem) : stage_arg(stage, Instance{});
                for (std::int64_t i = 0; i < instances; ++i)
                    reports.push_back(check_parsimony(s, gen_instance(*p, gp, g.seed + static_cast<std::uint64_t>(i)), o));
            }
            std::string text;
            for (const auto& r : reports)
                text += serialize(r, !no_timings);
            write_output(out, text);
            return exit_code(reports);
        }
        else if (*chn)
        {
            const auto last = stage_from_tag(stop);
            if (!last)
                throw PreconditionError("unknown stage '" + stop + "'");
            const auto result = run_chain(load_instance(in, g), *last, o);
            write_output(out, serialize(result, !no_timings));
            std::vector<ParsimonyReport> reports;
            for (const auto& s : result.steps)
                reports.push_back(s.report);
            return exit_code(reports);
        }
    }
    catch (const OracleCapExceeded& e)
    {
        std::cerr << "cap: " << e.what() << "\n";
        return 3;
    }
    catch (const SearchBudgetExceeded& e)
    {
        std::cerr << "budget: " << e.what() << "\n";
        return 3;
    }
    catch (const ConsistencyError& e)
    {
        std::cerr << "internal: " << e.what() << "\n";
        return 1;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
