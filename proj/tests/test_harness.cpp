#include <pathred/harness.h>
#include <pathred/text_io.h>

#include <doctest.h>

#include <set>

using namespace pathred;

namespace
{
    const Cnf1in3 kSingle{3, {{1, 2, 3}}};

    // Variable occurrences per clause, counted directly from the formula.
    bool uses_every_variable(const Cnf1in3& f)
    {
        std::set<std::int64_t> seen;
        for (const auto& c : f.clauses)
            seen.insert(c.begin(), c.end());
        return static_cast<std::int64_t>(seen.size()) == f.variable_count;
    }
}  // namespace

TEST_CASE("generators are deterministic in the seed")
{
    GenParams g;
    for (auto p : {Problem::OneInThree, Problem::ThreeDm, Problem::N4dm, Problem::N3dm, Problem::LengthOffsets,
                   Problem::Puzzle})
    {
        CHECK(serialize(gen_instance(p, g, 7)) == serialize(gen_instance(p, g, 7)));
        CHECK(problem_from_tag(problem_tag(p)) == p);
    }
    CHECK(serialize(gen_instance(Problem::ThreeDm, g, 1)) != serialize(gen_instance(Problem::ThreeDm, g, 2)));
}

TEST_CASE("generated instances meet the preconditions of their consumers")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed)
    {
        GenParams g;
        g.n = 1 + static_cast<std::int64_t>(seed % 3);
        const auto f = std::get<Cnf1in3>(gen_instance(Problem::OneInThree, g, seed));
        CHECK(validate(f).empty());
        CHECK(uses_every_variable(f));
        CHECK(count_1in3(f).value() >= 1);

        const auto tdm = std::get<Tripartite3dm>(gen_instance(Problem::ThreeDm, g, seed));
        CHECK(validate(tdm).empty());
        CHECK(is_pairwise_sparse(tdm));
        CHECK(count_3dm_subsets(tdm).value() >= 1);

        const auto n4 = std::get<NumericalMatchingInstance>(gen_instance(Problem::N4dm, g, seed));
        CHECK(in_window(n4));
        CHECK(find_sum_set_pair(n4).has_value());

        const auto n3 = std::get<NumericalMatchingInstance>(gen_instance(Problem::N3dm, g, seed));
        CHECK(in_window(n3));
        CHECK(set_flags(n3)[0]);

        const auto lo = std::get<LengthOffsetsInstance>(gen_instance(Problem::LengthOffsets, g, seed));
        CHECK(validate(lo).empty());

        const auto pp = std::get<PathPuzzle>(gen_instance(Problem::Puzzle, g, seed));
        CHECK(validate(pp).empty());
    }
}

TEST_CASE("generator refuses impossible sizes")
{
    GenParams g;
    g.n = 2;
    g.triples = 9;
    CHECK_THROWS_AS(gen_instance(Problem::ThreeDm, g, 0), PreconditionError);
    g = {};
    g.rows = 1;
    g.cols = 1;
    CHECK_THROWS_AS(gen_instance(Problem::Puzzle, g, 0), PreconditionError);
}

TEST_CASE("instances round trip through the generic parser")
{
    GenParams g;
    for (auto p : {Problem::OneInThree, Problem::ThreeDm, Problem::N4dm, Problem::LengthOffsets, Problem::Puzzle})
    {
        const auto inst = gen_instance(p, g, 3);
        CHECK(serialize(parse_instance(serialize(inst))) == serialize(inst));
    }
}

TEST_CASE("check_parsimony: single clause")
{
    const auto r = check_parsimony(Stage::SatTo3dm, kSingle);
    CHECK(r.verdict == Verdict::Equal);
    CHECK(r.source_count == SolutionCount(3));
    CHECK(r.target_count == SolutionCount(3));
    CHECK(r.invariants.empty());
    CHECK(r.source_digest.size() == 16);
}

TEST_CASE("check_parsimony: unsatisfiable clause")
{
    const auto r = check_parsimony(Stage::SatTo3dm, Cnf1in3{1, {{1, 1, 1}}});
    CHECK(r.verdict == Verdict::Equal);
    CHECK(r.source_count == SolutionCount(0));
    CHECK(r.target_count == SolutionCount(0));
}

TEST_CASE("check_parsimony: the puzzle stage reports the factor it finds")
{
    const LengthOffsetsInstance lo{{2}, 3, RunSequence<Integer>(std::vector<Integer>{0, 1, 1})};
    const auto r = check_parsimony(Stage::LoToPp, lo);
    CHECK(r.source_count == SolutionCount(1));
    CHECK(r.target_count == SolutionCount(2));
    CHECK(r.verdict == Verdict::Mismatch);
}

TEST_CASE("check_parsimony: caps become verdicts")
{
    HarnessOptions tight;
    tight.limits.max_sat_variables = 2;
    const auto r = check_parsimony(Stage::SatTo3dm, kSingle, tight);
    CHECK(r.verdict == Verdict::OracleCap);
    CHECK_FALSE(r.source_count.has_value());
}

TEST_CASE("check_parsimony refuses a source of the wrong kind")
{
    CHECK_THROWS_AS(check_parsimony(Stage::N3dmToLo, kSingle), PreconditionError);
}

TEST_CASE("run_chain: single clause to 3dm and beyond")
{
    const auto short_chain = run_chain(kSingle, Stage::SatTo3dm);
    REQUIRE(short_chain.steps.size() == 1);
    CHECK(short_chain.all_equal());

    const auto full = run_chain(kSingle);
    REQUIRE(full.steps.size() == 5);
    CHECK(full.steps[0].report.verdict == Verdict::Equal);
    for (std::size_t i = 1; i < full.steps.size(); ++i)
        CHECK(full.steps[i].report.verdict == Verdict::OracleCap);
    CHECK(std::get<N4dmToN3dmArtifact>(full.steps[2].artifact).source.n() == 31);
}

TEST_CASE("run_chain normalizes out-of-window sources")
{
    const NumericalMatchingInstance wide{3, {{1, 2}, {2, 3}, {3, 1}}, 6};
    const auto c = run_chain(wide, Stage::N3dmToLo);
    REQUIRE(c.steps.size() == 1);
    CHECK_FALSE(c.steps[0].normalization.identity());
    CHECK(c.steps[0].report.verdict == Verdict::Equal);
    CHECK(c.steps[0].report.source_count == SolutionCount(count_nkdm(wide)));
}

TEST_CASE("report serialization")
{
    const auto r = check_parsimony(Stage::SatTo3dm, kSingle);
    const auto text = serialize(r, false);
    CHECK(text == serialize(check_parsimony(Stage::SatTo3dm, kSingle), false));
    CHECK(text.rfind("report sat-3dm\n", 0) == 0);
    CHECK(text.find("verdict equal\n") != std::string::npos);
    CHECK(text.find("round-trip ok 6\n") != std::string::npos);
    CHECK(text.find("seconds") == std::string::npos);
    CHECK(serialize(r, true).find("source-seconds ") != std::string::npos);
}

TEST_CASE("exit codes")
{
    ParsimonyReport ok, cap, bad;
    cap.verdict = Verdict::OracleCap;
    bad.verdict = Verdict::Mismatch;
    CHECK(exit_code({ok}) == 0);
    CHECK(exit_code({ok, cap}) == 3);
    CHECK(exit_code({cap, bad}) == 1);
}

TEST_CASE("digest is stable and sensitive")
{
    CHECK(digest("") == "cbf29ce484222325");
    CHECK(digest("a") != digest("b"));
}
