#include <pathred/pathpuzzle.h>
#include <pathred/reductions.h>
#include <pathred/text_io.h>

#include <doctest.h>

#include <random>

using namespace pathred;

namespace
{
    LengthOffsetsInstance three_lo()
    {
        LengthOffsetsInstance lo;
        lo.lengths = {5, 6, 7};
        lo.horizon = 15;
        lo.densities = RunSequence<Integer>(std::vector<Integer>{0, 0, 0, 0, 1, 3, 3, 3, 3, 3, 2, 0, 0, 0, 0});
        return lo;
    }
}  // namespace

TEST_CASE("cnf with an out-of-range index names the clause and the index")
{
    Cnf1in3 f{3, {{1, 2, 4}}};
    const auto v = validate(f);
    REQUIRE(v.size() == 1);
    CHECK(v[0].locus.find('1') != std::string::npos);
    CHECK(v[0].message.find('4') != std::string::npos);
}

TEST_CASE("three-interval length offsets instance is valid")
{
    CHECK(validate(three_lo()).empty());
}

TEST_CASE("length offsets rejects repeated lengths and oversized densities")
{
    LengthOffsetsInstance lo;
    lo.lengths = {2, 2};
    lo.horizon = 3;
    lo.densities = RunSequence<Integer>(std::vector<Integer>{0, 3, 1});
    CHECK(validate(lo).size() == 2);
}

TEST_CASE("puzzle label above the grid width is reported once")
{
    PathPuzzle p;
    p.rows = 2;
    p.cols = 2;
    p.doors = {Door{2, 1, Side::Top}, Door{2, 2, Side::Top}};
    p.row_labels = RunSequence<Label>(std::vector<Label>{Integer(3), std::nullopt});
    p.col_labels = RunSequence<Label>(std::vector<Label>{std::nullopt, std::nullopt});
    CHECK(validate(p).size() == 1);
}

TEST_CASE("door side must face outward")
{
    PathPuzzle p;
    p.rows = 3;
    p.cols = 3;
    p.doors = {Door{2, 1, Side::Right}, Door{3, 3, Side::Top}};
    p.row_labels = RunSequence<Label>(std::vector<Label>(3));
    p.col_labels = RunSequence<Label>(std::vector<Label>(3));
    CHECK_FALSE(validate(p).empty());
}

TEST_CASE("nkdm solution must respect multiplicities")
{
    NumericalMatchingInstance inst{3, {{5, 6, 7}, {4, 5, 5}, {4, 4, 5}}, 15};
    NumericalMatchingSolution good({{5, 5, 5}, {6, 5, 4}, {7, 4, 4}});
    NumericalMatchingSolution reused({{5, 5, 5}, {6, 5, 4}, {6, 5, 4}});
    CHECK(validate(inst, good).empty());
    CHECK_FALSE(validate(inst, reused).empty());
    // Value-level identity: tuple order does not matter.
    CHECK(good == NumericalMatchingSolution({{7, 4, 4}, {5, 5, 5}, {6, 5, 4}}));
}

TEST_CASE("parse of an empty file fails at line 1")
{
    try
    {
        parse_cnf("");
        FAIL("expected a parse error");
    }
    catch (const ParseError& e)
    {
        CHECK(e.line() == 1);
    }
}

TEST_CASE("malformed token reports its position")
{
    try
    {
        parse_3dm("3dm 2 1\n1 x 1\n");
        FAIL("expected a parse error");
    }
    catch (const ParseError& e)
    {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
}

TEST_CASE("text round trips")
{
    SUBCASE("cnf")
    {
        Cnf1in3 f{4, {{1, 2, 3}, {1, 2, 4}}};
        CHECK(parse_cnf(serialize(f)) == f);
    }
    SUBCASE("3dm")
    {
        Tripartite3dm g{2, {{1, 1, 1}, {2, 2, 2}, {1, 2, 2}}};
        CHECK(parse_3dm(serialize(g)) == g);
        ThreeDmSolution s{{0, 1}};
        CHECK(parse_3dm_solution(serialize(g, s), g) == s);
    }
    SUBCASE("nkdm with large values")
    {
        NumericalMatchingInstance inst{4, {{Integer("1000000000000000000000"), 3}, {1, 2}, {1, 2}, {1, 2}}, 9};
        CHECK(parse_nkdm(serialize(inst)) == inst);
    }
    SUBCASE("lo and its solution")
    {
        CHECK(parse_lo(serialize(three_lo())) == three_lo());
        LengthOffsetsSolution s{{5, 5, 4}};
        CHECK(parse_lo_solution(serialize(s)) == s);
    }
    SUBCASE("assignment")
    {
        Assignment a{{true, false, false}};
        CHECK(parse_assignment(serialize(a)) == a);
    }
    SUBCASE("three-interval puzzle and its lifted path")
    {
        const auto art = reduce_lo_to_pp(three_lo(), true);
        const std::string text = serialize(art.target);
        CHECK(parse_puzzle(text) == art.target);
        CHECK(serialize(parse_puzzle(text)) == text);
        const auto path = lift_lo_solution_to_path(art, LengthOffsetsSolution{{5, 5, 4}});
        CHECK(parse_path(serialize(path)) == path);
    }
}

TEST_CASE("blank and zero labels stay distinct")
{
    PathPuzzle p;
    p.rows = 1;
    p.cols = 3;
    p.doors = {Door{1, 1, Side::Left}, Door{1, 3, Side::Right}};
    p.row_labels = RunSequence<Label>(std::vector<Label>{Integer(3)});
    p.col_labels = RunSequence<Label>(std::vector<Label>{std::nullopt, Integer(0), Integer(1)});
    const auto back = parse_puzzle(serialize(p));
    CHECK(back == p);
    CHECK_FALSE(back.col_labels.at(0).has_value());
    CHECK(*back.col_labels.at(1) == 0);
}

TEST_CASE("run-compressed sequences")
{
    SUBCASE("repetition tokens parse")
    {
        const auto lo = parse_lo("lo 1 6\n2\n0*2 1*2 0*2\n");
        CHECK(lo.densities.to_vector() == std::vector<Integer>{0, 0, 1, 1, 0, 0});
    }
    SUBCASE("block tokens parse")
    {
        const auto lo = parse_lo("lo 1 6\n3\n(0 1)*3\n");
        CHECK(lo.densities.to_vector() == std::vector<Integer>{0, 1, 0, 1, 0, 1});
    }
    SUBCASE("cyclic runs answer random access")
    {
        RunSequence<Integer> seq;
        seq.append(7, 1);
        seq.append_cycle({1, 2, 3}, 4);
        seq.append(9, 2);
        CHECK(seq.size() == 15);
        CHECK(seq.at(0) == 7);
        CHECK(seq.at(1) == 1);
        CHECK(seq.at(6) == 3);
        CHECK(seq.at(12) == 3);
        CHECK(seq.at(14) == 9);
    }
    SUBCASE("equality ignores how runs are stored")
    {
        RunSequence<Integer> cyclic, plain, other;
        cyclic.append_cycle({0, 1}, 3);
        cyclic.append(1, 2);
        plain = RunSequence<Integer>(std::vector<Integer>{0, 1, 0, 1, 0, 1, 1, 1});
        other = RunSequence<Integer>(std::vector<Integer>{0, 1, 0, 1, 0, 1, 1, 0});
        CHECK(cyclic == plain);
        CHECK_FALSE(cyclic == other);
        RunSequence<Integer> big_a, big_b;
        big_a.append_cycle({2, 3}, Integer("1000000000000"));
        big_b.append_cycle({2, 3}, Integer("400000000000"));
        big_b.append_cycle({2, 3}, Integer("600000000000"));
        big_b.append(7, 0);
        CHECK(big_a == big_b);
    }
    SUBCASE("huge sequences serialize compressed and round trip")
    {
        LengthOffsetsInstance lo;
        lo.lengths = {Integer("100000000000")};
        lo.horizon = Integer("300000000000");
        RunSequence<Integer> d;
        d.append(0, Integer("100000000000"));
        d.append(1, Integer("100000000000"));
        d.append(0, Integer("100000000000"));
        lo.densities = d;
        const std::string text = serialize(lo);
        CHECK(text.size() < 200);
        CHECK(parse_lo(text) == lo);
    }
}

TEST_CASE("detect_kind reads the header keyword")
{
    CHECK(detect_kind("# comment\np1in3 3 1\n1 2 3\n") == FileKind::Cnf);
    CHECK(detect_kind("lo-sol 1\n2\n") == FileKind::LengthOffsetsSolution);
    CHECK_THROWS_AS(detect_kind("bogus 1\n"), ParseError);
}

TEST_CASE("canonical orients a path from its smaller end")
{
    GridPath p{{{1, 2}, {1, 1}}};
    CHECK(canonical(p).cells.front() == Cell{1, 1});
}

TEST_CASE("random cnf round trip property")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i)
    {
        Cnf1in3 f;
        f.variable_count = 1 + static_cast<std::int64_t>(rng() % 9);
        const auto clauses = rng() % 6;
        for (std::uint64_t c = 0; c < clauses; ++c)
            f.clauses.push_back({1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.variable_count)),
                                 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.variable_count)),
                                 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.variable_count))});
        CHECK(parse_cnf(serialize(f)) == f);
    }
}
