#include <pathred/harness.h>
#include <pathred/reductions.h>

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace pathred;

namespace
{
    std::vector<Integer> sorted(std::vector<Integer> v)
    {
        std::sort(v.begin(), v.end());
        return v;
    }

    const NumericalMatchingInstance kSample{3, {{5, 6, 7}, {4, 5, 5}, {4, 4, 5}}, 15};

    Integer pow100(int e)
    {
        Integer v = 1;
        for (int i = 0; i < e; ++i)
            v *= 100;
        return v;
    }
}  // namespace

TEST_CASE("sat to 3dm: single clause")
{
    const Cnf1in3 f{3, {{1, 2, 3}}};
    const auto a = reduce_sat_to_3dm(f);
    CHECK(a.target.part_size == 10);
    CHECK(a.target.triples.size() == 21);
    CHECK(is_pairwise_sparse(a.target));
    CHECK(count_3dm(a.target) == count_1in3(f));
    CHECK(count_3dm(a.target) == 3);
}

TEST_CASE("sat to 3dm: unsatisfiable and two-clause formulas keep their counts")
{
    const Cnf1in3 triple_x{1, {{1, 1, 1}}};
    CHECK(count_3dm(reduce_sat_to_3dm(triple_x).target) == 0);
    const Cnf1in3 two{4, {{1, 2, 3}, {1, 2, 4}}};
    CHECK(count_3dm(reduce_sat_to_3dm(two).target) == count_1in3(two));
}

TEST_CASE("sat to 3dm refuses empty formulas and unused variables")
{
    CHECK_THROWS_AS(reduce_sat_to_3dm(Cnf1in3{2, {}}), PreconditionError);
    CHECK_THROWS_AS(reduce_sat_to_3dm(Cnf1in3{4, {{1, 2, 3}}}), PreconditionError);
}

TEST_CASE("sat lift of x = T, y = F, z = F")
{
    const auto a = reduce_sat_to_3dm(Cnf1in3{3, {{1, 2, 3}}});
    const auto s = lift_solution(a, Assignment{{true, false, false}});
    CHECK(validate(a.target, s).empty());
    auto has_all = [&](const std::vector<std::size_t>& edges) {
        return std::all_of(edges.begin(), edges.end(),
                           [&](std::size_t e) { return std::binary_search(s.triples.begin(), s.triples.end(), e); });
    };
    CHECK(has_all(a.gadgets[0].positive));
    CHECK(has_all(a.gadgets[0].garbage));
    CHECK(has_all(a.gadgets[1].negative));
    CHECK(has_all(a.gadgets[2].negative));
    CHECK(project_solution(a, s) == Assignment{{true, false, false}});
}

TEST_CASE("3dm to n4dm: n = 1 evaluates the digit table")
{
    const auto a = reduce_3dm_to_n4dm(Tripartite3dm{1, {{1, 1, 1}}});
    CHECK(a.base == 100);
    CHECK(a.target.k == 4);
    CHECK(a.target.n() == 2);
    CHECK(a.target.target == 40 * pow100(5));
    CHECK(sorted(a.target.sets[0]) == sorted({10 * pow100(5) + pow100(4), 12 * pow100(5) - 100}));
    CHECK(count_nkdm(a.target) == 1);
}

TEST_CASE("3dm to n4dm keeps counts on small instances")
{
    const Tripartite3dm one{2, {{1, 1, 1}, {2, 2, 2}}};
    CHECK(count_nkdm(reduce_3dm_to_n4dm(one).target) == 1);
    // Even-weight code: sparse, no perfect matching.
    const Tripartite3dm code{2, {{1, 1, 1}, {1, 2, 2}, {2, 1, 2}, {2, 2, 1}}};
    CHECK(count_nkdm(reduce_3dm_to_n4dm(code).target) == 0);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        GenParams p;
        p.n = 2 + static_cast<std::int64_t>(seed % 2);
        const auto g = std::get<Tripartite3dm>(gen_instance(Problem::ThreeDm, p, seed));
        const auto a = reduce_3dm_to_n4dm(g);
        CHECK(count_nkdm(a.target) == count_3dm_subsets(g));
        CHECK(union_with_sums_is_set(a.target.sets[2], a.target.sets[3]));
    }
}

TEST_CASE("3dm to n4dm refuses dense or uncovered instances")
{
    CHECK_THROWS_AS(reduce_3dm_to_n4dm(Tripartite3dm{2, {{1, 1, 1}, {1, 1, 2}, {2, 2, 2}}}), PreconditionError);
    CHECK_THROWS_AS(reduce_3dm_to_n4dm(Tripartite3dm{2, {{1, 1, 1}}}), PreconditionError);
}

TEST_CASE("normalization")
{
    SUBCASE("forced shift for k = 4")
    {
        const NumericalMatchingInstance inst{4, {{1}, {1}, {1}, {1}}, 4};
        const auto n = normalize_nkdm(inst, true);
        CHECK(n.instance.target == 36);
        for (const auto& set : n.instance.sets)
            CHECK(set == std::vector<Integer>{9});
        CHECK(in_window(n.instance));
    }
    SUBCASE("forced shift for k = 3")
    {
        const auto n = normalize_nkdm(kSample, true);
        CHECK(n.instance.target == 60);
        CHECK(n.instance.sets[0] == std::vector<Integer>{20, 21, 22});
        CHECK(in_window(n.instance));
    }
    SUBCASE("identity on conforming instances")
    {
        CHECK(normalize_nkdm(kSample).map.identity());
        CHECK(normalize_nkdm(kSample).instance == kSample);
        const NumericalMatchingInstance micro{4, {{1}, {1}, {1}, {1}}, 4};
        CHECK(normalize_nkdm(micro).map.identity());
    }
    SUBCASE("element at least t")
    {
        CHECK_THROWS_AS(normalize_nkdm(NumericalMatchingInstance{3, {{15}, {1}, {1}}, 15}), TriviallyUnsolvable);
    }
    SUBCASE("solutions map both ways and counts survive")
    {
        const NumericalMatchingInstance wide{3, {{1, 2}, {2, 3}, {3, 1}}, 6};
        REQUIRE_FALSE(in_window(wide));
        const auto n = normalize_nkdm(wide);
        CHECK(count_nkdm(n.instance) == count_nkdm(wide));
        for (const auto& s : enumerate_nkdm(wide))
        {
            CHECK(validate(n.instance, apply(n, s)).empty());
            CHECK(invert(n, apply(n, s)) == s);
        }
    }
    SUBCASE("k = 4 target is made divisible by 4")
    {
        const NumericalMatchingInstance odd{4, {{1}, {1}, {1}, {2}}, 5};
        const auto n = normalize_nkdm(odd);
        CHECK(n.instance.target % 4 == 0);
        CHECK(in_window(n.instance));
    }
}

TEST_CASE("n4dm to n3dm: micro instance")
{
    const NumericalMatchingInstance inst{4, {{1}, {1}, {1}, {1}}, 4};
    const auto pair = find_sum_set_pair(inst);
    REQUIRE(pair);
    const auto a = reduce_n4dm_to_n3dm(inst, *pair);
    CHECK(a.base == 4);
    CHECK(a.target.target == 260);
    CHECK(sorted(a.target.sets[0]) == std::vector<Integer>{89, 90});
    CHECK(sorted(a.target.sets[1]) == std::vector<Integer>{81, 89});
    CHECK(sorted(a.target.sets[2]) == std::vector<Integer>{81, 90});
    CHECK(count_nkdm(a.target) == 1);
    CHECK(set_flags(a.target)[0]);
    CHECK(mod4_separated(a));
}

TEST_CASE("n4dm to n3dm sizes and invariants on generated instances")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed)
    {
        GenParams p;
        p.n = 1 + static_cast<std::int64_t>(seed % 3);
        const auto inst = std::get<NumericalMatchingInstance>(gen_instance(Problem::N4dm, p, seed));
        const auto a = reduce_n4dm_to_n3dm(inst, *find_sum_set_pair(inst));
        const auto n = static_cast<std::size_t>(p.n);
        for (const auto& set : a.target.sets)
            CHECK(set.size() == n * n + n);
        CHECK(set_flags(a.target)[0]);
        CHECK(mod4_separated(a));
        CHECK(count_nkdm(a.target) == count_nkdm(inst));
    }
}

TEST_CASE("n4dm to n3dm refuses inputs outside the window")
{
    const NumericalMatchingInstance wide{4, {{1}, {1}, {1}, {5}}, 8};
    CHECK_THROWS_AS(reduce_n4dm_to_n3dm(wide, {0, 1}), PreconditionError);
}

TEST_CASE("n3dm to lo: three-interval densities and lift")
{
    const auto a = reduce_n3dm_to_lo(kSample);
    CHECK(a.target.horizon == 15);
    CHECK(a.target.lengths == std::vector<Integer>{5, 6, 7});
    CHECK(a.target.densities.to_vector() == std::vector<Integer>{0, 0, 0, 0, 1, 3, 3, 3, 3, 3, 2, 0, 0, 0, 0});
    CHECK(count_lo(a.target) == count_nkdm(kSample));
    const auto b = lift_solution(a, NumericalMatchingSolution({{5, 5, 5}, {6, 5, 4}, {7, 4, 4}}));
    CHECK(b.offsets == std::vector<Integer>{5, 5, 4});
    CHECK(project_solution(a, b) == NumericalMatchingSolution({{5, 5, 5}, {6, 5, 4}, {7, 4, 4}}));
}

TEST_CASE("n3dm to lo: single triple")
{
    const NumericalMatchingInstance inst{3, {{2}, {2}, {2}}, 6};
    const auto a = reduce_n3dm_to_lo(inst);
    CHECK(a.target.densities.to_vector() == std::vector<Integer>{0, 0, 1, 1, 0, 0});
    CHECK(count_lo(a.target) == 1);
}

TEST_CASE("n3dm to lo refuses repeated X values and out-of-window elements")
{
    CHECK_THROWS_AS(reduce_n3dm_to_lo(NumericalMatchingInstance{3, {{5, 5}, {5, 5}, {5, 5}}, 15}), PreconditionError);
    CHECK_THROWS_AS(reduce_n3dm_to_lo(NumericalMatchingInstance{3, {{1}, {2}, {3}}, 6}), PreconditionError);
}

TEST_CASE("density sum equals length sum when the totals balance")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        GenParams p;
        p.n = 1 + static_cast<std::int64_t>(seed % 4);
        const auto inst = std::get<NumericalMatchingInstance>(gen_instance(Problem::N3dm, p, seed));
        const auto a = reduce_n3dm_to_lo(inst);
        const auto d = a.target.densities.to_vector();
        CHECK(std::accumulate(d.begin(), d.end(), Integer(0))
              == std::accumulate(a.target.lengths.begin(), a.target.lengths.end(), Integer(0)));
        for (const auto& s : enumerate_lo(a.target))
            CHECK(check_endpoint_disjoint(a.target, s));
    }
}

TEST_CASE("endpoint disjointness")
{
    LengthOffsetsInstance three{{5, 6, 7}, 15,
                               RunSequence<Integer>(std::vector<Integer>{0, 0, 0, 0, 1, 3, 3, 3, 3, 3, 2, 0, 0, 0, 0})};
    CHECK(check_endpoint_disjoint(three, LengthOffsetsSolution{{5, 5, 4}}));
    LengthOffsetsInstance single{{2}, 4, RunSequence<Integer>(std::vector<Integer>{0, 0, 1, 1})};
    CHECK(check_endpoint_disjoint(single, LengthOffsetsSolution{{2}}));
    LengthOffsetsInstance touching{{1, 2}, 3, RunSequence<Integer>(std::vector<Integer>{1, 1, 1})};
    CHECK_FALSE(check_endpoint_disjoint(touching, LengthOffsetsSolution{{2, 0}}));
    CHECK_FALSE(certify_endpoint_disjoint(touching));
}

TEST_CASE("lift and project are mutually inverse along the single-clause chain")
{
    const auto r = check_parsimony(Stage::SatTo3dm, Cnf1in3{3, {{1, 2, 3}}});
    CHECK(r.verdict == Verdict::Equal);
    REQUIRE(r.round_trip);
    CHECK(*r.round_trip);
    CHECK(r.round_trip_checked == 6);
}

TEST_CASE("lift refuses invalid solutions")
{
    const auto a = reduce_n3dm_to_lo(kSample);
    CHECK_THROWS_AS(lift_solution(a, NumericalMatchingSolution({{5, 5, 5}, {6, 5, 4}, {6, 5, 4}})), PreconditionError);
    CHECK_THROWS_AS(project_solution(a, LengthOffsetsSolution{{0, 0, 0}}), PreconditionError);
}

TEST_CASE("stage tags round trip")
{
    for (Stage s : {Stage::SatTo3dm, Stage::ThreeDmToN4dm, Stage::N4dmToN3dm, Stage::N3dmToLo, Stage::LoToPp})
        CHECK(stage_from_tag(stage_tag(s)) == s);
    CHECK_FALSE(stage_from_tag("nope"));
}

TEST_CASE("trace lists bookkeeping for every stage")
{
    CHECK_FALSE(trace(reduce_sat_to_3dm(Cnf1in3{3, {{1, 2, 3}}})).empty());
    CHECK_FALSE(trace(reduce_3dm_to_n4dm(Tripartite3dm{1, {{1, 1, 1}}})).empty());
    CHECK_FALSE(trace(reduce_n3dm_to_lo(kSample)).empty());
}
