#include <pathred/harness.h>
#include <pathred/oracles.h>

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace pathred;

namespace
{
    // Reference counters: plain exhaustive loops, no pruning.

    std::uint64_t brute_1in3(const Cnf1in3& f)
    {
        std::uint64_t count = 0;
        for (std::uint64_t mask = 0; mask < (1ull << f.variable_count); ++mask)
        {
            bool ok = true;
            for (const auto& c : f.clauses)
            {
                int ones = 0;
                for (auto v : c)
                    ones += (mask >> (v - 1)) & 1;
                ok = ok && ones == 1;
            }
            count += ok;
        }
        return count;
    }

    /// All pairings of X with permutations of Y and Z, deduplicated as tuple multisets.
    std::uint64_t brute_n3dm(const NumericalMatchingInstance& inst)
    {
        std::vector<Integer> y = inst.sets[1], z = inst.sets[2];
        std::sort(y.begin(), y.end());
        std::sort(z.begin(), z.end());
        std::set<std::vector<std::vector<Integer>>> seen;
        do
        {
            std::vector<Integer> zz = z;
            do
            {
                std::vector<std::vector<Integer>> tuples;
                bool ok = true;
                for (std::size_t i = 0; i < y.size(); ++i)
                {
                    ok = ok && inst.sets[0][i] + y[i] + zz[i] == inst.target;
                    tuples.push_back({inst.sets[0][i], y[i], zz[i]});
                }
                if (ok)
                {
                    std::sort(tuples.begin(), tuples.end());
                    seen.insert(tuples);
                }
            } while (std::next_permutation(zz.begin(), zz.end()));
        } while (std::next_permutation(y.begin(), y.end()));
        return seen.size();
    }

    std::uint64_t brute_lo(const LengthOffsetsInstance& inst)
    {
        const auto n = inst.lengths.size();
        const auto m = to_int64(inst.horizon);
        const auto density = inst.densities.to_vector();
        std::vector<std::int64_t> b(n, 0);
        std::uint64_t count = 0;
        while (true)
        {
            bool fits = true;
            std::vector<Integer> cover(static_cast<std::size_t>(m), 0);
            for (std::size_t j = 0; j < n && fits; ++j)
            {
                const auto a = to_int64(inst.lengths[j]);
                fits = b[j] + a <= m;
                for (std::int64_t i = b[j]; fits && i < b[j] + a; ++i)
                    cover[static_cast<std::size_t>(i)] += 1;
            }
            count += fits && cover == density;
            std::size_t k = 0;
            while (k < n && ++b[k] > m)
                b[k++] = 0;
            if (k == n)
                return count;
        }
    }
}  // namespace

TEST_CASE("1in3 counts")
{
    CHECK(count_1in3(Cnf1in3{3, {{1, 2, 3}}}) == 3);
    CHECK(count_1in3(Cnf1in3{1, {{1, 1, 1}}}) == 0);
    CHECK(count_1in3(Cnf1in3{4, {{1, 2, 3}, {1, 2, 4}}}) == brute_1in3(Cnf1in3{4, {{1, 2, 3}, {1, 2, 4}}}));
    // A repeated variable counts once per occurrence: (1,1,2) needs x1 false and x2 true.
    CHECK(count_1in3(Cnf1in3{2, {{1, 1, 2}}}) == 1);
}

TEST_CASE("1in3 agrees with exhaustive search on random formulas")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i)
    {
        Cnf1in3 f;
        f.variable_count = 1 + static_cast<std::int64_t>(rng() % 8);
        for (std::uint64_t c = rng() % 5; c > 0; --c)
            f.clauses.push_back({1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.variable_count)),
                                 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.variable_count)),
                                 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.variable_count))});
        const auto all = enumerate_1in3(f);
        CHECK(count_1in3(f) == brute_1in3(f));
        CHECK(all.size() == brute_1in3(f));
        for (const auto& a : all)
            CHECK(validate(f, a).empty());
    }
}

TEST_CASE("3dm counts")
{
    CHECK(count_3dm(Tripartite3dm{1, {{1, 1, 1}}}) == 1);
    CHECK(count_3dm(Tripartite3dm{1, {}}) == 0);
    const Tripartite3dm g{2, {{1, 1, 1}, {2, 2, 2}, {1, 2, 2}, {2, 1, 1}}};
    CHECK(count_3dm(g) == count_3dm_subsets(g));
    CHECK(count_3dm(g) == 2);
}

TEST_CASE("3dm exact cover agrees with subset enumeration")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        GenParams p;
        p.n = 1 + static_cast<std::int64_t>(seed % 3);
        p.sparse = seed % 2 == 0;
        const auto g = std::get<Tripartite3dm>(gen_instance(Problem::ThreeDm, p, seed));
        const auto all = enumerate_3dm(g);
        CHECK(count_3dm(g) == count_3dm_subsets(g));
        CHECK(SolutionCount(all.size()) == count_3dm(g));
        for (const auto& s : all)
            CHECK(validate(g, s).empty());
    }
}

TEST_CASE("nkdm counts")
{
    CHECK(count_nkdm(NumericalMatchingInstance{3, {{1}, {1}, {1}}, 3}) == 1);
    const NumericalMatchingInstance sample{3, {{5, 6, 7}, {4, 5, 5}, {4, 4, 5}}, 15};
    const auto all = enumerate_nkdm(sample);
    REQUIRE(all.size() == 1);
    CHECK(all[0] == NumericalMatchingSolution({{5, 5, 5}, {6, 5, 4}, {7, 4, 4}}));
    CHECK(count_nkdm(NumericalMatchingInstance{3, {{1, 2}, {1, 2}, {3, 3}}, 6}) == 1);
}

TEST_CASE("nkdm value-level count agrees with permutation search")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 150; ++i)
    {
        NumericalMatchingInstance inst;
        inst.k = 3;
        const std::size_t n = 1 + rng() % 4;
        inst.target = 9;
        inst.sets.assign(3, {});
        for (auto& s : inst.sets)
            for (std::size_t j = 0; j < n; ++j)
                s.push_back(1 + static_cast<std::int64_t>(rng() % 5));
        CHECK(count_nkdm(inst) == brute_n3dm(inst));
        // Reordering values inside a multiset changes nothing.
        auto shuffled = inst;
        for (auto& s : shuffled.sets)
            std::shuffle(s.begin(), s.end(), rng);
        CHECK(count_nkdm(shuffled) == count_nkdm(inst));
    }
}

TEST_CASE("nkdm conservation: wrong total means no solution")
{
    NumericalMatchingInstance inst{3, {{1, 2}, {1, 2}, {3, 4}}, 6};
    CHECK(count_nkdm(inst) == 0);
}

TEST_CASE("nkdm with k = 4 enumerates valid distinct solutions")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        GenParams p;
        p.n = 1 + static_cast<std::int64_t>(seed % 4);
        const auto inst = std::get<NumericalMatchingInstance>(gen_instance(Problem::N4dm, p, seed));
        const auto all = enumerate_nkdm(inst);
        CHECK(all.size() >= 1);
        CHECK(std::set<NumericalMatchingSolution>(all.begin(), all.end()).size() == all.size());
        for (const auto& s : all)
            CHECK(validate(inst, s).empty());
    }
}

TEST_CASE("lo counts")
{
    LengthOffsetsInstance a{{2}, 3, RunSequence<Integer>(std::vector<Integer>{0, 1, 1})};
    const auto sols = enumerate_lo(a);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].offsets == std::vector<Integer>{1});

    LengthOffsetsInstance b{{1}, 2, RunSequence<Integer>(std::vector<Integer>{1, 1})};
    CHECK(count_lo(b) == 0);

    LengthOffsetsInstance three{{5, 6, 7}, 15,
                               RunSequence<Integer>(std::vector<Integer>{0, 0, 0, 0, 1, 3, 3, 3, 3, 3, 2, 0, 0, 0, 0})};
    const auto f = enumerate_lo(three);
    REQUIRE(f.size() == 1);
    CHECK(f[0].offsets == std::vector<Integer>{5, 5, 4});
}

TEST_CASE("lo agrees with exhaustive offsets and enumerates in order")
{
    for (std::uint64_t seed = 0; seed < 150; ++seed)
    {
        GenParams p;
        p.n = 1 + static_cast<std::int64_t>(seed % 3);
        p.horizon = p.n + static_cast<std::int64_t>(seed % 5);
        const auto inst = std::get<LengthOffsetsInstance>(gen_instance(Problem::LengthOffsets, p, seed));
        const auto all = enumerate_lo(inst);
        CHECK(all.size() == brute_lo(inst));
        CHECK(std::is_sorted(all.begin(), all.end()));
        for (const auto& s : all)
            CHECK(validate(inst, s).empty());
    }
}

TEST_CASE("caps refuse oversized instances")
{
    OracleLimits tight;
    tight.max_sat_variables = 2;
    CHECK_THROWS_AS(count_1in3(Cnf1in3{3, {{1, 2, 3}}}, tight), OracleCapExceeded);
    tight.max_nkdm_n = 1;
    CHECK_THROWS_AS(count_nkdm(NumericalMatchingInstance{3, {{1, 2}, {1, 2}, {3, 3}}, 6}, tight), OracleCapExceeded);
    LengthOffsetsInstance lo{{2}, 100, RunSequence<Integer>(std::vector<Integer>(100, 0))};
    CHECK_THROWS_AS(count_lo(lo), OracleCapExceeded);
}
