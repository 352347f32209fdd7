#pragma once

#include <pathred/instances.h>

#include <functional>
#include <vector>

namespace pathred
{

/// Size caps for the brute-force oracles. Instances above a cap are refused with
/// OracleCapExceeded instead of running for an unbounded time.
struct OracleLimits
{
    std::int64_t max_sat_variables = 24;
    std::int64_t max_3dm_part_size = 40;
    std::size_t max_nkdm_n = 12;
    std::size_t max_lo_n = 8;
    std::int64_t max_lo_horizon = 64;
};

template <typename T>
using Visitor = std::function<void(const T&)>;

// Positive 1-in-3-SAT: assignments with exactly one true literal per clause, a repeated
// variable counting once per occurrence. Visited in lexicographic order (false < true).
void for_each_1in3(const Cnf1in3& f, const Visitor<Assignment>& visit, const OracleLimits& limits = {});
SolutionCount count_1in3(const Cnf1in3& f, const OracleLimits& limits = {});
std::vector<Assignment> enumerate_1in3(const Cnf1in3& f, const OracleLimits& limits = {});

// 3DM: exact covers of X, Y, Z by triples, found by most-constrained-element-first search.
void for_each_3dm(const Tripartite3dm& g, const Visitor<ThreeDmSolution>& visit, const OracleLimits& limits = {});
SolutionCount count_3dm(const Tripartite3dm& g, const OracleLimits& limits = {});
std::vector<ThreeDmSolution> enumerate_3dm(const Tripartite3dm& g, const OracleLimits& limits = {});

/// Exhaustive subset enumeration over all 2^|T| subsets. Independent cross-check for count_3dm.
SolutionCount count_3dm_subsets(const Tripartite3dm& g);

// Numerical k-DM, value-level: each distinct multiset of tuples is produced exactly once.
void for_each_nkdm(const NumericalMatchingInstance& inst, const Visitor<NumericalMatchingSolution>& visit,
                   const OracleLimits& limits = {});
SolutionCount count_nkdm(const NumericalMatchingInstance& inst, const OracleLimits& limits = {});
std::vector<NumericalMatchingSolution> enumerate_nkdm(const NumericalMatchingInstance& inst,
                                                      const OracleLimits& limits = {});

// Length Offsets: offset vectors meeting every density; enumerate returns them in
// lexicographic order of b.
SolutionCount count_lo(const LengthOffsetsInstance& inst, const OracleLimits& limits = {});
std::vector<LengthOffsetsSolution> enumerate_lo(const LengthOffsetsInstance& inst, const OracleLimits& limits = {});

}  // namespace pathred
