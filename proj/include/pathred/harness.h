#pragma once

#include <pathred/oracles.h>
#include <pathred/pathpuzzle.h>
#include <pathred/reductions.h>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pathred
{

enum class Problem
{
    OneInThree,
    ThreeDm,
    N4dm,
    N3dm,
    LengthOffsets,
    Puzzle
};

/// Tags: 1in3, 3dm, n4dm, n3dm, lo, pp.
std::string problem_tag(Problem p);
std::optional<Problem> problem_from_tag(const std::string& tag);

using Instance = std::variant<Cnf1in3, Tripartite3dm, NumericalMatchingInstance, LengthOffsetsInstance, PathPuzzle>;

std::string serialize(const Instance& inst);
/// Parses any instance file, dispatching on its keyword.
Instance parse_instance(std::string_view text);

/// Size knobs; each generator reads the ones it needs.
struct GenParams
{
    std::int64_t vars = 4;     ///< 1in3
    std::int64_t clauses = 2;  ///< 1in3
    std::int64_t n = 3;        ///< 3dm part size, NkDM tuples, LO intervals
    std::int64_t triples = 0;  ///< 3dm; 0 picks a random count in [n, cap]
    bool sparse = true;        ///< 3dm: pairwise sparse
    std::int64_t horizon = 6;  ///< LO m
    std::int64_t max_target = 0;  ///< NkDM: upper bound on t, 0 for automatic
    std::int64_t rows = 4;     ///< pp
    std::int64_t cols = 5;     ///< pp
};

/// Deterministic in `seed`. Outputs meet the preconditions of the stage that consumes them:
/// 1in3 formulas use every variable, 3dm instances cover every element (and are pairwise
/// sparse on request), NkDM instances sit inside the normalization window (n4dm also has a
/// sum-set pair), LO lengths are distinct. Every generated 1in3, NkDM and LO instance has at
/// least one planted solution. Throws PreconditionError when the sizes are unsatisfiable.
Instance gen_instance(Problem problem, const GenParams& params, std::uint64_t seed);

enum class Verdict
{
    Equal,
    Mismatch,
    OracleCap,
    SearchBudget
};

std::string verdict_tag(Verdict v);  ///< equal, mismatch, oracle-cap, search-budget

struct ParsimonyReport
{
    Stage stage = Stage::SatTo3dm;
    std::string source_digest;  ///< FNV-1a 64 of the serialized source, hex
    std::optional<SolutionCount> source_count;
    std::optional<SolutionCount> target_count;
    Verdict verdict = Verdict::Equal;
    double source_seconds = 0;
    double target_seconds = 0;

    /// Source and target solutions checked through lift/project. `round_trip` is nullopt when
    /// enumeration did not fit its caps.
    std::optional<bool> round_trip;
    std::size_t round_trip_checked = 0;
    /// Construction invariants of the target (sparsity, sum sets, mod-4 separation,
    /// endpoint disjointness over the enumerated solutions).
    Violations invariants;
    std::vector<std::string> notes;
};

struct HarnessOptions
{
    OracleLimits limits;
    SearchOptions search = default_search();
    /// Node budget of the backtracking enumeration behind the puzzle round trip.
    std::uint64_t enumeration_budget = 1'000'000;
    /// Larger puzzles are counted but not enumerated.
    std::int64_t enumeration_max_cells = 10'000;

    static SearchOptions default_search()
    {
        SearchOptions s;
        s.node_budget = 50'000'000;
        return s;
    }
};

/// FNV-1a 64-bit digest, 16 hex digits.
std::string digest(const std::string& text);

/// Reduces `source` through `stage`, counts both sides, checks lift/project in both
/// directions over all enumerated solutions and the construction invariants. Oracle caps and
/// search budgets land in the verdict. Verdict precedence: mismatch (different counts, a failed
/// round trip or an invariant violation), then search-budget / oracle-cap, then equal.
ParsimonyReport check_parsimony(Stage stage, const Instance& source, const HarnessOptions& options = {});

/// Same, reusing an already built artifact.
ParsimonyReport check_parsimony(const ReductionArtifact& artifact, const HarnessOptions& options = {});

struct ChainStep
{
    ReductionArtifact artifact;
    ParsimonyReport report;
    /// Normalization applied to this stage's source before reducing (identity if none).
    Normalization normalization;
};

struct ChainResult
{
    std::vector<ChainStep> steps;

    bool all_equal() const;
};

/// Applies the stages from the one that consumes `source` up to `stop` (inclusive), inserting
/// normalize_nkdm where an NkDM source is outside its window. `source` is a 1in3 formula, a
/// 3dm instance, an n4dm or n3dm instance, or an LO instance.
ChainResult run_chain(const Instance& source, Stage stop = Stage::LoToPp, const HarnessOptions& options = {});

/// Stage consuming instances of this kind; nullopt for puzzles.
std::optional<Stage> first_stage(const Instance& source);

/// Line-oriented, stable field order. `timings` adds the two elapsed-time fields, the only
/// fields that vary between runs.
std::string serialize(const ParsimonyReport& r, bool timings = true);
std::string serialize(const ChainResult& c, bool timings = true);

/// 0 when every report is equal, else 1 if any mismatch, else 3.
int exit_code(const std::vector<ParsimonyReport>& reports);

}  // namespace pathred
