#pragma once

#include <pathred/instances.h>
#include <pathred/oracles.h>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pathred
{

enum class Stage
{
    SatTo3dm,
    ThreeDmToN4dm,
    N4dmToN3dm,
    N3dmToLo,
    LoToPp
};

/// Stage tags: sat-3dm, 3dm-n4dm, n4dm-n3dm, n3dm-lo, lo-pp.
std::string stage_tag(Stage s);
std::optional<Stage> stage_from_tag(const std::string& tag);

// ---------------------------------------------------------------------------
// Artifacts: a target instance plus the tables needed to map solutions both ways.

struct SatTo3dmArtifact
{
    /// Triple indices belonging to one variable gadget.
    struct Gadget
    {
        std::vector<std::size_t> positive;  ///< edge i covers x_i
        std::vector<std::size_t> negative;
        std::vector<std::size_t> garbage;
    };

    Cnf1in3 source;
    Tripartite3dm target;
    std::vector<Gadget> gadgets;  ///< gadgets[v - 1]
    /// names[part][index - 1]: `c<clause>.<copy>` for clause vertices, `~x<v>_<i>` for
    /// negative vertices, `x<v>'<d>` for auxiliary ones.
    std::array<std::vector<std::string>, 3> names;
};

struct ThreeDmToN4dmArtifact
{
    enum class Kind
    {
        XPlain,     ///< (10,i,0,0,0,0) in W'
        XCleanup,   ///< (10,i,-i,0,0,0) in W'
        YNegative,  ///< (12,0,0,0,-j,0) in W'
        YPlain,     ///< (10,0,0,j,0,0) in X'
        YCleanup,   ///< (10,0,0,j,-j,0) in X'
        ZNegative,  ///< (7,0,0,0,0,-k) in X'
        ZPlain,     ///< (10,0,0,0,0,k) in Y'
        TripleY,    ///< (10,0,i,0,j,k) in Y'
        XNegative,  ///< (11,0,-i,0,0,0) in Z'
        TripleZ     ///< (10,-i,0,-j,0,-k) in Z'
    };
    struct Tag
    {
        Kind kind;
        std::int64_t index;  ///< element index, or triple index for TripleY / TripleZ
    };

    Tripartite3dm source;
    NumericalMatchingInstance target;
    Integer base;
    std::array<std::map<Integer, Tag>, 4> provenance;  ///< value -> source item, per coordinate
    /// Coordinates (Y', Z') whose union with pairwise sums is a set; feeds the next stage.
    std::pair<int, int> sum_set_pair{2, 3};
};

struct N4dmToN3dmArtifact
{
    enum class Kind
    {
        WPrime,  ///< X': w'
        UBar,    ///< X': u-bar[w, x]
        XPrime,  ///< Y': x'
        ZPrime,  ///< Y': z'
        Filler,  ///< Y': C
        U,       ///< Z': u[w, x]
        YPrime   ///< Z': y'
    };
    struct Tag
    {
        Kind kind;
        Integer first;   ///< source value (w, x, y or z)
        Integer second;  ///< x for UBar and U
    };

    NumericalMatchingInstance source;
    NumericalMatchingInstance target;
    /// Source coordinates playing W, X, Y, Z. W and X are the sum-set pair.
    std::array<int, 4> roles{0, 1, 2, 3};
    Integer base;
    std::array<std::map<Integer, Tag>, 3> provenance;
};

struct N3dmToLoArtifact
{
    NumericalMatchingInstance source;
    LengthOffsetsInstance target;
};

struct LoToPpArtifact
{
    LengthOffsetsInstance source;
    PathPuzzle target;
    std::int64_t n = 0;
    Integer m;
    Integer block_width;               ///< 12n + 5
    std::vector<Integer> block_start;  ///< first column of block j
    std::vector<Integer> middle;       ///< middle column of block j
    std::vector<Integer> lone;         ///< separator column after block j (j < n - 1)
    /// Every solution of the source has disjoint left and right endpoint sets.
    bool endpoint_disjoint = false;
};

using ReductionArtifact =
    std::variant<SatTo3dmArtifact, ThreeDmToN4dmArtifact, N4dmToN3dmArtifact, N3dmToLoArtifact, LoToPpArtifact>;

Stage stage_of(const ReductionArtifact& a);

// ---------------------------------------------------------------------------
// Reductions

/// Refuses empty formulas and formulas with a variable that occurs in no clause (such a
/// variable has an empty gadget, which would halve the solution count).
SatTo3dmArtifact reduce_sat_to_3dm(const Cnf1in3& f);

/// Refuses instances that are not pairwise sparse or leave some element uncovered.
ThreeDmToN4dmArtifact reduce_3dm_to_n4dm(const Tripartite3dm& g);

/// Affine value map v -> (v + shift) * scale used by normalize_nkdm.
struct Normalization
{
    Integer shift = 0;
    Integer scale = 1;

    bool identity() const { return shift == 0 && scale == 1; }
    Integer apply(const Integer& v) const { return (v + shift) * scale; }
    Integer invert(const Integer& v) const { return v / scale - shift; }
};

struct NormalizedNkdm
{
    NumericalMatchingInstance instance;
    Normalization map;
    Integer target_shift;  ///< k * shift, so t' = (t + target_shift) * scale
};

/// Brings an instance into the window of the next reduction: (t/5, t/3) with t divisible by
/// 4 for k = 4, (t/4, t/2) for k = 3, by adding 2t (k = 4) or t (k = 3) to every element.
/// Identity when these already hold, unless `force`. Throws TriviallyUnsolvable when some
/// element is >= t.
NormalizedNkdm normalize_nkdm(const NumericalMatchingInstance& inst, bool force = false);
bool in_window(const NumericalMatchingInstance& inst);
NumericalMatchingSolution apply(const NormalizedNkdm& norm, const NumericalMatchingSolution& s);
NumericalMatchingSolution invert(const NormalizedNkdm& norm, const NumericalMatchingSolution& s);

/// First coordinate pair (a, b), a != b, with sets[a] together with sets[a] + sets[b] a set.
std::optional<std::pair<int, int>> find_sum_set_pair(const NumericalMatchingInstance& inst);

/// `pair` names the coordinates playing W and X; their union-with-sums must be a set.
N4dmToN3dmArtifact reduce_n4dm_to_n3dm(const NumericalMatchingInstance& inst, std::pair<int, int> pair);

/// Checks w' = 1, u-bar = 2 (mod 4) and the congruences of the other element families.
bool mod4_separated(const N4dmToN3dmArtifact& a);

N3dmToLoArtifact reduce_n3dm_to_lo(const NumericalMatchingInstance& inst);

/// Densities t_i = n - |{y > i}| - |{z : t - z <= i}| as runs over [0, t).
RunSequence<Integer> lo_densities(const NumericalMatchingInstance& inst);

// ---------------------------------------------------------------------------
// Solution maps. Each validates its input and throws PreconditionError on violations;
// a ConsistencyError means the constructed solution failed its own validation.

ThreeDmSolution lift_solution(const SatTo3dmArtifact& a, const Assignment& s);
Assignment project_solution(const SatTo3dmArtifact& a, const ThreeDmSolution& s);

NumericalMatchingSolution lift_solution(const ThreeDmToN4dmArtifact& a, const ThreeDmSolution& s);
ThreeDmSolution project_solution(const ThreeDmToN4dmArtifact& a, const NumericalMatchingSolution& s);

NumericalMatchingSolution lift_solution(const N4dmToN3dmArtifact& a, const NumericalMatchingSolution& s);
NumericalMatchingSolution project_solution(const N4dmToN3dmArtifact& a, const NumericalMatchingSolution& s);

LengthOffsetsSolution lift_solution(const N3dmToLoArtifact& a, const NumericalMatchingSolution& s);
NumericalMatchingSolution project_solution(const N3dmToLoArtifact& a, const LengthOffsetsSolution& s);

// ---------------------------------------------------------------------------
// Endpoint disjointness

/// True iff no offset b_j equals any right endpoint a_k + b_k.
bool check_endpoint_disjoint(const LengthOffsetsInstance& inst, const LengthOffsetsSolution& s);

/// Runs check_endpoint_disjoint on every solution (oracle-capped).
bool certify_endpoint_disjoint(const LengthOffsetsInstance& inst, const OracleLimits& limits = {});

// ---------------------------------------------------------------------------
// Bookkeeping tables as line-oriented text.

std::string trace(const ReductionArtifact& a);

}  // namespace pathred
