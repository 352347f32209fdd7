#pragma once

#include <pathred/integer.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pathred
{

// ---------------------------------------------------------------------------
// Positive 1-in-3-SAT

/// CNF formula with only positive literals. Variables are 1-based.
struct Cnf1in3
{
    std::int64_t variable_count = 0;
    std::vector<std::array<std::int64_t, 3>> clauses;

    friend bool operator==(const Cnf1in3&, const Cnf1in3&) = default;
};

/// Truth assignment; values[v - 1] is variable v.
struct Assignment
{
    std::vector<bool> values;

    friend bool operator==(const Assignment&, const Assignment&) = default;
    friend auto operator<=>(const Assignment& a, const Assignment& b) { return a.values <=> b.values; }
};

// ---------------------------------------------------------------------------
// 3-dimensional matching

using Triple = std::array<std::int64_t, 3>;

/// Parts X, Y, Z all have `part_size` elements; triples hold 1-based indices into them.
struct Tripartite3dm
{
    std::int64_t part_size = 0;
    std::vector<Triple> triples;

    friend bool operator==(const Tripartite3dm&, const Tripartite3dm&) = default;
};

/// Sorted indices into Tripartite3dm::triples.
struct ThreeDmSolution
{
    std::vector<std::size_t> triples;

    friend bool operator==(const ThreeDmSolution&, const ThreeDmSolution&) = default;
    friend auto operator<=>(const ThreeDmSolution& a, const ThreeDmSolution& b) { return a.triples <=> b.triples; }
};

/// No two triples agree on more than one coordinate.
bool is_pairwise_sparse(const Tripartite3dm& g);

/// Number of triples using element `index` (1-based) of part `part` (0, 1, 2).
std::vector<std::int64_t> multiplicities(const Tripartite3dm& g, int part);

// ---------------------------------------------------------------------------
// Numerical k-dimensional matching

struct NumericalMatchingInstance
{
    int k = 3;
    std::vector<std::vector<Integer>> sets;
    Integer target = 0;

    std::size_t n() const { return sets.empty() ? 0 : sets.front().size(); }

    friend bool operator==(const NumericalMatchingInstance&, const NumericalMatchingInstance&) = default;
};

/// A multiset of k-tuples. Identity is value-level: the tuples are kept sorted.
struct NumericalMatchingSolution
{
    std::vector<std::vector<Integer>> tuples;

    NumericalMatchingSolution() = default;
    explicit NumericalMatchingSolution(std::vector<std::vector<Integer>> t);

    friend bool operator==(const NumericalMatchingSolution&, const NumericalMatchingSolution&) = default;
    friend bool operator<(const NumericalMatchingSolution& a, const NumericalMatchingSolution& b)
    {
        return a.tuples < b.tuples;
    }
};

/// Per-set duplicate-freeness.
std::vector<bool> set_flags(const NumericalMatchingInstance& inst);

/// True when sets[a] together with the pairwise sums sets[a] + sets[b] contains no repeated value.
bool union_with_sums_is_set(const std::vector<Integer>& a, const std::vector<Integer>& b);

// ---------------------------------------------------------------------------
// Length Offsets

struct LengthOffsetsInstance
{
    std::vector<Integer> lengths;
    Integer horizon = 0;
    RunSequence<Integer> densities;

    friend bool operator==(const LengthOffsetsInstance&, const LengthOffsetsInstance&) = default;
};

struct LengthOffsetsSolution
{
    std::vector<Integer> offsets;

    friend bool operator==(const LengthOffsetsSolution&, const LengthOffsetsSolution&) = default;
    friend bool operator<(const LengthOffsetsSolution& a, const LengthOffsetsSolution& b)
    {
        return a.offsets < b.offsets;
    }
};

// ---------------------------------------------------------------------------
// Path Puzzle

enum class Side
{
    Left,
    Right,
    Top,
    Bottom
};

char side_char(Side s);
std::optional<Side> side_from_char(char c);

/// A door is a boundary side of a boundary cell. Rows count up from the bottom, both axes 1-based.
struct Door
{
    Integer row;
    Integer col;
    Side side = Side::Left;

    friend bool operator==(const Door&, const Door&) = default;
};

/// nullopt is a blank (unconstrained) line.
using Label = std::optional<Integer>;

struct PathPuzzle
{
    Integer rows = 0;
    Integer cols = 0;
    std::array<Door, 2> doors;
    RunSequence<Label> row_labels;  ///< bottom-up
    RunSequence<Label> col_labels;  ///< left-to-right

    friend bool operator==(const PathPuzzle&, const PathPuzzle&) = default;
};

struct Cell
{
    std::int64_t row = 0;
    std::int64_t col = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct GridPath
{
    std::vector<Cell> cells;

    friend bool operator==(const GridPath&, const GridPath&) = default;
    friend bool operator<(const GridPath& a, const GridPath& b) { return a.cells < b.cells; }
};

/// Reverses the path if needed so that its first cell is lexicographically <= its last.
GridPath canonical(GridPath path);

// ---------------------------------------------------------------------------
// Validation. Violations are data; these never throw on well-formed values.

struct Violation
{
    std::string locus;
    std::string message;

    std::string str() const { return locus + ": " + message; }
};

using Violations = std::vector<Violation>;

Violations validate(const Cnf1in3& f);
Violations validate(const Tripartite3dm& g);
Violations validate(const NumericalMatchingInstance& inst);
Violations validate(const LengthOffsetsInstance& inst);
Violations validate(const PathPuzzle& p);
Violations validate(const GridPath& path);

Violations validate(const Cnf1in3& f, const Assignment& a);
Violations validate(const Tripartite3dm& g, const ThreeDmSolution& s);
Violations validate(const NumericalMatchingInstance& inst, const NumericalMatchingSolution& s);
Violations validate(const LengthOffsetsInstance& inst, const LengthOffsetsSolution& s);
// Puzzle solutions are checked by verify_path (pathpuzzle.h).

std::string join(const Violations& v, const std::string& sep = "; ");

}  // namespace pathred
