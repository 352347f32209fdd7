#pragma once

#include <pathred/instances.h>
#include <pathred/reductions.h>

#include <cstdint>
#include <functional>
#include <vector>

namespace pathred
{

/// Checks simplicity, adjacency, door endpoints and every numeric label. Works on puzzles
/// whose label sequences are run-compressed; cost is proportional to the path length and
/// the number of label runs.
Violations verify_path(const PathPuzzle& p, const GridPath& path);

/// count_paths engines. Backtrack walks the path cell by cell (the only engine that can
/// enumerate); Transfer sweeps a frontier row by row and only counts. Auto picks Transfer for
/// counting unless `paranoid` is set.
enum class SearchEngine
{
    Auto,
    Backtrack,
    Transfer
};

struct SearchOptions
{
    /// Disables the reachability lookahead and the mandatory-cell bound. Only the local
    /// checks remain: simple path, never exceed a label, exact labels at the end door.
    bool paranoid = false;
    std::uint64_t node_budget = 1'000'000'000;
    std::int64_t max_cells = 4'000'000;
    SearchEngine engine = SearchEngine::Auto;
    /// Frontier size cap of the Transfer engine.
    std::size_t max_states = 4'000'000;
};

struct SearchStats
{
    std::uint64_t nodes = 0;
    std::uint64_t floods = 0;
};

/// Undirected solutions: the search starts at the lexicographically smaller door cell, so a
/// path and its reversal are found once. Paths are emitted in canonical orientation.
void for_each_path(const PathPuzzle& p, const std::function<void(const GridPath&)>& visit,
                   const SearchOptions& options = {}, SearchStats* stats = nullptr);
SolutionCount count_paths(const PathPuzzle& p, const SearchOptions& options = {}, SearchStats* stats = nullptr);
std::vector<GridPath> enumerate_paths(const PathPuzzle& p, const SearchOptions& options = {},
                                      SearchStats* stats = nullptr);

/// Grid of 2m+3 rows and (12n+6)n-1 columns. `endpoint_disjoint` records that every solution
/// of `inst` has disjoint endpoint sets (true for outputs of reduce_n3dm_to_lo); it gates
/// complete_row_labels.
LoToPpArtifact reduce_lo_to_pp(const LengthOffsetsInstance& inst, bool endpoint_disjoint = false);

/// Builds the path with the left 6n-cell run at the bottom end of each middle segment.
GridPath lift_lo_solution_to_path(const LoToPpArtifact& a, const LengthOffsetsSolution& s);

/// Reads each middle-column segment back as an offset.
LengthOffsetsSolution project_path_to_lo(const LoToPpArtifact& a, const GridPath& path);

/// Labels every blank row. Blank row 2i+1 (0 <= i <= m) gets
/// 4n + (6n+1)|t_i - t_{i-1}| + min(t_{i-1}, t_i), with t_{-1} = t_m = 0.
PathPuzzle complete_row_labels(const LoToPpArtifact& a);

}  // namespace pathred
