#pragma once

#include <pathred/instances.h>

#include <string>
#include <string_view>

namespace pathred
{

/// Line-oriented text formats, one value per file. `#` starts a comment.
///
///   p1in3 <vars> <clauses>          then `<i> <j> <k>` per clause
///   3dm <n> <num_triples>           then `<x> <y> <z>` per triple
///   nkdm <k> <n> <t>                then k lines of n integers
///   lo <n> <m>                      then a line of n lengths and a line of m densities
///   pp <rows> <cols>
///   doors <r1> <c1> <s1> <r2> <c2> <s2>      sides in {L,R,T,B}
///   rows(bottom-up): <rows labels or ->
///   cols: <cols labels or ->
///   path <len>                      then `<r> <c>` per cell
///
/// Solutions:
///   assign <vars>                   then a line of 0/1 values
///   3dm-sol <count>                 then `<x> <y> <z>` per chosen triple
///   nkdm-sol <k> <n>                then n lines of k values
///   lo-sol <n>                      then a line of n offsets
///
/// Long sequences (densities, labels) may use `v*r` for r repetitions of v, and `(v w ...)*r`
/// for r repetitions of a block. The serializer writes them densely up to kDenseSequenceLimit
/// entries and run-compressed beyond.

inline constexpr long kDenseSequenceLimit = 1L << 20;

enum class FileKind
{
    Cnf,
    ThreeDm,
    Nkdm,
    LengthOffsets,
    Puzzle,
    Path,
    Assignment,
    ThreeDmSolution,
    NkdmSolution,
    LengthOffsetsSolution
};

/// Kind of the first significant line's keyword.
FileKind detect_kind(std::string_view text);
std::string kind_name(FileKind kind);

std::string serialize(const Cnf1in3& f);
std::string serialize(const Tripartite3dm& g);
std::string serialize(const NumericalMatchingInstance& inst);
std::string serialize(const LengthOffsetsInstance& inst);
std::string serialize(const PathPuzzle& p);
std::string serialize(const GridPath& path);
std::string serialize(const Assignment& a);
std::string serialize(const Tripartite3dm& g, const ThreeDmSolution& s);
std::string serialize(const NumericalMatchingSolution& s);
std::string serialize(const LengthOffsetsSolution& s);

Cnf1in3 parse_cnf(std::string_view text);
Tripartite3dm parse_3dm(std::string_view text);
NumericalMatchingInstance parse_nkdm(std::string_view text);
LengthOffsetsInstance parse_lo(std::string_view text);
PathPuzzle parse_puzzle(std::string_view text);
GridPath parse_path(std::string_view text);
Assignment parse_assignment(std::string_view text);
ThreeDmSolution parse_3dm_solution(std::string_view text, const Tripartite3dm& g);
NumericalMatchingSolution parse_nkdm_solution(std::string_view text);
LengthOffsetsSolution parse_lo_solution(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace pathred
