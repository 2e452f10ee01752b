#pragma once

// Independent reference implementations used to pin expected values.
// Nothing here touches the grounder or engine; everything is computed by
// direct combinatorial search over the problem domain.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracles {

// Non-attacking queens on an n x n board, one per column. Boards are sorted
// vectors of (column, row) pairs, 1-based.
using Board = std::vector<std::pair<int, int>>;
long queensCount(int n);
std::vector<Board> queensBoards(int n);

// Directed Hamiltonian cycles through v0 as canonically sorted edge sets.
using EdgeSet = std::set<std::pair<std::string, std::string>>;
std::vector<EdgeSet> hamiltonianCycles(const std::vector<std::string>& vertices,
                                       const EdgeSet& edges,
                                       const std::string& v0);

// Ordered binary trees with leaves 0..k and internal vertices k+1..2k:
// every internal vertex has exactly two children smaller than itself, all
// vertices are reachable from the root 2k, and for internal x < x1 the
// maximum child of x is smaller than the maximum child of x1.
using IntEdgeSet = std::set<std::pair<int, int>>;
std::vector<IntEdgeSet> orderedTrees(int k);

// Sequence covering arrays of strength 3: assignments of a permutation of
// {1..s} to each of n rows such that every ordered triple of distinct
// symbols appears as a subsequence of some row. Returns the number of
// assignments.
long scaCount(int s, int n);

// Borda tally. profiles[p] = (ranking, votecount) where ranking[pos-1] is
// the candidate at position pos (1 = most preferred) among m candidates.
// Candidate at position pos gets (m - pos) * votecount points.
struct BordaResult {
    std::map<int, std::int64_t> scores;  // candidate -> points
    std::vector<int> winners;            // candidates with maximal score
};
BordaResult bordaTally(int m,
                       const std::vector<std::pair<std::vector<int>, int>>& profiles);

// Transitive closure of a binary relation by Floyd-Warshall, O(n^3).
using Pair = std::pair<std::string, std::string>;
std::set<Pair> warshallClosure(const std::set<Pair>& rel);

} // namespace oracles
