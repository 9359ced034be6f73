#pragma once

#include "eulerian/sampler.hpp"

#include <optional>
#include <vector>

namespace euler {

// Standard path with edge labels. vertices[i] sits on level startLevel + i;
// labels[i] picks one of the parallel edges vertices[i] -> vertices[i+1]:
// label < k+1 for a level-keeping step from (n,k), label < n-k for a
// k-raising step.
struct LabeledPath {
  std::vector<TriangleIndex> vertices;
  std::vector<int> labels;

  int startLevel() const { return vertices.empty() ? 0 : vertices.front().n; }
  int endLevel() const { return vertices.empty() ? 0 : vertices.back().n; }
};

// Canonical bijection between Perm(n) and standard labeled paths of length n.
// The path of pi visits (m, D(pi_m)) for the iterated remove-largest
// projections pi_m. Edge labels index insertion slots of the new maximum:
// descent-count-preserving slots are "immediately after each descent" plus
// the right end, numbered left to right; count-increasing slots are the rest
// (including the left end), numbered left to right.
LabeledPath permToPath(const Permutation& perm);

// Left inverse of permToPath: rebuilds the permutation by inserting m+1 at
// the slot selected by each edge label. The path must start at (1,0) with
// labels within the multiplicity bounds; malformed paths throw
// std::invalid_argument.
Permutation pathToPerm(const LabeledPath& path);

// Simulates the backward chain from `start` down to (1,0).
std::vector<TriangleIndex> runBackwardChain(const TriangleIndex& start,
                                            RngStream& rng);

// Exact marginals of the backward chain started at `start`, on the tilde
// scale (each row is a probability vector). result[i] is the distribution on
// row downToRow + i; result.back() is the delta at the start vertex.
std::vector<std::vector<Rational>> propagateExact(const TriangleIndex& start,
                                                  int downToRow);

struct CouplingTrace {
  int startLevel = 0;
  // k coordinates per level; index i corresponds to level startLevel - i.
  std::vector<int> kLower;  // chain started at the smaller kappa
  std::vector<int> kUpper;  // chain started at the larger kappa
  std::optional<int> mergeLevel;  // level of first coincidence
  bool orderingHolds = true;      // kLower <= kUpper at every level
};

// Monotone coupling of two backward chains from (N,kappaA) and (N,kappaB),
// kappaA < kappaB: independent jumps until the trajectories first share a
// vertex, shared draws afterwards (the merge rule leaves both marginal laws
// untouched).
CouplingTrace coupledRun(int N, int kappaA, int kappaB, RngStream& rng);

}  // namespace euler
