#include "eulerian/chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace euler {

namespace {

std::string indexStr(const TriangleIndex& v) {
  return "(" + std::to_string(v.n) + "," + std::to_string(v.k) + ")";
}

// Insertion slots for a new maximum into perm (slot s = number of existing
// elements to the left of the insertion point). Slots keeping the descent
// count: immediately after each descent, plus the right end. Slots raising
// it: the left end plus immediately after each ascent. Both lists come out
// sorted, which fixes the labeling.
std::vector<int> preservingSlots(const Permutation& perm) {
  std::vector<int> slots;
  for (int j = 1; j < static_cast<int>(perm.size()); ++j) {
    if (perm[j - 1] > perm[j]) slots.push_back(j);
  }
  slots.push_back(static_cast<int>(perm.size()));
  return slots;
}

std::vector<int> raisingSlots(const Permutation& perm) {
  std::vector<int> slots{0};
  for (int j = 1; j < static_cast<int>(perm.size()); ++j) {
    if (perm[j - 1] < perm[j]) slots.push_back(j);
  }
  return slots;
}

int indexOf(const std::vector<int>& slots, int slot) {
  auto it = std::find(slots.begin(), slots.end(), slot);
  if (it == slots.end()) throw std::logic_error("permToPath: slot classification broke");
  return static_cast<int>(it - slots.begin());
}

// Probability of the level-keeping move (n,k) -> (n-1,k); zero when that
// vertex does not exist (k = n-1).
Rational keepProbability(int n, int k) {
  return Rational(Int(k + 1) * eulerian(n - 1, k), eulerian(n, k));
}

}  // namespace

LabeledPath permToPath(const Permutation& perm) {
  descents(perm);  // validates
  const int n = static_cast<int>(perm.size());
  std::vector<Permutation> prefixes(n);
  prefixes[n - 1] = perm;
  for (int m = n - 1; m >= 1; --m) prefixes[m - 1] = removeLargest(prefixes[m]);

  LabeledPath path;
  path.vertices.reserve(n);
  path.labels.reserve(n - 1);
  for (int m = 1; m <= n; ++m) {
    path.vertices.push_back({m, descents(prefixes[m - 1]).count});
  }
  for (int m = 1; m < n; ++m) {
    const Permutation& next = prefixes[m];
    const int position = static_cast<int>(
        std::find(next.begin(), next.end(), m + 1) - next.begin());
    const int slot = position;  // elements to the left of the new maximum
    if (path.vertices[m].k == path.vertices[m - 1].k) {
      path.labels.push_back(indexOf(preservingSlots(prefixes[m - 1]), slot));
    } else {
      path.labels.push_back(indexOf(raisingSlots(prefixes[m - 1]), slot));
    }
  }
  return path;
}

Permutation pathToPerm(const LabeledPath& path) {
  if (path.vertices.empty()) throw std::invalid_argument("pathToPerm: empty path");
  if (!(path.vertices.front() == TriangleIndex{1, 0})) {
    throw std::invalid_argument("pathToPerm: path must start at the root (1,0)");
  }
  if (path.labels.size() + 1 != path.vertices.size()) {
    throw std::invalid_argument("pathToPerm: need exactly one label per edge");
  }
  Permutation perm{1};
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    const TriangleIndex& from = path.vertices[i];
    const TriangleIndex& to = path.vertices[i + 1];
    const int m = static_cast<int>(perm.size());
    if (!to.valid() || to.n != from.n + 1 || (to.k != from.k && to.k != from.k + 1)) {
      throw std::invalid_argument("pathToPerm: " + indexStr(from) + " -> " + indexStr(to) +
                                  " is not an edge");
    }
    const std::vector<int> slots =
        (to.k == from.k) ? preservingSlots(perm) : raisingSlots(perm);
    const int label = path.labels[i];
    if (label < 0 || label >= static_cast<int>(slots.size())) {
      throw std::invalid_argument("pathToPerm: label " + std::to_string(label) +
                                  " out of range at " + indexStr(from));
    }
    perm.insert(perm.begin() + slots[label], m + 1);
  }
  return perm;
}

std::vector<TriangleIndex> runBackwardChain(const TriangleIndex& start, RngStream& rng) {
  if (!start.valid()) throw std::invalid_argument("runBackwardChain: invalid start vertex");
  std::vector<TriangleIndex> trajectory{start};
  int k = start.k;
  for (int n = start.n; n >= 2; --n) {
    k = rng.nextBernoulli(keepProbability(n, k)) ? k : k - 1;
    trajectory.push_back({n - 1, k});
  }
  return trajectory;
}

std::vector<std::vector<Rational>> propagateExact(const TriangleIndex& start, int downToRow) {
  if (!start.valid()) throw std::invalid_argument("propagateExact: invalid start vertex");
  if (downToRow < 1 || downToRow > start.n) {
    throw std::invalid_argument("propagateExact: downToRow must lie in [1, start.n]");
  }
  ensureEulerianRows(start.n);
  std::vector<std::vector<Rational>> collected;
  std::vector<Rational> current(start.n, Rational(0));
  current[start.k] = 1;
  if (start.n >= downToRow) collected.push_back(current);
  for (int n = start.n; n > downToRow; --n) {
    std::vector<Rational> lower(n - 1, Rational(0));
    for (int j = 0; j < n - 1; ++j) {
      Rational mass(0);
      if (!current[j].is_zero()) {
        mass += transitionProb({n, j}, {n - 1, j}) * current[j];
      }
      if (!current[j + 1].is_zero()) {
        mass += transitionProb({n, j + 1}, {n - 1, j}) * current[j + 1];
      }
      lower[j] = std::move(mass);
    }
    current = std::move(lower);
    collected.push_back(current);
  }
  std::reverse(collected.begin(), collected.end());
  return collected;
}

CouplingTrace coupledRun(int N, int kappaA, int kappaB, RngStream& rng) {
  if (N < 1 || kappaA < 0 || kappaA >= kappaB || kappaB > N - 1) {
    throw std::invalid_argument("coupledRun: need 0 <= kappaA < kappaB <= N-1");
  }
  CouplingTrace trace;
  trace.startLevel = N;
  int ka = kappaA, kb = kappaB;
  bool merged = false;
  trace.kLower.push_back(ka);
  trace.kUpper.push_back(kb);
  for (int n = N; n >= 2; --n) {
    if (merged) {
      const bool keep = rng.nextBernoulli(keepProbability(n, ka));
      ka = keep ? ka : ka - 1;
      kb = ka;
    } else {
      ka = rng.nextBernoulli(keepProbability(n, ka)) ? ka : ka - 1;
      kb = rng.nextBernoulli(keepProbability(n, kb)) ? kb : kb - 1;
      if (ka == kb) {
        merged = true;
        trace.mergeLevel = n - 1;
      }
    }
    trace.kLower.push_back(ka);
    trace.kUpper.push_back(kb);
    if (ka > kb) trace.orderingHolds = false;
  }
  return trace;
}

}  // namespace euler
