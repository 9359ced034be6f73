#pragma once

#include "eulerian/rational.hpp"

#include <vector>

namespace euler {

// Vertex (n,k) of the graded graph on the triangle: level n >= 1, descent
// count 0 <= k <= n-1. Out-of-range pairs are representable (they arise as
// neighbor candidates); valid() tells them apart.
struct TriangleIndex {
  int n = 1;
  int k = 0;

  bool valid() const { return n >= 1 && k >= 0 && k <= n - 1; }
  friend bool operator==(const TriangleIndex&, const TriangleIndex&) = default;
};

// <n,k>: number of permutations of [n] with exactly k descents, computed by
// the two-term recursion with a process-wide memo table. Returns 0 for k < 0
// or k > n-1. Throws std::invalid_argument for n < 1.
Int eulerian(int n, int k);

// Alternating-sum closed form sum_j (-1)^j C(n+1,j) (k+1-j)^n. Unlike
// eulerian(), out-of-range k is rejected: the formula is only asserted on
// 0 <= k <= n-1.
Int eulerianExplicit(int n, int k);

// Row n as a vector of length n.
std::vector<Int> eulerianRow(int n);

// Pre-extends the memo table. Concurrent reads are safe; growth is
// serialized internally, so call this up-front in parallel code if contention
// matters.
void ensureEulerianRows(int n);

// C(a,b) with the vanishing convention: 0 for b < 0 or b > a. Requires a >= 0.
Int binomial(long long a, long long b);

Int factorial(int n);

// One backward step of the chain: probability of moving from `from` = (n,k)
// to `to`, which must be (n-1,k) or (n-1,k-1) and valid. The two
// probabilities out of any vertex sum to exactly 1.
Rational transitionProb(const TriangleIndex& from, const TriangleIndex& to);

// (kappa+1)^n == sum_k <n,k> C(n+kappa-k, n), evaluated exactly.
bool verifyWorpitzky(int n, int kappa);

// Counts standard edge-labeled paths from the root to (n,k) by explicit
// enumeration and compares against <n,k>. Enumeration bound n <= 9; larger n
// throws std::invalid_argument.
bool verifyDimension(int n, int k);

inline constexpr int kDimensionEnumerationBound = 9;

}  // namespace euler
