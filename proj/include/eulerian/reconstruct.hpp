#pragma once

#include "eulerian/boundary.hpp"

#include <map>
#include <utility>
#include <vector>

namespace euler {

// values[i] = V_{i+1,0}. A left column determines a full array.
using LeftColumn = std::vector<Rational>;

// Fills the triangle column by column from its left column using
// V_{n+1,k+1} = (V_{nk} - (k+1) V_{n+1,k}) / (n-k). The output has the same
// number of rows as the input column and may contain negative entries when
// the column does not come from a genuine solution. Requires a nonempty
// column with V_{10} = 1.
SolutionArray nabla(const LeftColumn& left);

LeftColumn leftColumnOf(const SolutionArray& v);

struct MembershipVerdict {
  bool member = false;
  std::string reason;  // first violated constraint, empty when member
};

// Membership in the solution set over the available window: V_{10} = 1, all
// entries nonnegative, and the dual recursion on rows 1..N-1.
MembershipVerdict inVcheck(const SolutionArray& v);

struct MixtureWeights {
  std::map<BoundaryParam, Rational> weights;
  Rational residual{0};  // bound on unattributed / extrapolated mass
  bool determinate = true;
  std::vector<BoundaryParam> oscillating;  // populated when !determinate
};

struct DecomposeOptions {
  // A candidate weight is accepted when the last successive-row differences
  // either fall below this threshold or contract geometrically (in the latter
  // case the extrapolated tail is charged to the residual).
  Rational stabilizationThreshold{1, 1000000000};
};

// Limit-based blind decomposition over the candidate atoms upper:0..kappaCut,
// lower:0..kappaCut and half, read off the tilde rows near row rowBudget.
// Requires v to pass inVcheck and rowBudget >= 4*(kappaCut+2). Thresholds are
// heuristic; exact-support inputs should prefer decomposeExact.
MixtureWeights decompose(const SolutionArray& v, int kappaCut, int rowBudget,
                         const DecomposeOptions& options = {});

struct ExactDecomposition {
  enum class Status { Ok, RankDeficient, NegativeWeight, Mismatch };
  Status status = Status::Ok;
  std::map<BoundaryParam, Rational> weights;
  std::string detail;  // witness for the non-Ok statuses
};

// Solves sum_j p_j W_{n0}(theta_j) = V_{n0} exactly on the left column
// (index set n = 1..|support|, extended if that subsystem were singular) and
// verifies the resulting mixture against every available entry of v.
ExactDecomposition decomposeExact(const SolutionArray& v,
                                  const std::vector<BoundaryParam>& support);

// Convex-combination synthesizer, mostly for tests and the CLI.
SolutionArray mixSolutions(
    const std::vector<std::pair<BoundaryParam, Rational>>& components,
    int maxRow);

}  // namespace euler
