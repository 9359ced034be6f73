#pragma once

#include "eulerian/triangle.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace euler {

// Denominators grow like (kappa+1)^n; parameters beyond the cap are rejected
// rather than silently degrading.
inline constexpr int kDefaultKappaCap = 64;

// Element of the discrete boundary parameter set: theta > 1/2 (upper wing),
// theta = 1/2, or theta < 1/2 (lower wing). Ordered by theta value, which
// identifies the parameter uniquely.
class BoundaryParam {
 public:
  enum class Kind { LowerKappa, Half, UpperKappa };

  static BoundaryParam upper(int kappa);
  static BoundaryParam half();
  static BoundaryParam lower(int kappa);

  Kind kind() const { return kind_; }
  // Wing index; only meaningful for Upper/LowerKappa (throws for Half).
  int kappa() const;

  // theta = (kappa+2)/(2(kappa+1)), 1/2, or kappa/(2(kappa+1)).
  Rational theta() const;
  // theta' = 2*theta - 1, an element of {-1,...,-1/3,-1/2,0,1/2,1/3,...,1}.
  Rational thetaPrime() const;

  // Mirror about 1/2: upper(k) <-> lower(k), half fixed.
  BoundaryParam reflect() const;

  std::string toString() const;                     // "upper:2", "half", "lower:0"
  static BoundaryParam parse(std::string_view s);   // inverse of toString

  friend bool operator==(const BoundaryParam&, const BoundaryParam&) = default;
  // theta is strictly monotone across the parameter set, so ordering by it is
  // total and canonical.
  bool operator<(const BoundaryParam& other) const;

 private:
  BoundaryParam(Kind kind, int kappa) : kind_(kind), kappa_(kappa) {}
  Kind kind_;
  int kappa_;
};

// Triangular array of rationals, rows 1..maxRow, row n holding entries
// k = 0..n-1. Used both for genuine solutions of the dual recursion and for
// raw reconstruction output (which may carry negative entries); membership is
// decided by inVcheck, not by the container.
class SolutionArray {
 public:
  explicit SolutionArray(int maxRow);

  int maxRow() const { return static_cast<int>(rows_.size()); }
  const Rational& at(int n, int k) const;
  Rational& at(int n, int k);
  const std::vector<Rational>& row(int n) const;

 private:
  std::vector<std::vector<Rational>> rows_;
};

// W(theta) up to row maxRow via the closed forms: C(n+kappa-k,n)/(kappa+1)^n
// (upper), C(kappa+k+1,n)/(kappa+1)^n (lower), 1/n! (half).
SolutionArray extremeSolution(const BoundaryParam& theta, int maxRow,
                              int kappaCap = kDefaultKappaCap);

// Redundant second route to the same entries:
// (1/n!) * prod_{i=-k}^{-k+n-1} (1 + theta' i). Disagreement with
// extremeSolution flags a bug in one of the two paths.
Rational unifiedFormula(const BoundaryParam& theta, int n, int k,
                        int kappaCap = kDefaultKappaCap);

// Vtilde_{nk} = <n,k> V_{nk}. For members of the solution set every row of
// the result is a probability vector.
SolutionArray tildeTransform(const SolutionArray& v);

// Truncated solution V^{N,kappa}: delta/<N,kappa> at (N,kappa) propagated
// backward. Returns the window rows 1..maxRow (maxRow <= N); with maxRow = N
// the prescribed delta row is included. Propagation runs on the tilde scale
// and divides by <n,k> at the end.
SolutionArray truncatedSolution(int N, int kappa, int maxRow);

// Full invariant audit for a claimed member of the solution set: V_{10} = 1,
// nonnegativity, the dual recursion on every interior row, row normalization
// sum_k <n,k> V_{nk} = 1, and V_{nk} <= 1/<n,k>.
struct SolutionCheck {
  bool ok = true;
  std::string firstViolation;  // empty when ok
};
SolutionCheck checkSolutionInvariants(const SolutionArray& v);

// kappa(N) regimes under which truncated solutions converge.
struct KappaSchedule {
  enum class Kind {
    ConstantKappa,  // kappa(N) = kappa          -> upper wing limit
    MirrorKappa,    // kappa(N) = N - 1 - kappa  -> lower wing limit
    Central,        // kappa(N) = floor(N/2)     -> 1/n! limit
  };

  Kind kind = Kind::ConstantKappa;
  int kappa = 0;  // unused for Central

  static KappaSchedule constant(int kappa);
  static KappaSchedule mirror(int kappa);
  static KappaSchedule central();
  static KappaSchedule parse(std::string_view s);  // "const:2" | "mirror:1" | "central"

  int kappaAt(int N) const;
  BoundaryParam limit() const;
  std::string describe() const;
};

struct ConvergencePoint {
  int N;
  Rational deviation;  // max |V^{N,kappa(N)}_{nk} - limit| over rows <= rowLimit
};

struct ConvergenceReport {
  KappaSchedule schedule;
  int rowLimit = 0;
  Rational tolerance;
  int nCap = 0;
  std::vector<ConvergencePoint> trajectory;
  bool converged = false;           // deviation fell below tolerance by nCap
  int firstNBelow = -1;             // smallest such N, -1 if none
  bool monotoneNonincreasing = true;  // over the whole trajectory
};

// Exact deviations of V^{N,kappa(N)} from the schedule's predicted limit on
// rows <= rowLimit, for N up to nCap. Non-convergence is reported, not
// thrown; comparisons are exact rational comparisons.
ConvergenceReport martinLimitWitness(const KappaSchedule& schedule, int rowLimit,
                                     const Rational& tolerance, int nCap);

// The sequence <N,kappa>/(kappa+1)^N for N = kappa+1..nMax, whose convergence
// to 1 drives the constant-kappa limit regime.
std::vector<Rational> maxDescentProbabilities(int kappa, int nMax);

}  // namespace euler
