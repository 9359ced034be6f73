#pragma once

#include "eulerian/boundary.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace euler {

// Recorded in CLI output metadata; bump when the generator or any draw
// mapping changes, so archived frequencies stay reproducible.
inline constexpr const char* kRngVersion = "mt19937_64/v1";

// Deterministic stream: identical seed => identical draw sequence. The
// bounded and unit-interval mappings are implemented here (not taken from
// <random> distributions) because the standard leaves those
// implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t nextU64();
  // Unbiased draw from {0,...,bound-1}, bound >= 1 (rejection sampling).
  std::uint64_t nextBelow(std::uint64_t bound);
  // 53-bit uniform in [0,1).
  double nextUnit();
  // Bernoulli(p) for exact rational p in [0,1]; bias below 2^-64.
  bool nextBernoulli(const Rational& p);

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

// One-row notation, values 1..n.
using Permutation = std::vector<int>;

// A finite window onto an arrangement: the permutation of [n] induced on the
// first n labels. Samplers produce consistent families of these (removing the
// largest label recovers the (n-1)-prefix of the same draw).
struct ArrangementPrefix {
  int n = 0;
  Permutation perm;
};

struct DescentStats {
  int count = 0;
  std::vector<int> positions;  // 1-based positions j with perm(j) > perm(j+1)
};

// Throws std::invalid_argument unless perm is a permutation of [n].
DescentStats descents(const Permutation& perm);

// The projection p_n: delete the value n from the one-row notation.
Permutation removeLargest(const Permutation& perm);

enum class BucketOrder { Increasing, Decreasing };

// Deterministic core of bucket sorting: allocation[i] in {0..kappa} is the
// bucket of integer i+1; buckets are concatenated in order with each bucket
// sorted per `order`. Exposed separately so tests can enumerate allocations
// exhaustively and so consistency across n can share one allocation stream.
Permutation bucketArrange(std::span<const int> allocation, int kappa,
                          BucketOrder order);

// Allocates 1..n i.i.d. uniformly over kappa+1 buckets and arranges.
// Increasing order realizes the upper-wing law (at most kappa descents),
// decreasing order the lower-wing law (at least n-1-kappa descents).
ArrangementPrefix bucketSort(int kappa, int n, RngStream& rng,
                             BucketOrder order = BucketOrder::Increasing);

// Rank permutation of n i.i.d. 64-bit uniforms: uniform on Perm(n). Ties
// (probability ~ n^2/2^64) are resolved by redrawing the colliding label.
ArrangementPrefix exchangeableSample(int n, RngStream& rng);

// Exact moments of the descent count under the uniform law, computed from the
// Eulerian row.
Rational exactDescentMean(int n);
Rational exactDescentVariance(int n);

struct MomentReport {
  int n = 0;
  long long trials = 0;
  double empiricalMean = 0;
  double empiricalVariance = 0;
  Rational exactMean;        // from the Eulerian distribution
  Rational exactVariance;    //
  Rational statedMean;       // (n-1)/2
  Rational statedVariance;   // (n-1)/12, kept for comparison as stated
  double zMeanVsStated = 0;
  double zVarianceVsStated = 0;
  double zVarianceVsExact = 0;
};

// Monte Carlo moments of D over uniform permutations. The z denominators use
// the empirical fourth moment for the variance and the exact variance for
// the mean. Requires trials >= 1000.
MomentReport descentMoments(int n, long long trials, RngStream& rng);

struct LlnReport {
  int kappa = 0;
  int nMax = 0;
  long long trials = 0;
  // fractionAtKappa[n-1] = fraction of trials with D(Pi^kappa_n) == kappa.
  std::vector<double> fractionAtKappa;
  double finalFraction = 0;
};

// Trajectory of P(D(Pi^kappa_n) = kappa) along one allocation stream per
// trial. Requires nMax >= 4*(kappa+1).
LlnReport lawOfLargeNumbersWitness(int kappa, int nMax, long long trials,
                                   RngStream& rng);

struct UniformSumReport {
  int n = 0;
  long long trials = 0;
  std::vector<long long> counts;    // integer part k = 0..n-1
  std::vector<Rational> exactProb;  // <n,k>/n!
  std::vector<double> zScores;
  double maxAbsZ = 0;
};

// Bins floor(Y_1+...+Y_n) for i.i.d. uniform Y and compares against the
// Eulerian row probabilities.
UniformSumReport uniformSumIdentityWitness(int n, long long trials,
                                           RngStream& rng);

struct DistributionComparison {
  BoundaryParam theta;
  int n = 0;
  long long trials = 0;
  double maxAbsDeviation = 0;  // max |empirical - exact| over all of Perm(n)
  double maxAbsZ = 0;          // over cells with positive probability
  double chiSquare = 0;
  int dof = 0;
  // Sufficiency of the descent count: max spread z within equal-descent
  // classes (frequencies should agree up to multinomial noise).
  double maxClassSpreadZ = 0;
  bool zeroOutsideSupport = true;  // no mass on permutations with W = 0
};

// Tabulates the empirical law of the sampler attached to theta (increasing
// buckets / decreasing buckets / exchangeable) over all of Perm(n) and
// compares with the extreme solution entries. Tabulation bound n <= 7.
DistributionComparison empiricalVsExact(const BoundaryParam& theta, int n,
                                        long long trials, RngStream& rng);

// Lexicographic rank of a permutation of [n] and its inverse, n <= 20.
long long permRank(const Permutation& perm);
Permutation permUnrank(int n, long long rank);

}  // namespace euler
