#include "eulerian/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace euler {

namespace {

void requirePermutation(const Permutation& perm) {
  const int n = static_cast<int>(perm.size());
  if (n == 0) throw std::invalid_argument("not a permutation: empty sequence");
  std::vector<bool> seen(n + 1, false);
  for (int value : perm) {
    if (value < 1 || value > n || seen[value]) {
      throw std::invalid_argument("not a permutation of [" + std::to_string(n) + "]");
    }
    seen[value] = true;
  }
}

long long factorialLL(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

std::uint64_t RngStream::nextU64() { return gen_(); }

std::uint64_t RngStream::nextBelow(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("nextBelow: bound must be >= 1");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = nextU64();
    if (r >= threshold) return r % bound;
  }
}

double RngStream::nextUnit() {
  return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
}

bool RngStream::nextBernoulli(const Rational& p) {
  static const Int two64 = Int(1) << 64;
  // floor(p * 2^64); one draw is consumed regardless of p.
  const Int threshold = numerator(p) * two64 / denominator(p);
  return Int(nextU64()) < threshold;
}

DescentStats descents(const Permutation& perm) {
  requirePermutation(perm);
  DescentStats stats;
  for (int j = 1; j < static_cast<int>(perm.size()); ++j) {
    if (perm[j - 1] > perm[j]) {
      stats.positions.push_back(j);
      ++stats.count;
    }
  }
  return stats;
}

Permutation removeLargest(const Permutation& perm) {
  requirePermutation(perm);
  const int n = static_cast<int>(perm.size());
  Permutation out;
  out.reserve(n - 1);
  for (int value : perm) {
    if (value != n) out.push_back(value);
  }
  return out;
}

Permutation bucketArrange(std::span<const int> allocation, int kappa, BucketOrder order) {
  if (kappa < 0) throw std::invalid_argument("bucketArrange: kappa must be >= 0");
  std::vector<std::vector<int>> buckets(kappa + 1);
  for (std::size_t i = 0; i < allocation.size(); ++i) {
    const int b = allocation[i];
    if (b < 0 || b > kappa) throw std::invalid_argument("bucketArrange: bucket index out of range");
    buckets[b].push_back(static_cast<int>(i) + 1);  // already increasing
  }
  Permutation perm;
  perm.reserve(allocation.size());
  for (auto& bucket : buckets) {
    if (order == BucketOrder::Decreasing) std::reverse(bucket.begin(), bucket.end());
    perm.insert(perm.end(), bucket.begin(), bucket.end());
  }
  return perm;
}

ArrangementPrefix bucketSort(int kappa, int n, RngStream& rng, BucketOrder order) {
  if (n < 1) throw std::invalid_argument("bucketSort: n must be >= 1");
  std::vector<int> allocation(n);
  for (int i = 0; i < n; ++i) {
    allocation[i] = static_cast<int>(rng.nextBelow(static_cast<std::uint64_t>(kappa) + 1));
  }
  return {n, bucketArrange(allocation, kappa, order)};
}

ArrangementPrefix exchangeableSample(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("exchangeableSample: n must be >= 1");
  std::vector<std::uint64_t> keys(n);
  for (int i = 0; i < n; ++i) keys[i] = rng.nextU64();
  // Ties are essentially impossible with 64-bit keys; redraw the colliding
  // label (the larger one) so the mapping stays deterministic.
  std::vector<int> order(n);
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return keys[a] < keys[b]; });
    bool collision = false;
    for (int i = 0; i + 1 < n; ++i) {
      if (keys[order[i]] == keys[order[i + 1]]) {
        keys[std::max(order[i], order[i + 1])] = rng.nextU64();
        collision = true;
        break;
      }
    }
    if (!collision) break;
  }
  Permutation perm(n);
  for (int r = 0; r < n; ++r) perm[r] = order[r] + 1;
  return {n, perm};
}

Rational exactDescentMean(int n) {
  if (n < 1) throw std::invalid_argument("exactDescentMean: n must be >= 1");
  Int weighted = 0;
  for (int k = 0; k < n; ++k) weighted += Int(k) * eulerian(n, k);
  return Rational(weighted, factorial(n));
}

Rational exactDescentVariance(int n) {
  if (n < 1) throw std::invalid_argument("exactDescentVariance: n must be >= 1");
  Int weighted = 0;
  for (int k = 0; k < n; ++k) weighted += Int(k) * k * eulerian(n, k);
  const Rational mean = exactDescentMean(n);
  return Rational(weighted, factorial(n)) - mean * mean;
}

MomentReport descentMoments(int n, long long trials, RngStream& rng) {
  if (trials < 1000) throw std::invalid_argument("descentMoments: trials must be >= 1000");
  MomentReport report;
  report.n = n;
  report.trials = trials;
  // Raw power sums; D <= n-1, so these fit in 64 bits at desk scale.
  unsigned long long s1 = 0, s2 = 0;
  long double s3 = 0, s4 = 0;
  for (long long t = 0; t < trials; ++t) {
    const int d = descents(exchangeableSample(n, rng).perm).count;
    s1 += d;
    s2 += static_cast<unsigned long long>(d) * d;
    const long double dd = d;
    s3 += dd * dd * dd;
    s4 += dd * dd * dd * dd;
  }
  const long double T = static_cast<long double>(trials);
  const long double r1 = s1 / T, r2 = s2 / T, r3 = s3 / T, r4 = s4 / T;
  const long double varPop = r2 - r1 * r1;
  const long double m4 = r4 - 4 * r3 * r1 + 6 * r2 * r1 * r1 - 3 * r1 * r1 * r1 * r1;
  report.empiricalMean = static_cast<double>(r1);
  report.empiricalVariance = static_cast<double>(varPop * T / (T - 1));
  report.exactMean = exactDescentMean(n);
  report.exactVariance = exactDescentVariance(n);
  report.statedMean = Rational(n - 1, 2);
  report.statedVariance = Rational(n - 1, 12);
  const double sdMean = std::sqrt(toDouble(report.exactVariance) / static_cast<double>(trials));
  const long double varOfVar = std::max<long double>(m4 - varPop * varPop, 0) / T;
  const double sdVar = varOfVar > 0 ? static_cast<double>(std::sqrt(varOfVar)) : 1e-300;
  report.zMeanVsStated = (report.empiricalMean - toDouble(report.statedMean)) / sdMean;
  report.zVarianceVsStated = (report.empiricalVariance - toDouble(report.statedVariance)) / sdVar;
  report.zVarianceVsExact = (report.empiricalVariance - toDouble(report.exactVariance)) / sdVar;
  return report;
}

LlnReport lawOfLargeNumbersWitness(int kappa, int nMax, long long trials, RngStream& rng) {
  if (kappa < 0) throw std::invalid_argument("lawOfLargeNumbersWitness: kappa must be >= 0");
  if (nMax < 4 * (kappa + 1)) {
    throw std::invalid_argument("lawOfLargeNumbersWitness: nMax must be >= 4*(kappa+1)");
  }
  if (trials < 1) throw std::invalid_argument("lawOfLargeNumbersWitness: trials must be >= 1");
  LlnReport report;
  report.kappa = kappa;
  report.nMax = nMax;
  report.trials = trials;
  std::vector<long long> hits(nMax, 0);
  std::vector<int> bucketMin(kappa + 1), bucketMax(kappa + 1);
  for (long long t = 0; t < trials; ++t) {
    std::fill(bucketMin.begin(), bucketMin.end(), 0);  // 0 = empty
    for (int n = 1; n <= nMax; ++n) {
      const int b = static_cast<int>(rng.nextBelow(static_cast<std::uint64_t>(kappa) + 1));
      if (bucketMin[b] == 0) bucketMin[b] = n;
      bucketMax[b] = n;
      // Descents sit at junctions of consecutive nonempty buckets.
      int d = 0, prevMax = 0;
      for (int i = 0; i <= kappa; ++i) {
        if (bucketMin[i] == 0) continue;
        if (prevMax > bucketMin[i]) ++d;
        prevMax = bucketMax[i];
      }
      if (d == kappa) ++hits[n - 1];
    }
  }
  report.fractionAtKappa.resize(nMax);
  for (int n = 1; n <= nMax; ++n) {
    report.fractionAtKappa[n - 1] = static_cast<double>(hits[n - 1]) / static_cast<double>(trials);
  }
  report.finalFraction = report.fractionAtKappa[nMax - 1];
  return report;
}

UniformSumReport uniformSumIdentityWitness(int n, long long trials, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("uniformSumIdentityWitness: n must be >= 1");
  if (trials < 1) throw std::invalid_argument("uniformSumIdentityWitness: trials must be >= 1");
  UniformSumReport report;
  report.n = n;
  report.trials = trials;
  report.counts.assign(n, 0);
  for (long long t = 0; t < trials; ++t) {
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += rng.nextUnit();
    int k = static_cast<int>(sum);
    if (k > n - 1) k = n - 1;  // sum < n holds, guard rounding anyway
    ++report.counts[k];
  }
  const Int total = factorial(n);
  const double T = static_cast<double>(trials);
  report.maxAbsZ = 0;
  for (int k = 0; k < n; ++k) {
    Rational p(eulerian(n, k), total);
    const double pd = toDouble(p);
    const double freq = static_cast<double>(report.counts[k]) / T;
    const double sd = std::sqrt(pd * (1 - pd) / T);
    const double z = sd > 0 ? (freq - pd) / sd : 0.0;
    report.exactProb.push_back(std::move(p));
    report.zScores.push_back(z);
    report.maxAbsZ = std::max(report.maxAbsZ, std::abs(z));
  }
  return report;
}

DistributionComparison empiricalVsExact(const BoundaryParam& theta, int n, long long trials,
                                        RngStream& rng) {
  if (n < 1 || n > 7) {
    throw std::invalid_argument("empiricalVsExact: n must lie in [1,7] (full tabulation)");
  }
  if (trials < 1) throw std::invalid_argument("empiricalVsExact: trials must be >= 1");
  DistributionComparison cmp{theta, n, trials};
  const long long cells = factorialLL(n);
  std::vector<long long> counts(cells, 0);
  for (long long t = 0; t < trials; ++t) {
    Permutation perm;
    switch (theta.kind()) {
      case BoundaryParam::Kind::UpperKappa:
        perm = bucketSort(theta.kappa(), n, rng, BucketOrder::Increasing).perm;
        break;
      case BoundaryParam::Kind::LowerKappa:
        perm = bucketSort(theta.kappa(), n, rng, BucketOrder::Decreasing).perm;
        break;
      case BoundaryParam::Kind::Half:
        perm = exchangeableSample(n, rng).perm;
        break;
    }
    ++counts[permRank(perm)];
  }

  const SolutionArray w = extremeSolution(theta, n);
  const double T = static_cast<double>(trials);
  std::vector<double> classSum(n, 0.0);
  std::vector<long long> classSize(n, 0);
  std::vector<double> freq(cells);
  std::vector<int> descentOf(cells);
  for (long long r = 0; r < cells; ++r) {
    const Permutation perm = permUnrank(n, r);
    const int d = descents(perm).count;
    descentOf[r] = d;
    freq[r] = static_cast<double>(counts[r]) / T;
    classSum[d] += freq[r];
    ++classSize[d];
    const double p = toDouble(w.at(n, d));
    cmp.maxAbsDeviation = std::max(cmp.maxAbsDeviation, std::abs(freq[r] - p));
    if (p > 0) {
      const double sd = std::sqrt(p * (1 - p) / T);
      const double z = sd > 0 ? (freq[r] - p) / sd : (freq[r] == p ? 0.0 : 1e300);
      cmp.maxAbsZ = std::max(cmp.maxAbsZ, std::abs(z));
      const double expected = p * T;
      const double diff = static_cast<double>(counts[r]) - expected;
      cmp.chiSquare += diff * diff / expected;
      ++cmp.dof;
    } else if (counts[r] != 0) {
      cmp.zeroOutsideSupport = false;
    }
  }
  cmp.dof = std::max(cmp.dof - 1, 0);
  for (long long r = 0; r < cells; ++r) {
    const int d = descentOf[r];
    const double p = toDouble(w.at(n, d));
    if (p <= 0 || classSize[d] < 2) continue;
    const double classMean = classSum[d] / static_cast<double>(classSize[d]);
    const double sd = std::sqrt(p * (1 - p) / T);
    if (sd > 0) {
      cmp.maxClassSpreadZ = std::max(cmp.maxClassSpreadZ, std::abs(freq[r] - classMean) / sd);
    }
  }
  return cmp;
}

long long permRank(const Permutation& perm) {
  requirePermutation(perm);
  const int n = static_cast<int>(perm.size());
  if (n > 20) throw std::invalid_argument("permRank: n must be <= 20");
  long long rank = 0;
  for (int i = 0; i < n; ++i) {
    int smallerAfter = 0;
    for (int j = i + 1; j < n; ++j) {
      if (perm[j] < perm[i]) ++smallerAfter;
    }
    rank += smallerAfter * factorialLL(n - 1 - i);
  }
  return rank;
}

Permutation permUnrank(int n, long long rank) {
  if (n < 1 || n > 20) throw std::invalid_argument("permUnrank: n must lie in [1,20]");
  if (rank < 0 || rank >= factorialLL(n)) throw std::invalid_argument("permUnrank: rank out of range");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 1);
  Permutation perm;
  perm.reserve(n);
  for (int i = n - 1; i >= 0; --i) {
    const long long f = factorialLL(i);
    const long long idx = rank / f;
    rank %= f;
    perm.push_back(pool[idx]);
    pool.erase(pool.begin() + idx);
  }
  return perm;
}

}  // namespace euler
