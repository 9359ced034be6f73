// Acceptance suite: runs every gate criterion at its pinned tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include "eulerian/chain.hpp"
#include "eulerian/reconstruct.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace euler;

namespace {

struct Gate {
  bool allPass = true;

  void run(int index, const std::string& name, double timeLimitSeconds,
           const std::function<bool(std::string&)>& body) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = body(detail);
    } catch (const std::exception& e) {
      pass = false;
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (timeLimitSeconds > 0 && seconds > timeLimitSeconds) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("runtime ") +
                std::to_string(seconds) + "s exceeds " + std::to_string(timeLimitSeconds) + "s";
    }
    allPass = allPass && pass;
    std::printf("[%s] %2d %-22s (%.2fs)%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
};

std::vector<BoundaryParam> paramsUpTo(int kappaMax) {
  std::vector<BoundaryParam> params{BoundaryParam::half()};
  for (int kappa = 0; kappa <= kappaMax; ++kappa) {
    params.push_back(BoundaryParam::upper(kappa));
    params.push_back(BoundaryParam::lower(kappa));
  }
  return params;
}

long long factorialLL(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool sameArray(const SolutionArray& a, const SolutionArray& b) {
  if (a.maxRow() != b.maxRow()) return false;
  for (int n = 1; n <= a.maxRow(); ++n) {
    for (int k = 0; k < n; ++k) {
      if (a.at(n, k) != b.at(n, k)) return false;
    }
  }
  return true;
}

void enumeratePaths(LabeledPath& path, int n, std::vector<Permutation>& out) {
  if (static_cast<int>(path.vertices.size()) == n) {
    out.push_back(pathToPerm(path));
    return;
  }
  const TriangleIndex v = path.vertices.back();
  for (int label = 0; label < v.k + 1; ++label) {
    path.vertices.push_back({v.n + 1, v.k});
    path.labels.push_back(label);
    enumeratePaths(path, n, out);
    path.vertices.pop_back();
    path.labels.pop_back();
  }
  for (int label = 0; label < v.n - v.k; ++label) {
    path.vertices.push_back({v.n + 1, v.k + 1});
    path.labels.push_back(label);
    enumeratePaths(path, n, out);
    path.vertices.pop_back();
    path.labels.pop_back();
  }
}

// --------------------------------------------------------------------------

bool criterion1Triangle(std::string& detail) {
  const std::vector<std::vector<long long>> display = {
      {1}, {1, 1}, {1, 4, 1}, {1, 11, 11, 1}, {1, 26, 66, 26, 1}, {1, 57, 302, 302, 57, 1}};
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k < n; ++k) {
      if (eulerian(n, k) != display[n - 1][k]) {
        detail = "display row " + std::to_string(n) + " mismatch";
        return false;
      }
    }
  }
  for (int n = 1; n <= 30; ++n) {
    Int sum = 0;
    for (int k = 0; k < n; ++k) {
      const Int value = eulerian(n, k);
      if (n >= 2 &&
          value != (k + 1) * eulerian(n - 1, k) + (n - k) * eulerian(n - 1, k - 1)) {
        detail = "recursion fails at (" + std::to_string(n) + "," + std::to_string(k) + ")";
        return false;
      }
      if (eulerianExplicit(n, k) != value) {
        detail = "explicit formula fails at (" + std::to_string(n) + "," + std::to_string(k) + ")";
        return false;
      }
      if (value != eulerian(n, n - 1 - k)) {
        detail = "palindrome fails in row " + std::to_string(n);
        return false;
      }
      sum += value;
    }
    if (sum != factorial(n)) {
      detail = "row sum fails at n=" + std::to_string(n);
      return false;
    }
  }
  return true;
}

bool criterion2Worpitzky(std::string& detail) {
  for (int n = 1; n <= 20; ++n) {
    for (int kappa = 0; kappa <= 10; ++kappa) {
      if (!verifyWorpitzky(n, kappa)) {
        detail = "fails at n=" + std::to_string(n) + ", kappa=" + std::to_string(kappa);
        return false;
      }
    }
  }
  return true;
}

bool criterion3Extremes(std::string& detail) {
  const int rows = 25;
  for (const auto& param : paramsUpTo(10)) {
    const SolutionArray w = extremeSolution(param, rows);
    const SolutionCheck check = checkSolutionInvariants(w);
    if (!check.ok) {
      detail = param.toString() + ": " + check.firstViolation;
      return false;
    }
    if (w.at(2, 0) != param.theta()) {
      detail = param.toString() + ": W_{20} != theta";
      return false;
    }
    const SolutionArray mirrored = extremeSolution(param.reflect(), rows);
    for (int n = 1; n <= rows; ++n) {
      for (int k = 0; k < n; ++k) {
        if (w.at(n, k) != mirrored.at(n, n - 1 - k)) {
          detail = param.toString() + ": symmetry fails";
          return false;
        }
        if (w.at(n, k) != unifiedFormula(param, n, k)) {
          detail = param.toString() + ": unified formula disagrees";
          return false;
        }
        if (param.kind() == BoundaryParam::Kind::UpperKappa &&
            (w.at(n, k) == 0) != (k > param.kappa())) {
          detail = param.toString() + ": support pattern fails";
          return false;
        }
        if (param.kind() == BoundaryParam::Kind::LowerKappa &&
            (w.at(n, k) == 0) != (k < n - 1 - param.kappa())) {
          detail = param.toString() + ": support pattern fails";
          return false;
        }
      }
    }
  }
  return true;
}

bool criterion4Nabla(std::string& detail) {
  for (const auto& param : paramsUpTo(8)) {
    const SolutionArray w = extremeSolution(param, 20);
    if (!sameArray(nabla(leftColumnOf(w)), w)) {
      detail = param.toString() + ": roundtrip fails";
      return false;
    }
  }
  if (!sameArray(nabla(LeftColumn(20, Rational(1))),
                 extremeSolution(BoundaryParam::upper(0), 20))) {
    detail = "all-ones column does not give the standard order";
    return false;
  }
  LeftColumn factorials;
  for (int n = 1; n <= 20; ++n) factorials.emplace_back(1, factorial(n));
  if (!sameArray(nabla(factorials), extremeSolution(BoundaryParam::half(), 20))) {
    detail = "1/n! column does not give the half solution";
    return false;
  }
  return true;
}

bool criterion5MartinLimits(std::string& detail) {
  const Rational tol6(1, 1000000), tol3(1, 1000);
  for (int kappa = 0; kappa <= 3; ++kappa) {
    const auto upper = martinLimitWitness(KappaSchedule::constant(kappa), 4, tol6, 60);
    if (!upper.converged || !upper.monotoneNonincreasing) {
      detail = "const:" + std::to_string(kappa) + " converged=" +
               std::to_string(upper.converged) + " monotone=" +
               std::to_string(upper.monotoneNonincreasing);
      return false;
    }
    const auto mirror = martinLimitWitness(KappaSchedule::mirror(kappa), 4, tol6, 60);
    if (!mirror.converged || !mirror.monotoneNonincreasing) {
      detail = "mirror:" + std::to_string(kappa) + " fails";
      return false;
    }
  }
  const auto central = martinLimitWitness(KappaSchedule::central(), 4, tol3, 60);
  if (!central.converged || central.trajectory.back().deviation >= tol3) {
    detail = "central schedule not within 1e-3 by N=60";
    return false;
  }
  // The central deviations zigzag with the parity of N; require decay across
  // the tail instead of step-by-step monotonicity.
  Rational dev40(0), dev60(0);
  for (const auto& point : central.trajectory) {
    if (point.N == 40) dev40 = point.deviation;
    if (point.N == 60) dev60 = point.deviation;
  }
  if (!(dev60 < dev40)) {
    detail = "central deviation at N=60 not below N=40";
    return false;
  }
  for (int kappa = 0; kappa <= 3; ++kappa) {
    const auto values = maxDescentProbabilities(kappa, 60);
    if (!(values.back() > Rational(999, 1000))) {
      detail = "concentration final value for kappa=" + std::to_string(kappa) + " not above 0.999";
      return false;
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i] < values[i - 1]) {
        detail = "concentration sequence decreases for kappa=" + std::to_string(kappa);
        return false;
      }
    }
  }
  return true;
}

bool criterion6Monotonicity(std::string& detail) {
  for (int N = 1; N <= 12; ++N) {
    std::vector<std::vector<Rational>> leftColumns;  // per kappa
    for (int kappa = 0; kappa < N; ++kappa) {
      const auto rows = propagateExact({N, kappa}, 1);
      std::vector<Rational> left;
      for (int n = 1; n <= N; ++n) left.push_back(rows[n - 1][0]);
      leftColumns.push_back(std::move(left));
    }
    for (int kappa = 1; kappa < N; ++kappa) {
      for (int n = 1; n <= N; ++n) {
        if (leftColumns[kappa][n - 1] > leftColumns[kappa - 1][n - 1]) {
          detail = "V_{n0} increases in kappa at N=" + std::to_string(N) +
                   ", n=" + std::to_string(n);
          return false;
        }
      }
    }
  }
  RngStream rng(0xC0117E);
  for (int run = 0; run < 10000; ++run) {
    const CouplingTrace trace = coupledRun(10, 2, 7, rng);
    if (!trace.orderingHolds || !trace.mergeLevel.has_value()) {
      detail = "coupling ordering violated at run " + std::to_string(run);
      return false;
    }
  }
  return true;
}

bool criterion7Bijection(std::string& detail) {
  for (int n = 1; n <= 7; ++n) {
    for (long long r = 0; r < factorialLL(n); ++r) {
      const Permutation perm = permUnrank(n, r);
      if (pathToPerm(permToPath(perm)) != perm) {
        detail = "roundtrip fails at n=" + std::to_string(n) + " rank=" + std::to_string(r);
        return false;
      }
    }
    LabeledPath root;
    root.vertices.push_back({1, 0});
    std::vector<Permutation> perms;
    enumeratePaths(root, n, perms);
    std::set<Permutation> distinct(perms.begin(), perms.end());
    if (distinct.size() != perms.size() ||
        perms.size() != static_cast<std::size_t>(factorialLL(n))) {
      detail = "path enumeration not bijective at n=" + std::to_string(n);
      return false;
    }
    std::map<int, Int> byDescents;
    for (const auto& perm : perms) byDescents[descents(perm).count] += 1;
    for (int k = 0; k < n; ++k) {
      if (byDescents[k] != eulerian(n, k)) {
        detail = "descent class sizes disagree with the triangle at n=" + std::to_string(n);
        return false;
      }
    }
  }
  for (int n = 1; n <= 8; ++n) {
    for (long long r = 0; r < factorialLL(n); ++r) {
      const Permutation perm = permUnrank(n, r);
      const int k = descents(perm).count;
      int preserving = 0, raising = 0;
      for (int slot = 0; slot <= n; ++slot) {
        Permutation extended = perm;
        extended.insert(extended.begin() + slot, n + 1);
        const int d = descents(extended).count;
        if (d == k) ++preserving;
        else if (d == k + 1) ++raising;
      }
      if (preserving != k + 1 || raising != n - k) {
        detail = "preimage split fails at n=" + std::to_string(n);
        return false;
      }
    }
  }
  return true;
}

bool criterion8BucketLaw(std::string& detail) {
  const long long trials = 1000000;
  RngStream rng(0xB0CCE7);
  std::ostringstream summary;
  for (int kappa = 0; kappa <= 3; ++kappa) {
    for (int n = 2; n <= 6; ++n) {
      const DistributionComparison cmp =
          empiricalVsExact(BoundaryParam::upper(kappa), n, trials, rng);
      if (!cmp.zeroOutsideSupport) {
        detail = "mass outside the support at kappa=" + std::to_string(kappa) +
                 ", n=" + std::to_string(n);
        return false;
      }
      if (cmp.maxAbsZ > 4.0) {
        detail = "4 sigma exceeded (z=" + std::to_string(cmp.maxAbsZ) + ") at kappa=" +
                 std::to_string(kappa) + ", n=" + std::to_string(n);
        return false;
      }
      if (cmp.maxClassSpreadZ > 4.0) {
        detail = "descent-class spread exceeds 4 sigma at kappa=" + std::to_string(kappa) +
                 ", n=" + std::to_string(n);
        return false;
      }
    }
  }
  return true;
}

bool criterion9Exchangeable(std::string& detail) {
  // chi-square thresholds at tail probability 1e-7 (suite-level false-failure
  // below 1e-6): dof 1, 5, 23.
  const std::map<int, double> chi2Bound = {{2, 28.374}, {3, 40.864}, {4, 76.903}};
  RngStream rng(0xE8C4);
  for (const auto& [n, bound] : chi2Bound) {
    const long long trials = 100000;
    std::vector<long long> counts(factorialLL(n), 0);
    for (long long t = 0; t < trials; ++t) ++counts[permRank(exchangeableSample(n, rng).perm)];
    const double expected = static_cast<double>(trials) / static_cast<double>(counts.size());
    double chi2 = 0;
    for (long long c : counts) {
      const double diff = static_cast<double>(c) - expected;
      chi2 += diff * diff / expected;
    }
    if (chi2 > bound) {
      detail = "uniformity chi-square " + std::to_string(chi2) + " over Perm(" +
               std::to_string(n) + ") exceeds " + std::to_string(bound);
      return false;
    }
  }
  std::ostringstream note;
  note.precision(4);
  note << "enumeration var(n=2)=" << formatRational(exactDescentVariance(2)) << " vs stated "
       << formatRational(Rational(1, 12));
  for (const int n : {8, 10, 20}) {
    const MomentReport report = descentMoments(n, 1000000, rng);
    if (std::abs(report.zMeanVsStated) > 4.0) {
      detail = "mean z=" + std::to_string(report.zMeanVsStated) + " at n=" + std::to_string(n);
      return false;
    }
    if (std::abs(report.zVarianceVsExact) > 4.0) {
      detail = "variance z (vs exact enumeration) = " +
               std::to_string(report.zVarianceVsExact) + " at n=" + std::to_string(n);
      return false;
    }
    note << "; n=" << n << " z_var_vs_stated=" << std::fixed << report.zVarianceVsStated;
  }
  detail = note.str();  // recorded, not asserted
  return true;
}

bool criterion10UniformSum(std::string& detail) {
  RngStream rng(0x05F7);
  for (const int n : {3, 6}) {
    const UniformSumReport report = uniformSumIdentityWitness(n, 1000000, rng);
    if (report.maxAbsZ > 4.0) {
      detail = "bin z=" + std::to_string(report.maxAbsZ) + " at n=" + std::to_string(n);
      return false;
    }
  }
  return true;
}

bool criterion11Decomposition(std::string& detail) {
  using Components = std::vector<std::pair<BoundaryParam, Rational>>;
  const std::vector<Components> cases = {
      {{BoundaryParam::upper(2), Rational(1)}},
      {{BoundaryParam::upper(0), Rational(3, 10)}, {BoundaryParam::lower(0), Rational(7, 10)}},
      {{BoundaryParam::upper(1), Rational(3, 4)}, {BoundaryParam::half(), Rational(1, 4)}},
      {{BoundaryParam::upper(3), Rational(1, 3)},
       {BoundaryParam::lower(2), Rational(1, 6)},
       {BoundaryParam::half(), Rational(1, 4)},
       {BoundaryParam::upper(0), Rational(1, 4)}},
  };
  const Rational tolerance(1, 1000);
  for (std::size_t index = 0; index < cases.size(); ++index) {
    const Components& components = cases[index];
    const SolutionArray v = mixSolutions(components, 40);

    std::vector<BoundaryParam> support;
    for (const auto& [param, weight] : components) support.push_back(param);
    const ExactDecomposition exact = decomposeExact(v, support);
    if (exact.status != ExactDecomposition::Status::Ok) {
      detail = "exact decomposition failed on case " + std::to_string(index);
      return false;
    }
    for (const auto& [param, weight] : components) {
      if (exact.weights.at(param) != weight) {
        detail = "exact weight of " + param.toString() + " wrong on case " +
                 std::to_string(index);
        return false;
      }
    }

    const MixtureWeights limit = decompose(v, 3, 40);
    if (!limit.determinate) {
      detail = "limit decomposition indeterminate on case " + std::to_string(index);
      return false;
    }
    std::map<BoundaryParam, Rational> truth(components.begin(), components.end());
    for (const auto& [param, weight] : limit.weights) {
      const Rational target = truth.count(param) ? truth.at(param) : Rational(0);
      if (abs(weight - target) > tolerance) {
        detail = "limit weight of " + param.toString() + " off by " +
                 formatRational(abs(weight - target)) + " on case " + std::to_string(index);
        return false;
      }
    }
    for (const auto& [param, weight] : truth) {
      if (!limit.weights.count(param) && weight > tolerance) {
        detail = "limit mode missed " + param.toString() + " on case " + std::to_string(index);
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main() {
  Gate gate;
  gate.run(1, "exact-triangle", 1.0, criterion1Triangle);
  gate.run(2, "worpitzky", 1.0, criterion2Worpitzky);
  gate.run(3, "extreme-solutions", 5.0, criterion3Extremes);
  gate.run(4, "nabla-roundtrip", 0, criterion4Nabla);
  gate.run(5, "martin-limits", 0, criterion5MartinLimits);
  gate.run(6, "exact-monotonicity", 0, criterion6Monotonicity);
  gate.run(7, "path-bijection", 0, criterion7Bijection);
  gate.run(8, "bucket-sort-law", 60.0, criterion8BucketLaw);
  gate.run(9, "exchangeable", 0, criterion9Exchangeable);
  gate.run(10, "uniform-sum", 0, criterion10UniformSum);
  gate.run(11, "decomposition", 0, criterion11Decomposition);
  std::printf("%s\n", gate.allPass ? "ACCEPTANCE: all criteria passed"
                                   : "ACCEPTANCE: FAILURES PRESENT");
  return gate.allPass ? 0 : 1;
}
