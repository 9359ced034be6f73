#include "eulerian/boundary.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <utility>

namespace euler {

namespace {

std::string indexStr(int n, int k) {
  return "(" + std::to_string(n) + "," + std::to_string(k) + ")";
}

int checkedKappa(int kappa, int kappaCap) {
  if (kappa > kappaCap) {
    throw std::invalid_argument("kappa = " + std::to_string(kappa) +
                                " exceeds the configured cap " + std::to_string(kappaCap));
  }
  return kappa;
}

int parseNonNegative(std::string_view s, std::string_view what) {
  int value = -1;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || value < 0) {
    throw std::invalid_argument("bad " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

BoundaryParam BoundaryParam::upper(int kappa) {
  if (kappa < 0) throw std::invalid_argument("BoundaryParam::upper: kappa must be >= 0");
  return BoundaryParam(Kind::UpperKappa, kappa);
}

BoundaryParam BoundaryParam::half() { return BoundaryParam(Kind::Half, -1); }

BoundaryParam BoundaryParam::lower(int kappa) {
  if (kappa < 0) throw std::invalid_argument("BoundaryParam::lower: kappa must be >= 0");
  return BoundaryParam(Kind::LowerKappa, kappa);
}

int BoundaryParam::kappa() const {
  if (kind_ == Kind::Half) throw std::logic_error("BoundaryParam: half has no kappa");
  return kappa_;
}

Rational BoundaryParam::theta() const {
  switch (kind_) {
    case Kind::UpperKappa: return Rational(kappa_ + 2, 2 * (kappa_ + 1));
    case Kind::Half: return Rational(1, 2);
    case Kind::LowerKappa: return Rational(kappa_, 2 * (kappa_ + 1));
  }
  throw std::logic_error("BoundaryParam: bad kind");
}

Rational BoundaryParam::thetaPrime() const { return 2 * theta() - 1; }

BoundaryParam BoundaryParam::reflect() const {
  switch (kind_) {
    case Kind::UpperKappa: return lower(kappa_);
    case Kind::Half: return half();
    case Kind::LowerKappa: return upper(kappa_);
  }
  throw std::logic_error("BoundaryParam: bad kind");
}

std::string BoundaryParam::toString() const {
  switch (kind_) {
    case Kind::UpperKappa: return "upper:" + std::to_string(kappa_);
    case Kind::Half: return "half";
    case Kind::LowerKappa: return "lower:" + std::to_string(kappa_);
  }
  throw std::logic_error("BoundaryParam: bad kind");
}

BoundaryParam BoundaryParam::parse(std::string_view s) {
  if (s == "half") return half();
  if (s.starts_with("upper:")) return upper(parseNonNegative(s.substr(6), "kappa"));
  if (s.starts_with("lower:")) return lower(parseNonNegative(s.substr(6), "kappa"));
  throw std::invalid_argument("bad boundary parameter '" + std::string(s) +
                              "' (expected upper:K, half, or lower:K)");
}

bool BoundaryParam::operator<(const BoundaryParam& other) const {
  return theta() < other.theta();
}

SolutionArray::SolutionArray(int maxRow) {
  if (maxRow < 1) throw std::invalid_argument("SolutionArray: maxRow must be >= 1");
  rows_.resize(maxRow);
  for (int n = 1; n <= maxRow; ++n) rows_[n - 1].assign(n, Rational(0));
}

const Rational& SolutionArray::at(int n, int k) const {
  if (n < 1 || n > maxRow() || k < 0 || k > n - 1) {
    throw std::out_of_range("SolutionArray: no entry " + indexStr(n, k));
  }
  return rows_[n - 1][k];
}

Rational& SolutionArray::at(int n, int k) {
  return const_cast<Rational&>(std::as_const(*this).at(n, k));
}

const std::vector<Rational>& SolutionArray::row(int n) const {
  if (n < 1 || n > maxRow()) throw std::out_of_range("SolutionArray: no row " + std::to_string(n));
  return rows_[n - 1];
}

SolutionArray extremeSolution(const BoundaryParam& theta, int maxRow, int kappaCap) {
  SolutionArray result(maxRow);
  switch (theta.kind()) {
    case BoundaryParam::Kind::UpperKappa: {
      const int kappa = checkedKappa(theta.kappa(), kappaCap);
      Int denom = 1;
      for (int n = 1; n <= maxRow; ++n) {
        denom *= kappa + 1;
        for (int k = 0; k < n; ++k) result.at(n, k) = Rational(binomial(n + kappa - k, n), denom);
      }
      break;
    }
    case BoundaryParam::Kind::LowerKappa: {
      const int kappa = checkedKappa(theta.kappa(), kappaCap);
      Int denom = 1;
      for (int n = 1; n <= maxRow; ++n) {
        denom *= kappa + 1;
        for (int k = 0; k < n; ++k) result.at(n, k) = Rational(binomial(kappa + k + 1, n), denom);
      }
      break;
    }
    case BoundaryParam::Kind::Half: {
      Int denom = 1;
      for (int n = 1; n <= maxRow; ++n) {
        denom *= n;
        Rational value(1, denom);
        for (int k = 0; k < n; ++k) result.at(n, k) = value;
      }
      break;
    }
  }
  return result;
}

Rational unifiedFormula(const BoundaryParam& theta, int n, int k, int kappaCap) {
  if (n < 1 || k < 0 || k > n - 1) {
    throw std::invalid_argument("unifiedFormula: index " + indexStr(n, k) + " out of range");
  }
  if (theta.kind() != BoundaryParam::Kind::Half) checkedKappa(theta.kappa(), kappaCap);
  const Rational tp = theta.thetaPrime();
  Rational product(1);
  for (int i = -k; i <= -k + n - 1; ++i) product *= 1 + tp * i;
  return product / factorial(n);
}

SolutionArray tildeTransform(const SolutionArray& v) {
  SolutionArray result(v.maxRow());
  for (int n = 1; n <= v.maxRow(); ++n) {
    for (int k = 0; k < n; ++k) result.at(n, k) = v.at(n, k) * eulerian(n, k);
  }
  return result;
}

SolutionArray truncatedSolution(int N, int kappa, int maxRow) {
  if (N < 1) throw std::invalid_argument("truncatedSolution: N must be >= 1");
  if (kappa < 0 || kappa > N - 1) {
    throw std::invalid_argument("truncatedSolution: kappa = " + std::to_string(kappa) +
                                " outside [0," + std::to_string(N - 1) + "]");
  }
  if (maxRow < 1 || maxRow > N) {
    throw std::invalid_argument("truncatedSolution: maxRow must lie in [1,N]");
  }
  ensureEulerianRows(N);
  // Sweep the tilde row (a probability vector) downward, keeping one row live.
  std::vector<Rational> tilde(N, Rational(0));
  tilde[kappa] = 1;
  SolutionArray result(maxRow);
  auto store = [&](int n) {
    if (n <= maxRow) {
      for (int k = 0; k < n; ++k) result.at(n, k) = tilde[k] / eulerian(n, k);
    }
  };
  store(N);
  for (int n = N - 1; n >= 1; --n) {
    std::vector<Rational> next(n, Rational(0));
    for (int k = 0; k < n; ++k) {
      const Int en = eulerian(n, k);
      Rational acc(0);
      if (!tilde[k].is_zero()) {
        acc += Rational(Int(k + 1) * en, eulerian(n + 1, k)) * tilde[k];
      }
      if (!tilde[k + 1].is_zero()) {
        acc += Rational(Int(n - k) * en, eulerian(n + 1, k + 1)) * tilde[k + 1];
      }
      next[k] = std::move(acc);
    }
    tilde = std::move(next);
    store(n);
  }
  return result;
}

SolutionCheck checkSolutionInvariants(const SolutionArray& v) {
  SolutionCheck check;
  auto violate = [&](std::string why) {
    check.ok = false;
    check.firstViolation = std::move(why);
  };
  if (v.at(1, 0) != 1) {
    violate("normalization V_{10} = 1 violated");
    return check;
  }
  for (int n = 1; n <= v.maxRow(); ++n) {
    for (int k = 0; k < n; ++k) {
      if (v.at(n, k) < 0) {
        violate("negative entry at " + indexStr(n, k));
        return check;
      }
      if (v.at(n, k) * eulerian(n, k) > 1) {
        violate("bound V <= 1/<n,k> violated at " + indexStr(n, k));
        return check;
      }
    }
  }
  for (int n = 1; n + 1 <= v.maxRow(); ++n) {
    for (int k = 0; k < n; ++k) {
      Rational rhs = Rational(k + 1) * v.at(n + 1, k) + Rational(n - k) * v.at(n + 1, k + 1);
      if (v.at(n, k) != rhs) {
        violate("dual recursion violated at " + indexStr(n, k));
        return check;
      }
    }
  }
  for (int n = 1; n <= v.maxRow(); ++n) {
    Rational sum(0);
    for (int k = 0; k < n; ++k) sum += v.at(n, k) * eulerian(n, k);
    if (sum != 1) {
      violate("row " + std::to_string(n) + " does not normalize to 1");
      return check;
    }
  }
  return check;
}

KappaSchedule KappaSchedule::constant(int kappa) {
  if (kappa < 0) throw std::invalid_argument("KappaSchedule: kappa must be >= 0");
  return {Kind::ConstantKappa, kappa};
}

KappaSchedule KappaSchedule::mirror(int kappa) {
  if (kappa < 0) throw std::invalid_argument("KappaSchedule: kappa must be >= 0");
  return {Kind::MirrorKappa, kappa};
}

KappaSchedule KappaSchedule::central() { return {Kind::Central, 0}; }

KappaSchedule KappaSchedule::parse(std::string_view s) {
  if (s == "central") return central();
  if (s.starts_with("const:")) return constant(parseNonNegative(s.substr(6), "kappa"));
  if (s.starts_with("mirror:")) return mirror(parseNonNegative(s.substr(7), "kappa"));
  throw std::invalid_argument("bad schedule '" + std::string(s) +
                              "' (expected const:K, mirror:K, or central)");
}

int KappaSchedule::kappaAt(int N) const {
  switch (kind) {
    case Kind::ConstantKappa: return kappa;
    case Kind::MirrorKappa: return N - 1 - kappa;
    case Kind::Central: return N / 2;
  }
  throw std::logic_error("KappaSchedule: bad kind");
}

BoundaryParam KappaSchedule::limit() const {
  switch (kind) {
    case Kind::ConstantKappa: return BoundaryParam::upper(kappa);
    case Kind::MirrorKappa: return BoundaryParam::lower(kappa);
    case Kind::Central: return BoundaryParam::half();
  }
  throw std::logic_error("KappaSchedule: bad kind");
}

std::string KappaSchedule::describe() const {
  switch (kind) {
    case Kind::ConstantKappa: return "const:" + std::to_string(kappa);
    case Kind::MirrorKappa: return "mirror:" + std::to_string(kappa);
    case Kind::Central: return "central";
  }
  throw std::logic_error("KappaSchedule: bad kind");
}

ConvergenceReport martinLimitWitness(const KappaSchedule& schedule, int rowLimit,
                                     const Rational& tolerance, int nCap) {
  if (rowLimit < 1) throw std::invalid_argument("martinLimitWitness: rowLimit must be >= 1");
  if (tolerance <= 0) throw std::invalid_argument("martinLimitWitness: tolerance must be > 0");
  ConvergenceReport report{schedule, rowLimit, tolerance, nCap, {}, false, -1, true};
  const SolutionArray target = extremeSolution(schedule.limit(), rowLimit);
  // Start past the window so the delta row never overlaps the compared rows.
  int start = rowLimit + 1;
  if (schedule.kind == KappaSchedule::Kind::ConstantKappa) {
    start = std::max(start, schedule.kappa + 2);
  } else if (schedule.kind == KappaSchedule::Kind::MirrorKappa) {
    start = std::max(start, schedule.kappa + 2);
  }
  for (int N = start; N <= nCap; ++N) {
    const SolutionArray window = truncatedSolution(N, schedule.kappaAt(N), rowLimit);
    Rational deviation(0);
    for (int n = 1; n <= rowLimit; ++n) {
      for (int k = 0; k < n; ++k) {
        Rational d = abs(window.at(n, k) - target.at(n, k));
        if (d > deviation) deviation = std::move(d);
      }
    }
    if (!report.trajectory.empty() && deviation > report.trajectory.back().deviation) {
      report.monotoneNonincreasing = false;
    }
    if (!report.converged && deviation < tolerance) {
      report.converged = true;
      report.firstNBelow = N;
    }
    report.trajectory.push_back({N, std::move(deviation)});
  }
  return report;
}

std::vector<Rational> maxDescentProbabilities(int kappa, int nMax) {
  if (kappa < 0) throw std::invalid_argument("maxDescentProbabilities: kappa must be >= 0");
  std::vector<Rational> values;
  Int denom = pow(Int(kappa + 1), static_cast<unsigned>(kappa + 1));
  for (int N = kappa + 1; N <= nMax; ++N) {
    values.emplace_back(eulerian(N, kappa), denom);
    denom *= kappa + 1;
  }
  return values;
}

}  // namespace euler
