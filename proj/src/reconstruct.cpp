#include "eulerian/reconstruct.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace euler {

namespace {

std::string indexStr(int n, int k) {
  return "(" + std::to_string(n) + "," + std::to_string(k) + ")";
}

Rational leftColumnValue(const BoundaryParam& theta, int n) {
  switch (theta.kind()) {
    case BoundaryParam::Kind::UpperKappa: {
      const int kappa = theta.kappa();
      return Rational(binomial(n + kappa, n), pow(Int(kappa + 1), static_cast<unsigned>(n)));
    }
    case BoundaryParam::Kind::LowerKappa: {
      const int kappa = theta.kappa();
      return Rational(binomial(kappa + 1, n), pow(Int(kappa + 1), static_cast<unsigned>(n)));
    }
    case BoundaryParam::Kind::Half:
      return Rational(1, factorial(n));
  }
  throw std::logic_error("BoundaryParam: bad kind");
}

// Exact Gaussian elimination; returns false when the matrix is singular.
bool solveExact(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
                std::vector<Rational>& x) {
  const std::size_t m = a.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    while (pivot < m && a[pivot][col].is_zero()) ++pivot;
    if (pivot == m) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      if (a[r][col].is_zero()) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(m, Rational(0));
  for (std::size_t r = m; r-- > 0;) {
    Rational acc = b[r];
    for (std::size_t c = r + 1; c < m; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return true;
}

}  // namespace

SolutionArray nabla(const LeftColumn& left) {
  if (left.empty()) throw std::invalid_argument("nabla: empty left column");
  if (left[0] != 1) throw std::invalid_argument("nabla: V_{10} must be 1");
  const int N = static_cast<int>(left.size());
  SolutionArray v(N);
  for (int n = 1; n <= N; ++n) v.at(n, 0) = left[n - 1];
  // Column k feeds column k+1 one row down; n-k >= 1 on the whole sweep.
  for (int k = 0; k + 1 < N; ++k) {
    for (int n = k + 1; n + 1 <= N; ++n) {
      v.at(n + 1, k + 1) = (v.at(n, k) - Rational(k + 1) * v.at(n + 1, k)) / Rational(n - k);
    }
  }
  return v;
}

LeftColumn leftColumnOf(const SolutionArray& v) {
  LeftColumn left(v.maxRow());
  for (int n = 1; n <= v.maxRow(); ++n) left[n - 1] = v.at(n, 0);
  return left;
}

MembershipVerdict inVcheck(const SolutionArray& v) {
  if (v.at(1, 0) != 1) return {false, "normalization V_{10} = 1 violated"};
  for (int n = 1; n <= v.maxRow(); ++n) {
    for (int k = 0; k < n; ++k) {
      if (v.at(n, k) < 0) return {false, "negative entry at " + indexStr(n, k)};
    }
  }
  for (int n = 1; n + 1 <= v.maxRow(); ++n) {
    for (int k = 0; k < n; ++k) {
      Rational rhs = Rational(k + 1) * v.at(n + 1, k) + Rational(n - k) * v.at(n + 1, k + 1);
      if (v.at(n, k) != rhs) return {false, "dual recursion violated at " + indexStr(n, k)};
    }
  }
  return {true, ""};
}

MixtureWeights decompose(const SolutionArray& v, int kappaCut, int rowBudget,
                         const DecomposeOptions& options) {
  if (kappaCut < 0) throw std::invalid_argument("decompose: kappaCut must be >= 0");
  if (rowBudget < 4 * (kappaCut + 2)) {
    throw std::invalid_argument("decompose: rowBudget must be >= 4*(kappaCut+2)");
  }
  if (v.maxRow() < rowBudget) {
    throw std::invalid_argument("decompose: array has fewer rows than rowBudget");
  }
  if (auto verdict = inVcheck(v); !verdict.member) {
    throw std::invalid_argument("decompose: input not in the solution set: " + verdict.reason);
  }

  const int R = rowBudget;
  auto tilde = [&](int N, int k) { return v.at(N, k) * eulerian(N, k); };

  MixtureWeights result;
  // Examines the last three tilde rows: a candidate weight is the final value
  // when the successive differences are already below threshold or still
  // contracting; a contracting tail is charged to the residual via the
  // geometric bound d2^2/(d1-d2).
  auto stabilize = [&](const Rational& s1, const Rational& s2, const Rational& s3,
                       const BoundaryParam& param, bool isHalf) {
    Rational d1 = abs(s2 - s1), d2 = abs(s3 - s2);
    if (d2 <= options.stabilizationThreshold) {
      result.weights[param] = s3;
      result.residual += d2;
    } else if (d2 < d1) {
      result.weights[param] = s3;
      result.residual += d2 * d2 / (d1 - d2);
    } else if (isHalf) {
      result.residual += s3;  // middle mass left unattributed
    } else {
      result.determinate = false;
      result.oscillating.push_back(param);
    }
  };

  std::vector<Rational> middle(3);
  for (int i = 0; i < 3; ++i) middle[i] = 1;
  for (int kappa = 0; kappa <= kappaCut; ++kappa) {
    Rational u[3], l[3];
    for (int i = 0; i < 3; ++i) {
      const int N = R - 2 + i;
      u[i] = tilde(N, kappa);
      l[i] = tilde(N, N - 1 - kappa);
      middle[i] -= u[i] + l[i];
    }
    stabilize(u[0], u[1], u[2], BoundaryParam::upper(kappa), false);
    stabilize(l[0], l[1], l[2], BoundaryParam::lower(kappa), false);
  }
  stabilize(middle[0], middle[1], middle[2], BoundaryParam::half(), true);
  return result;
}

ExactDecomposition decomposeExact(const SolutionArray& v,
                                  const std::vector<BoundaryParam>& support) {
  ExactDecomposition result;
  const int m = static_cast<int>(support.size());
  if (m == 0) throw std::invalid_argument("decomposeExact: empty support");
  if (m > v.maxRow()) {
    throw std::invalid_argument("decomposeExact: support larger than the number of rows");
  }
  if (std::set<BoundaryParam>(support.begin(), support.end()).size() != support.size()) {
    result.status = ExactDecomposition::Status::RankDeficient;
    result.detail = "duplicate support parameters";
    return result;
  }

  // Left-column system on rows 1..m; the left column determines the array, so
  // these rows are the canonical index set.
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
  std::vector<Rational> b(m);
  for (int n = 1; n <= m; ++n) {
    for (int j = 0; j < m; ++j) a[n - 1][j] = leftColumnValue(support[j], n);
    b[n - 1] = v.at(n, 0);
  }
  std::vector<Rational> x;
  if (!solveExact(a, b, x)) {
    // Fall back to a rank-revealing scan over all available left-column rows.
    bool solved = false;
    for (int extra = m + 1; extra <= v.maxRow() && !solved; ++extra) {
      for (int drop = 0; drop < m && !solved; ++drop) {
        auto aa = a;
        auto bb = b;
        for (int j = 0; j < m; ++j) aa[drop][j] = leftColumnValue(support[j], extra);
        bb[drop] = v.at(extra, 0);
        solved = solveExact(aa, bb, x);
      }
    }
    if (!solved) {
      result.status = ExactDecomposition::Status::RankDeficient;
      result.detail = "support columns are linearly dependent on the available rows";
      return result;
    }
  }

  for (int j = 0; j < m; ++j) result.weights[support[j]] = x[j];
  for (int j = 0; j < m; ++j) {
    if (x[j] < 0) {
      result.status = ExactDecomposition::Status::NegativeWeight;
      result.detail = "weight of " + support[j].toString() + " is negative (" +
                      formatRational(x[j]) + ")";
      return result;
    }
  }

  // Verify the mixture against every available entry, not just the solve rows.
  std::vector<SolutionArray> atoms;
  atoms.reserve(m);
  for (const auto& param : support) atoms.push_back(extremeSolution(param, v.maxRow()));
  for (int n = 1; n <= v.maxRow(); ++n) {
    for (int k = 0; k < n; ++k) {
      Rational mixed(0);
      for (int j = 0; j < m; ++j) mixed += x[j] * atoms[j].at(n, k);
      if (mixed != v.at(n, k)) {
        result.status = ExactDecomposition::Status::Mismatch;
        result.detail = "mixture disagrees with the input at " + indexStr(n, k) +
                        ": expected " + formatRational(v.at(n, k)) + ", mixture gives " +
                        formatRational(mixed);
        return result;
      }
    }
  }
  return result;
}

SolutionArray mixSolutions(
    const std::vector<std::pair<BoundaryParam, Rational>>& components, int maxRow) {
  if (components.empty()) throw std::invalid_argument("mixSolutions: no components");
  Rational total(0);
  for (const auto& [param, weight] : components) {
    if (weight < 0) throw std::invalid_argument("mixSolutions: negative weight");
    total += weight;
  }
  if (total != 1) throw std::invalid_argument("mixSolutions: weights must sum to 1");
  SolutionArray result(maxRow);
  for (const auto& [param, weight] : components) {
    SolutionArray atom = extremeSolution(param, maxRow);
    for (int n = 1; n <= maxRow; ++n) {
      for (int k = 0; k < n; ++k) result.at(n, k) += weight * atom.at(n, k);
    }
  }
  return result;
}

}  // namespace euler
