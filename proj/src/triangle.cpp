#include "eulerian/triangle.hpp"

#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

namespace euler {

namespace {

std::string indexStr(int n, int k) {
  return "(" + std::to_string(n) + "," + std::to_string(k) + ")";
}

// Process-wide memo of triangle rows. Reads are shared; growth takes the
// exclusive lock.
class Table {
 public:
  static Table& instance() {
    static Table table;
    return table;
  }

  Int value(int n, int k) {
    ensure(n);
    std::shared_lock lock(mu_);
    return rows_[n - 1][k];
  }

  std::vector<Int> row(int n) {
    ensure(n);
    std::shared_lock lock(mu_);
    return rows_[n - 1];
  }

  void ensure(int n) {
    {
      std::shared_lock lock(mu_);
      if (static_cast<int>(rows_.size()) >= n) return;
    }
    std::unique_lock lock(mu_);
    while (static_cast<int>(rows_.size()) < n) {
      const int m = static_cast<int>(rows_.size()) + 1;
      std::vector<Int> row(m);
      if (m == 1) {
        row[0] = 1;
      } else {
        const std::vector<Int>& prev = rows_[m - 2];
        for (int k = 0; k < m; ++k) {
          Int left = (k <= m - 2) ? prev[k] : Int(0);
          Int diag = (k >= 1) ? prev[k - 1] : Int(0);
          row[k] = (k + 1) * left + (m - k) * diag;
        }
      }
      rows_.push_back(std::move(row));
    }
  }

 private:
  std::shared_mutex mu_;
  std::vector<std::vector<Int>> rows_;
};

}  // namespace

Int eulerian(int n, int k) {
  if (n < 1) throw std::invalid_argument("eulerian: n must be >= 1, got " + std::to_string(n));
  if (k < 0 || k > n - 1) return 0;
  return Table::instance().value(n, k);
}

Int eulerianExplicit(int n, int k) {
  if (n < 1 || k < 0 || k > n - 1) {
    throw std::invalid_argument("eulerianExplicit: index " + indexStr(n, k) + " out of range");
  }
  Int sum = 0;
  for (int j = 0; j <= k; ++j) {
    Int term = binomial(n + 1, j) * pow(Int(k + 1 - j), static_cast<unsigned>(n));
    sum += (j % 2 == 0) ? term : -term;
  }
  return sum;
}

std::vector<Int> eulerianRow(int n) {
  if (n < 1) throw std::invalid_argument("eulerianRow: n must be >= 1");
  return Table::instance().row(n);
}

void ensureEulerianRows(int n) {
  if (n >= 1) Table::instance().ensure(n);
}

Int binomial(long long a, long long b) {
  if (a < 0) throw std::invalid_argument("binomial: negative upper index");
  if (b < 0 || b > a) return 0;
  if (b > a - b) b = a - b;
  Int result = 1;
  for (long long i = 0; i < b; ++i) {
    result *= a - i;
    result /= i + 1;  // exact: product of j consecutive integers is divisible by j!
  }
  return result;
}

Int factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  Int result = 1;
  for (int i = 2; i <= n; ++i) result *= i;
  return result;
}

Rational transitionProb(const TriangleIndex& from, const TriangleIndex& to) {
  if (!from.valid() || from.n < 2 || !to.valid() || to.n != from.n - 1 ||
      (to.k != from.k && to.k != from.k - 1)) {
    throw std::invalid_argument("transitionProb: " + indexStr(from.n, from.k) + " -> " +
                                indexStr(to.n, to.k) + " is not a backward edge");
  }
  const int n = from.n, k = from.k;
  if (to.k == k) {
    return Rational(Int(k + 1) * eulerian(n - 1, k), eulerian(n, k));
  }
  return Rational(Int(n - k) * eulerian(n - 1, k - 1), eulerian(n, k));
}

bool verifyWorpitzky(int n, int kappa) {
  if (n < 1 || kappa < 0) throw std::invalid_argument("verifyWorpitzky: bad arguments");
  Int sum = 0;
  for (int k = 0; k < n; ++k) {
    sum += eulerian(n, k) * binomial(n + kappa - k, n);
  }
  return sum == pow(Int(kappa + 1), static_cast<unsigned>(n));
}

namespace {

// Counts labeled paths (1,0) -> (n,k) one by one, pruning branches that can
// no longer reach the target.
void countPaths(int m, int j, int n, int k, Int& count) {
  if (m == n) {
    if (j == k) ++count;
    return;
  }
  if (j > k || k - j > n - m) return;
  for (int label = 0; label < j + 1; ++label) countPaths(m + 1, j, n, k, count);
  for (int label = 0; label < m - j; ++label) countPaths(m + 1, j + 1, n, k, count);
}

}  // namespace

bool verifyDimension(int n, int k) {
  if (n < 1 || k < 0 || k > n - 1) {
    throw std::invalid_argument("verifyDimension: index " + indexStr(n, k) + " out of range");
  }
  if (n > kDimensionEnumerationBound) {
    throw std::invalid_argument("verifyDimension: n = " + std::to_string(n) +
                                " exceeds enumeration bound " +
                                std::to_string(kDimensionEnumerationBound));
  }
  Int count = 0;
  countPaths(1, 0, n, k, count);
  return count == eulerian(n, k);
}

}  // namespace euler
