#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eulerian/triangle.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

using namespace euler;

TEST_CASE("first six rows match the classical triangle") {
  const std::vector<std::vector<long long>> expected = {
      {1}, {1, 1}, {1, 4, 1}, {1, 11, 11, 1}, {1, 26, 66, 26, 1}, {1, 57, 302, 302, 57, 1}};
  for (int n = 1; n <= 6; ++n) {
    const auto row = eulerianRow(n);
    REQUIRE(row.size() == static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) CHECK(row[k] == expected[n - 1][k]);
  }
}

TEST_CASE("boundary conditions") {
  CHECK(eulerian(1, 0) == 1);
  CHECK(eulerian(4, 5) == 0);
  CHECK(eulerian(4, -1) == 0);
  CHECK(eulerian(6, 1) == 57);
  CHECK_THROWS_AS(eulerian(0, 0), std::invalid_argument);
}

TEST_CASE("recursion, palindrome and row sums hold exactly up to n = 30") {
  for (int n = 2; n <= 30; ++n) {
    Int sum = 0;
    for (int k = 0; k < n; ++k) {
      CHECK(eulerian(n, k) == (k + 1) * eulerian(n - 1, k) + (n - k) * eulerian(n - 1, k - 1));
      CHECK(eulerian(n, k) == eulerian(n, n - 1 - k));
      sum += eulerian(n, k);
    }
    CHECK(sum == factorial(n));
  }
}

TEST_CASE("explicit alternating-sum formula") {
  CHECK(eulerianExplicit(4, 2) == 11);
  CHECK(eulerianExplicit(1, 0) == 1);
  CHECK(eulerianExplicit(7, 3) == eulerian(7, 3));
  CHECK(eulerianExplicit(7, 3) == 2416);
  for (int n = 1; n <= 30; ++n) {
    for (int k = 0; k < n; ++k) CHECK(eulerianExplicit(n, k) == eulerian(n, k));
  }
  CHECK_THROWS_AS(eulerianExplicit(4, 4), std::invalid_argument);
  CHECK_THROWS_AS(eulerianExplicit(4, -1), std::invalid_argument);
}

TEST_CASE("binomial convention") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 7) == 0);
  CHECK(binomial(3, -1) == 0);
  CHECK_THROWS_AS(binomial(-1, 0), std::invalid_argument);
}

TEST_CASE("transition probabilities") {
  CHECK(transitionProb({2, 0}, {1, 0}) == 1);
  CHECK(transitionProb({3, 1}, {2, 1}) == Rational(1, 2));
  CHECK(transitionProb({3, 1}, {2, 0}) == Rational(1, 2));
  for (int n = 2; n <= 20; ++n) {
    CHECK(transitionProb({n, 0}, {n - 1, 0}) == 1);
  }
  SUBCASE("the two moves out of any vertex sum to one") {
    for (int n = 2; n <= 30; ++n) {
      for (int k = 0; k < n; ++k) {
        Rational sum(0);
        if (k <= n - 2) sum += transitionProb({n, k}, {n - 1, k});
        if (k >= 1) sum += transitionProb({n, k}, {n - 1, k - 1});
        CHECK(sum == 1);
        if (k <= n - 2) {
          const Rational p = transitionProb({n, k}, {n - 1, k});
          CHECK(p >= 0);
          CHECK(p <= 1);
        }
      }
    }
  }
  SUBCASE("non-adjacent pairs are rejected") {
    CHECK_THROWS_AS(transitionProb({3, 1}, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(transitionProb({3, 1}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(transitionProb({1, 0}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(transitionProb({4, 2}, {3, 0}), std::invalid_argument);
  }
}

TEST_CASE("Worpitzky identity") {
  CHECK(verifyWorpitzky(2, 1));  // 4 = 1*3 + 1*1
  CHECK(verifyWorpitzky(1, 0));
  for (int n = 1; n <= 12; ++n) {
    for (int kappa = 0; kappa <= 6; ++kappa) CHECK(verifyWorpitzky(n, kappa));
  }
}

TEST_CASE("memo table is safe under concurrent growth and reads") {
  std::vector<std::thread> workers;
  std::atomic<bool> ok{true};
  for (int w = 0; w < 8; ++w) {
    workers.emplace_back([w, &ok] {
      for (int n = 1; n <= 40; ++n) {
        const int k = (n - 1 + w) % n;
        if (eulerian(40 + w, k) < 0 || eulerian(n, k) != eulerian(n, n - 1 - k)) ok = false;
      }
    });
  }
  for (auto& worker : workers) worker.join();
  CHECK(ok);
}

TEST_CASE("path counting matches the dimension") {
  CHECK(verifyDimension(3, 1));  // 4 paths
  CHECK(verifyDimension(1, 0));  // the root
  CHECK(verifyDimension(6, 2));  // 302 paths
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k < n; ++k) CHECK(verifyDimension(n, k));
  }
  CHECK_THROWS_AS(verifyDimension(10, 3), std::invalid_argument);
}
