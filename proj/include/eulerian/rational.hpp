#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace euler {

// Exact scalars used throughout the library. All triangle entries, solution
// values and transition probabilities are cpp_rational: canonical form
// (reduced, positive denominator) is maintained by the backend, arithmetic
// never rounds.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double toDouble(const Rational& x);

// Lossless "numerator/denominator" form, e.g. "3/4", "-1/6", "5/1".
std::string formatRational(const Rational& x);

// Accepts "a", "a/b", decimal ("0.25") and scientific ("1e-6") forms; all are
// converted exactly. Throws std::invalid_argument on malformed input or b = 0.
Rational parseRational(std::string_view text);

}  // namespace euler
