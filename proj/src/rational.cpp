#include "eulerian/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace euler {

namespace {

bool isInteger(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void fail(std::string_view text) {
  throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
}

// cpp_int's string constructor treats a leading 0 as an octal prefix; always
// strip to a canonical decimal form first.
Int makeInt(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto firstNonZero = text.find_first_not_of('0');
  const std::string digits(firstNonZero == std::string_view::npos ? "0"
                                                                  : text.substr(firstNonZero));
  Int value(digits);
  return negative ? -value : value;
}

// "12", "-0.25", "1e-6", "2.5e3" -> exact rational.
Rational parseDecimal(std::string_view s) {
  std::string_view mantissa = s;
  long long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view expPart = s.substr(e + 1);
    if (!isInteger(expPart)) fail(s);
    exponent = std::stoll(std::string(expPart));
    mantissa = s.substr(0, e);
  }
  std::string digits;
  long long scale = 0;  // digits after the point
  bool seenPoint = false, seenDigit = false;
  std::string_view m = mantissa;
  if (!m.empty() && (m.front() == '+' || m.front() == '-')) {
    if (m.front() == '-') digits += '-';
    m.remove_prefix(1);
  }
  for (char c : m) {
    if (c == '.') {
      if (seenPoint) fail(s);
      seenPoint = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (seenPoint) ++scale;
      seenDigit = true;
    } else {
      fail(s);
    }
  }
  if (!seenDigit) fail(s);
  Int numerator = makeInt(digits);
  long long net = exponent - scale;
  if (net >= 0) {
    return Rational(numerator * pow(Int(10), static_cast<unsigned>(net)), 1);
  }
  return Rational(numerator, pow(Int(10), static_cast<unsigned>(-net)));
}

}  // namespace

double toDouble(const Rational& x) { return x.convert_to<double>(); }

std::string formatRational(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

Rational parseRational(std::string_view text) {
  if (text.empty()) fail(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!isInteger(num) || !isInteger(den)) fail(text);
    Int d = makeInt(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(makeInt(num), d);
  }
  if (isInteger(text)) return Rational(makeInt(text));
  return parseDecimal(text);
}

}  // namespace euler
