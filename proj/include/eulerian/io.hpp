#pragma once

#include "eulerian/reconstruct.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace euler {

// Triangular-array file format (diffable, hand-editable):
//   rows=N
//   <row 1: 1 rational>
//   ...
//   <row N: N whitespace-separated rationals>
// Left-column files use the header "left=N" followed by N rationals, one per
// line. Rationals accept the same forms as parseRational.
struct ArrayInput {
  std::optional<SolutionArray> array;
  std::optional<LeftColumn> left;
};

ArrayInput readArrayInput(std::istream& in);
ArrayInput readArrayFile(const std::string& path);  // throws on I/O failure

void writeArray(std::ostream& out, const SolutionArray& v);

// Fixed shortest-round-trip formatting for doubles so reports are
// byte-stable across runs.
std::string formatDecimal(double x);

}  // namespace euler
