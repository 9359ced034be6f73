#include "eulerian/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace euler {

namespace {

int parseHeaderCount(const std::string& header, std::string_view prefix) {
  std::string_view rest = std::string_view(header).substr(prefix.size());
  int count = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), count);
  if (ec != std::errc{} || ptr != rest.data() + rest.size() || count < 1) {
    throw std::invalid_argument("bad array header '" + header + "'");
  }
  return count;
}

Rational nextRational(std::istream& in, const std::string& context) {
  std::string token;
  if (!(in >> token)) {
    throw std::invalid_argument("array input truncated while reading " + context);
  }
  return parseRational(token);
}

}  // namespace

ArrayInput readArrayInput(std::istream& in) {
  std::string header;
  while (std::getline(in, header)) {
    if (header.find_first_not_of(" \t\r") != std::string::npos) break;
    header.clear();
  }
  ArrayInput input;
  if (header.rfind("rows=", 0) == 0) {
    const int rows = parseHeaderCount(header, "rows=");
    SolutionArray array(rows);
    for (int n = 1; n <= rows; ++n) {
      for (int k = 0; k < n; ++k) {
        array.at(n, k) = nextRational(in, "row " + std::to_string(n));
      }
    }
    input.array = std::move(array);
  } else if (header.rfind("left=", 0) == 0) {
    const int rows = parseHeaderCount(header, "left=");
    LeftColumn left(rows);
    for (int n = 1; n <= rows; ++n) {
      left[n - 1] = nextRational(in, "left column entry " + std::to_string(n));
    }
    input.left = std::move(left);
  } else {
    throw std::invalid_argument("array input must start with 'rows=N' or 'left=N'");
  }
  return input;
}

ArrayInput readArrayFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return readArrayInput(in);
}

void writeArray(std::ostream& out, const SolutionArray& v) {
  out << "rows=" << v.maxRow() << "\n";
  for (int n = 1; n <= v.maxRow(); ++n) {
    for (int k = 0; k < n; ++k) {
      if (k > 0) out << ' ';
      out << formatRational(v.at(n, k));
    }
    out << "\n";
  }
}

std::string formatDecimal(double x) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  if (ec != std::errc{}) throw std::runtime_error("formatDecimal: conversion failed");
  return std::string(buffer, ptr);
}

}  // namespace euler
