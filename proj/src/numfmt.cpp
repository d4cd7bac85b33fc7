// SPDX-License-Identifier: Apache-2.0

#include "exitlab/numfmt.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "exitlab/errors.hpp"

namespace exitlab {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw NumericalError("format_double: conversion failed");
  }
  return std::string(buf, ptr);
}

std::string format_u64(std::uint64_t value) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_i64(std::int64_t value) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_bool(bool value) { return value ? "true" : "false"; }

double parse_double(const std::string& text, const std::string& what) {
  if (text.empty()) {
    throw ConfigError(what + ": empty value");
  }
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(what + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  if (text.empty()) {
    throw ConfigError(what + ": empty value");
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(what + ": cannot parse '" + text + "' as a nonnegative integer");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(what + ": cannot parse '" + text + "' as a boolean (true/false)");
}

}  // namespace exitlab
