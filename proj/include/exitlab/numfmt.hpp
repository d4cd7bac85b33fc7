// SPDX-License-Identifier: Apache-2.0
// Deterministic number formatting for CSV/SVG/manifest output.
#pragma once

#include <cstdint>
#include <string>

namespace exitlab {

//! Shortest decimal string that round-trips to exactly the same double.
//! Byte-determinism of every output file rests on this.
std::string format_double(double value);

std::string format_u64(std::uint64_t value);
std::string format_i64(std::int64_t value);
std::string format_bool(bool value);

//! Strict full-string parsers: reject trailing junk, empty strings.
double parse_double(const std::string& text, const std::string& what);
std::uint64_t parse_u64(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

}  // namespace exitlab
