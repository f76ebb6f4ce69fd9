#pragma once

// Internal CSV plumbing shared by the readers. The formats here have no
// quoting or embedded commas, so a plain split is all that is needed.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mlsim::detail {

/// Splits on ',' and trims surrounding whitespace (and a trailing '\r').
std::vector<std::string> split_csv(const std::string& line);

/// Next content row: skips blank lines and '#' comments, bumps `lineno`.
bool next_row(std::istream& in, std::string& line, std::size_t& lineno);

std::int64_t parse_i64(const std::string& s, const std::string& file, std::size_t line,
                       const char* what);
double parse_f64(const std::string& s, const std::string& file, std::size_t line,
                 const char* what);

} // namespace mlsim::detail
