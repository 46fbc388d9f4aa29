#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace smoothstop::csv {

/// Shortest decimal string that round-trips to the same double (at most 17
/// significant digits). Non-finite values print as `nan`, `inf`, `-inf`.
std::string format(double x);

/// Parses a full field as a double; throws ParseError on trailing garbage.
double parse_double(std::string_view field, std::string_view context);
long long parse_integer(std::string_view field, std::string_view context);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

/// Reads a two-column `index,<value_name>` file with contiguous indices
/// starting at 1. Throws ParseError on a wrong header, malformed rows or gaps.
std::vector<double> read_indexed_column(const std::filesystem::path& path,
                                        std::string_view value_name);

void write_indexed_column(const std::filesystem::path& path,
                          std::string_view value_name,
                          const std::vector<double>& values);

}  // namespace smoothstop::csv
