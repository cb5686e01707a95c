#pragma once

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmm::csv {

/// Shortest decimal text that parses back to exactly `value`.
[[nodiscard]] std::string format_number(double value);

/// Parses a full field as a double; throws std::invalid_argument otherwise.
[[nodiscard]] double parse_number(std::string_view field);

/// Splits one line on commas. No quoting support: none of the formats here need it.
[[nodiscard]] std::vector<std::string_view> split(std::string_view line);

[[nodiscard]] std::string_view trim(std::string_view text);

void write_header(std::ostream& out, std::initializer_list<std::string_view> names);
void write_row(std::ostream& out, std::initializer_list<double> values);

/// Writes equal-length columns under `names`.
void write_columns(std::ostream& out, std::initializer_list<std::string_view> names,
                   std::initializer_list<std::span<const double>> columns);

}  // namespace mmm::csv
