#include "mmm/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mmm::csv {

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), result.ptr};
}

double parse_number(std::string_view field) {
    field = trim(field);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto result = std::from_chars(field.data(), end, value);
    if (field.empty() || result.ec != std::errc{} || result.ptr != end) {
        throw std::invalid_argument("not a number: '" + std::string(field) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = text.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(ws);
    return text.substr(first, last - first + 1);
}

void write_header(std::ostream& out, std::initializer_list<std::string_view> names) {
    bool first = true;
    for (auto name : names) {
        out << (first ? "" : ",") << name;
        first = false;
    }
    out << '\n';
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        out << (first ? "" : ",") << format_number(v);
        first = false;
    }
    out << '\n';
}

void write_columns(std::ostream& out, std::initializer_list<std::string_view> names,
                   std::initializer_list<std::span<const double>> columns) {
    if (names.size() != columns.size()) {
        throw std::invalid_argument("column/header count mismatch");
    }
    const std::size_t rows = columns.size() == 0 ? 0 : columns.begin()->size();
    for (const auto& col : columns) {
        if (col.size() != rows) {
            throw std::invalid_argument("columns have unequal lengths");
        }
    }
    write_header(out, names);
    for (std::size_t r = 0; r < rows; ++r) {
        bool first = true;
        for (const auto& col : columns) {
            out << (first ? "" : ",") << format_number(col[r]);
            first = false;
        }
        out << '\n';
    }
}

}  // namespace mmm::csv
