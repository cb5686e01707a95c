#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmm {

/// Malformed or invalid input data. `row` is the 1-based line number in the
/// source file, or 0 when the problem is not tied to a row.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, std::size_t row = 0)
        : std::runtime_error(row == 0 ? what : "row " + std::to_string(row) + ": " + what),
          row_(row) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A numerical procedure failed to produce a usable answer.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mmm
