#pragma once

#include "mmm/model.hpp"

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mmm {

struct RawRow {
    std::chrono::sys_days date;
    double index_level = 0.0;
    std::optional<double> short_rate;  // annualised, continuously compounded
};

/// Validated index and short-rate observations: dates strictly increasing,
/// index levels > 0.
class RawSeries {
public:
    /// Throws DataError (with the 1-based data row) on a violated invariant.
    explicit RawSeries(std::vector<RawRow> rows);

    [[nodiscard]] const std::vector<RawRow>& rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }

    /// True when at least one row had no short rate and 0 was substituted.
    [[nodiscard]] bool rates_defaulted() const noexcept { return rates_defaulted_; }

private:
    std::vector<RawRow> rows_;
    bool rates_defaulted_ = false;
};

/// Discounted numeraire-portfolio values N̄_t = N_t / S¹_t on year-fraction
/// times measured from the first observation.
struct DiscountedSeries {
    std::vector<double> t;
    std::vector<double> nbar;
    std::vector<double> savings;

    /// Throws DataError unless lengths agree, size >= 2, t is strictly
    /// increasing from 0 and all values are positive.
    void validate() const;
};

/// Running realised quadratic variation of sqrt(N̄).
struct QuadraticVariationCurve {
    std::vector<double> t;
    std::vector<double> qv;
};

/// Parses `YYYY-MM-DD`. Throws std::invalid_argument.
[[nodiscard]] std::chrono::sys_days parse_iso_date(std::string_view text);

/// Reads the `date,index[,rate]` CSV format. Throws DataError naming the
/// offending line.
[[nodiscard]] RawSeries parse_raw(std::istream& in);
[[nodiscard]] RawSeries load_raw(const std::filesystem::path& path);

/// Builds the savings account (S¹_0 = 1, piecewise exponential with the
/// rate observed at the start of each interval) and N̄ = index / S¹, on
/// ACT/365.25 year fractions. With `normalize_to`, N̄ is rescaled so that
/// N̄_0 equals it exactly.
[[nodiscard]] DiscountedSeries build_discounted(const RawSeries& raw,
                                                std::optional<double> normalize_to);

/// qv[k] = Σ_{i<k} (sqrt(N̄_{i+1}) − sqrt(N̄_i))².
[[nodiscard]] QuadraticVariationCurve quadratic_variation(const DiscountedSeries& series);

/// Same as above for a bare time/value pair (used on simulated paths).
[[nodiscard]] QuadraticVariationCurve quadratic_variation(const std::vector<double>& t,
                                                          const std::vector<double>& nbar);

void write_csv(std::ostream& out, const DiscountedSeries& series);
void write_csv(std::ostream& out, const QuadraticVariationCurve& curve);

/// Reads back the `t,nbar,savings` format produced by write_csv.
[[nodiscard]] DiscountedSeries read_discounted_csv(std::istream& in);

inline constexpr double kDaysPerYear = 365.25;

}  // namespace mmm
