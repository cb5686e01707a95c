#include "mmm/market_data.hpp"

#include "mmm/csv.hpp"
#include "mmm/errors.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mmm {

namespace {

int parse_int(std::string_view text) {
    if (text.empty()) {
        throw std::invalid_argument("empty date component");
    }
    int value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') {
            throw std::invalid_argument("non-digit in date");
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

}  // namespace

std::chrono::sys_days parse_iso_date(std::string_view text) {
    text = csv::trim(text);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    const std::chrono::year_month_day ymd{
        std::chrono::year{parse_int(text.substr(0, 4))},
        std::chrono::month{static_cast<unsigned>(parse_int(text.substr(5, 2)))},
        std::chrono::day{static_cast<unsigned>(parse_int(text.substr(8, 2)))}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
    }
    return std::chrono::sys_days{ymd};
}

RawSeries::RawSeries(std::vector<RawRow> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) {
        throw DataError("series has no rows");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& row = rows_[i];
        if (!(row.index_level > 0.0) || !std::isfinite(row.index_level)) {
            throw DataError("index level must be > 0", i + 1);
        }
        if (row.short_rate && !std::isfinite(*row.short_rate)) {
            throw DataError("short rate must be finite", i + 1);
        }
        if (i > 0 && !(rows_[i - 1].date < row.date)) {
            throw DataError("dates must be strictly increasing (duplicate or out of order)",
                            i + 1);
        }
        if (!row.short_rate) {
            rates_defaulted_ = true;
        }
    }
}

RawSeries parse_raw(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    bool has_rate = false;
    std::vector<RawRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (csv::trim(line).empty()) {
            continue;
        }
        const auto fields = csv::split(line);
        if (!have_header) {
            if (fields.size() < 2 || csv::trim(fields[0]) != "date" ||
                csv::trim(fields[1]) != "index" ||
                (fields.size() == 3 && csv::trim(fields[2]) != "rate") || fields.size() > 3) {
                throw DataError("header must be 'date,index' or 'date,index,rate'", line_no);
            }
            has_rate = fields.size() == 3;
            have_header = true;
            continue;
        }
        const std::size_t expected = has_rate ? 3 : 2;
        if (fields.size() != expected) {
            throw DataError("expected " + std::to_string(expected) + " fields, got " +
                                std::to_string(fields.size()),
                            line_no);
        }
        RawRow row;
        try {
            row.date = parse_iso_date(fields[0]);
            row.index_level = csv::parse_number(fields[1]);
            if (has_rate && !csv::trim(fields[2]).empty()) {
                row.short_rate = csv::parse_number(fields[2]);
            }
        } catch (const std::invalid_argument& e) {
            throw DataError(e.what(), line_no);
        }
        if (!rows.empty() && !(rows.back().date < row.date)) {
            throw DataError("dates must be strictly increasing (duplicate or out of order)",
                            line_no);
        }
        if (!(row.index_level > 0.0)) {
            throw DataError("index level must be > 0", line_no);
        }
        rows.push_back(row);
    }
    if (!have_header) {
        throw DataError("empty input: missing 'date,index[,rate]' header");
    }
    if (rows.empty()) {
        throw DataError("no data rows after header");
    }
    return RawSeries(std::move(rows));
}

RawSeries load_raw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    return parse_raw(in);
}

void DiscountedSeries::validate() const {
    if (t.size() != nbar.size() || t.size() != savings.size()) {
        throw DataError("discounted series columns have unequal lengths");
    }
    if (t.size() < 2) {
        throw DataError("discounted series needs at least 2 points");
    }
    if (t.front() != 0.0) {
        throw DataError("discounted series must start at t = 0");
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0 && !(t[i] > t[i - 1])) {
            throw DataError("times must be strictly increasing", i + 1);
        }
        if (!(nbar[i] > 0.0) || !(savings[i] > 0.0)) {
            throw DataError("nbar and savings must be > 0", i + 1);
        }
    }
}

DiscountedSeries build_discounted(const RawSeries& raw, std::optional<double> normalize_to) {
    if (normalize_to && !(*normalize_to > 0.0)) {
        throw std::invalid_argument("normalisation value must be > 0");
    }
    const auto& rows = raw.rows();
    DiscountedSeries out;
    out.t.reserve(rows.size());
    out.nbar.reserve(rows.size());
    out.savings.reserve(rows.size());

    const auto origin = rows.front().date;
    double savings = 1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) {
            const double dt =
                static_cast<double>((rows[i].date - rows[i - 1].date).count()) / kDaysPerYear;
            savings *= std::exp(rows[i - 1].short_rate.value_or(0.0) * dt);
        }
        out.t.push_back(static_cast<double>((rows[i].date - origin).count()) / kDaysPerYear);
        out.savings.push_back(savings);
        out.nbar.push_back(rows[i].index_level / savings);
    }
    if (normalize_to) {
        const double scale = *normalize_to / out.nbar.front();
        for (double& v : out.nbar) {
            v *= scale;
        }
        out.nbar.front() = *normalize_to;
    }
    return out;
}

QuadraticVariationCurve quadratic_variation(const std::vector<double>& t,
                                            const std::vector<double>& nbar) {
    if (t.size() != nbar.size() || t.size() < 2) {
        throw DataError("quadratic variation needs >= 2 aligned points");
    }
    QuadraticVariationCurve curve;
    curve.t = t;
    curve.qv.assign(t.size(), 0.0);
    double prev = std::sqrt(nbar.front());
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double cur = std::sqrt(nbar[i]);
        const double step = cur - prev;
        curve.qv[i] = curve.qv[i - 1] + step * step;
        prev = cur;
    }
    return curve;
}

QuadraticVariationCurve quadratic_variation(const DiscountedSeries& series) {
    return quadratic_variation(series.t, series.nbar);
}

void write_csv(std::ostream& out, const DiscountedSeries& series) {
    csv::write_columns(out, {"t", "nbar", "savings"},
                       {series.t, series.nbar, series.savings});
}

void write_csv(std::ostream& out, const QuadraticVariationCurve& curve) {
    csv::write_columns(out, {"t", "qv"}, {curve.t, curve.qv});
}

DiscountedSeries read_discounted_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    DiscountedSeries out;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) {
            continue;
        }
        const auto fields = csv::split(line);
        if (!have_header) {
            if (fields.size() != 3 || csv::trim(fields[0]) != "t" ||
                csv::trim(fields[1]) != "nbar" || csv::trim(fields[2]) != "savings") {
                throw DataError("header must be 't,nbar,savings'", line_no);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 3) {
            throw DataError("expected 3 fields", line_no);
        }
        try {
            out.t.push_back(csv::parse_number(fields[0]));
            out.nbar.push_back(csv::parse_number(fields[1]));
            out.savings.push_back(csv::parse_number(fields[2]));
        } catch (const std::invalid_argument& e) {
            throw DataError(e.what(), line_no);
        }
    }
    out.validate();
    return out;
}

}  // namespace mmm
