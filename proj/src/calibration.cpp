#include "mmm/calibration.hpp"

#include "mmm/csv.hpp"
#include "mmm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace mmm {

namespace {

double weight(const QuadraticVariationCurve& curve, std::size_t k, FitWeighting weighting) {
    if (weighting == FitWeighting::kTerminal && k + 1 == curve.t.size()) {
        return static_cast<double>(curve.t.size());
    }
    return 1.0;
}

// ρ_t / α₀ for the given η.
double shape(double eta, double t) { return std::expm1(eta * t) / (4.0 * eta); }

}  // namespace

double profile_sse(const QuadraticVariationCurve& curve, double eta, FitWeighting weighting,
                   double* alpha0_out) {
    double sgg = 0.0;
    double sqg = 0.0;
    for (std::size_t k = 0; k < curve.t.size(); ++k) {
        const double w = weight(curve, k, weighting);
        const double g = shape(eta, curve.t[k]);
        sgg += w * g * g;
        sqg += w * curve.qv[k] * g;
    }
    const double a0 = sgg > 0.0 ? sqg / sgg : 0.0;
    double sse = 0.0;
    for (std::size_t k = 0; k < curve.t.size(); ++k) {
        const double r = curve.qv[k] - a0 * shape(eta, curve.t[k]);
        sse += weight(curve, k, weighting) * r * r;
    }
    if (alpha0_out != nullptr) {
        *alpha0_out = a0;
    }
    return sse;
}

CalibrationResult fit_rho(const QuadraticVariationCurve& curve, double n0,
                          const FitOptions& options) {
    if (curve.t.size() != curve.qv.size()) {
        throw std::invalid_argument("quadratic variation curve columns differ in length");
    }
    if (curve.t.size() < 3) {
        throw std::invalid_argument("calibration needs at least 3 points");
    }
    if (!(curve.t.back() - curve.t.front() > 1.0)) {
        throw std::invalid_argument("calibration curve must span more than one year");
    }
    if (!(options.eta_lo > 0.0) || !(options.eta_hi > options.eta_lo)) {
        throw std::invalid_argument("eta bounds must satisfy 0 < lo < hi");
    }
    if (std::all_of(curve.qv.begin(), curve.qv.end(), [](double q) { return q == 0.0; })) {
        throw NumericalError("degenerate quadratic variation curve (all zeros)");
    }

    int evaluations = 0;
    auto objective = [&](double eta) {
        ++evaluations;
        return profile_sse(curve, eta, options.weighting);
    };

    // Golden-section search.
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = options.eta_lo;
    double hi = options.eta_hi;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    int iterations = 0;
    while (hi - lo > options.eta_tolerance && iterations < options.max_iterations) {
        ++iterations;
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = objective(x2);
        }
    }
    double best = f1 <= f2 ? x1 : x2;
    double best_f = std::min(f1, f2);

    // Parabolic polish through three points around the golden-section
    // minimiser; a step is kept only if it lowers the objective.
    double h = std::max(hi - lo, 1e-9 * best);
    for (int k = 0; k < 60 && h > 1e-14 * best; ++k) {
        const double a = std::max(best - h, options.eta_lo);
        const double c = std::min(best + h, options.eta_hi);
        const double fa = objective(a);
        const double fc = objective(c);
        const double num = (best - a) * (best - a) * (best_f - fc) -
                           (best - c) * (best - c) * (best_f - fa);
        const double den = (best - a) * (best_f - fc) - (best - c) * (best_f - fa);
        double candidate = best;
        if (den != 0.0) {
            candidate = std::clamp(best - 0.5 * num / den, a, c);
        }
        const double fcand = objective(candidate);
        double next = best;
        double next_f = best_f;
        for (auto [x, f] : {std::pair{a, fa}, std::pair{c, fc}, std::pair{candidate, fcand}}) {
            if (f < next_f) {
                next = x;
                next_f = f;
            }
        }
        h = next == best ? 0.25 * h : std::max(std::abs(next - best), 0.25 * h);
        best = next;
        best_f = next_f;
    }

    double a0 = 0.0;
    const double sse = profile_sse(curve, best, options.weighting, &a0);
    if (!(a0 > 0.0)) {
        throw NumericalError("fitted alpha0 is not positive; curve is not increasing");
    }

    CalibrationResult result{MmmParams(a0, best, n0), sse, iterations, evaluations, true, ""};
    const double edge = 10.0 * options.eta_tolerance;
    if (best - options.eta_lo < edge || options.eta_hi - best < edge) {
        result.converged = false;
        result.diagnostics = "eta minimiser " + csv::format_number(best) +
                             " sits on the search bound [" +
                             csv::format_number(options.eta_lo) + ", " +
                             csv::format_number(options.eta_hi) + "]";
    }
    return result;
}

void write_calibration(std::ostream& out, const CalibrationResult& result) {
    out << "alpha0=" << csv::format_number(result.params.alpha0()) << '\n'
        << "eta=" << csv::format_number(result.params.eta()) << '\n'
        << "n0=" << csv::format_number(result.params.n0()) << '\n'
        << "sse=" << csv::format_number(result.sse) << '\n'
        << "iterations=" << result.iterations << '\n'
        << "evaluations=" << result.evaluations << '\n'
        << "converged=" << (result.converged ? "true" : "false") << '\n';
    if (!result.diagnostics.empty()) {
        out << "diagnostics=" << result.diagnostics << '\n';
    }
}

MmmParams read_calibration_params(std::istream& in) {
    std::map<std::string, double, std::less<>> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        const auto key = csv::trim(std::string_view(line).substr(0, eq));
        if (key == "alpha0" || key == "eta" || key == "n0") {
            try {
                values[std::string(key)] =
                    csv::parse_number(std::string_view(line).substr(eq + 1));
            } catch (const std::invalid_argument& e) {
                throw DataError(e.what(), line_no);
            }
        }
    }
    for (const char* key : {"alpha0", "eta", "n0"}) {
        if (!values.contains(key)) {
            throw DataError(std::string("calibration file lacks '") + key + "'");
        }
    }
    return {values["alpha0"], values["eta"], values["n0"]};
}

void write_fit_csv(std::ostream& out, const QuadraticVariationCurve& curve,
                   const MmmParams& params) {
    csv::write_header(out, {"t", "qv", "rho_fit"});
    for (std::size_t k = 0; k < curve.t.size(); ++k) {
        csv::write_row(out, {curve.t[k], curve.qv[k], rho(params, YearTime(curve.t[k]))});
    }
}

}  // namespace mmm
