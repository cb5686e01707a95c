#pragma once

#include "mmm/market_data.hpp"
#include "mmm/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

namespace mmm {

enum class FitWeighting {
    kEqual,
    /// Terminal point weighted by the number of points, all others by 1.
    kTerminal,
};

struct FitOptions {
    double eta_lo = 1e-4;
    double eta_hi = 0.5;
    FitWeighting weighting = FitWeighting::kEqual;
    int max_iterations = 200;
    double eta_tolerance = 1e-7;
};

struct CalibrationResult {
    MmmParams params;
    double sse = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string diagnostics;
};

/// Profiled residual sum of squares for fixed η: α₀ is eliminated in
/// closed form. Returns the optimal α₀ through `alpha0_out` when non-null.
[[nodiscard]] double profile_sse(const QuadraticVariationCurve& curve, double eta,
                                 FitWeighting weighting, double* alpha0_out = nullptr);

/// Least-squares fit of ρ_t = α₀ (e^{ηt} − 1)/(4η) to a realised quadratic
/// variation curve. α₀ is solved exactly for each η; η is located by
/// golden-section search over [eta_lo, eta_hi] and polished by safeguarded
/// parabolic steps. `n0` is carried into the returned parameters.
///
/// Throws std::invalid_argument for fewer than 3 points, a span of at most
/// one year or bad bounds, and NumericalError for a degenerate (all-zero)
/// curve. A minimiser on a bound is returned with converged = false.
[[nodiscard]] CalibrationResult fit_rho(const QuadraticVariationCurve& curve, double n0,
                                        const FitOptions& options = {});

/// `key=value` lines: alpha0, eta, n0, sse, iterations, evaluations, converged.
void write_calibration(std::ostream& out, const CalibrationResult& result);

/// Inverse of write_calibration (only the parameter keys are required).
[[nodiscard]] MmmParams read_calibration_params(std::istream& in);

/// `t,qv,rho_fit` rows for plotting the fit.
void write_fit_csv(std::ostream& out, const QuadraticVariationCurve& curve,
                   const MmmParams& params);

}  // namespace mmm
