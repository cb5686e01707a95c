#pragma once

#include <compare>

namespace mmm {

/// Time in years since the reference epoch of a series. Never negative.
class YearTime {
public:
    constexpr YearTime() = default;
    explicit YearTime(double years);

    [[nodiscard]] constexpr double years() const noexcept { return years_; }

    friend constexpr auto operator<=>(YearTime, YearTime) = default;

private:
    double years_ = 0.0;
};

/// Parameters of the minimal market model for the discounted numeraire
/// portfolio:
///
///   dN̄_t = α_t dt + sqrt(α_t N̄_t) dW_t,   α_t = α₀ exp(η t),   N̄_0 = n0.
class MmmParams {
public:
    /// Throws std::invalid_argument unless all three values are finite and > 0.
    MmmParams(double alpha0, double eta, double n0);

    [[nodiscard]] double alpha0() const noexcept { return alpha0_; }
    [[nodiscard]] double eta() const noexcept { return eta_; }
    [[nodiscard]] double n0() const noexcept { return n0_; }

    [[nodiscard]] MmmParams with_n0(double n0) const { return {alpha0_, eta_, n0}; }

    friend bool operator==(const MmmParams&, const MmmParams&) = default;

private:
    double alpha0_;
    double eta_;
    double n0_;
};

/// Minimal, formally risk-neutral and loading price of one claim, in the
/// currency units of the valuation date.
struct PriceTriple {
    double minimal = 0.0;
    double risk_neutral = 0.0;
    double loading = 0.0;
    double loading_degree = 0.0;
};

/// α_t = α₀ exp(η t).
[[nodiscard]] double alpha(const MmmParams& params, YearTime t);

/// Time change ρ_t = α₀/(4η) (exp(η t) − 1). Also the quadratic variation
/// of sqrt(N̄) up to t.
[[nodiscard]] double rho(const MmmParams& params, YearTime t);

/// ρ_T − ρ_t, computed without cancellation for short horizons.
[[nodiscard]] double rho_increment(const MmmParams& params, YearTime t, YearTime T);

/// Savings-account discounted minimal zero-coupon bond price
/// 1 − exp(−N̄_t / (2(ρ_T − ρ_t))). Returns 1 at t == T.
/// Throws std::invalid_argument if t > T or nbar_t <= 0.
[[nodiscard]] double discounted_minimal_zcb(const MmmParams& params, double nbar_t,
                                            YearTime t, YearTime T);

/// Zero-coupon bond paying one savings-account unit at T. The risk-neutral
/// leg is the savings account itself. Rejects negative loading degrees.
[[nodiscard]] PriceTriple zcb_price_triple(const MmmParams& params, double nbar_t,
                                           double savings_t, YearTime t, YearTime T,
                                           double loading);

/// Risk-neutral over minimal price, 1 / discounted_minimal_zcb. Identical
/// for every claim whose discounted payoff is independent of the
/// benchmarked savings account. Requires t < T.
[[nodiscard]] double price_ratio(const MmmParams& params, double nbar_t, YearTime t,
                                 YearTime T);

/// Units of discounted NP held by the minimal bond hedge:
/// ∂V̄/∂N̄ = exp(−u) / (2(ρ_T − ρ_t)), u = N̄_t/(2(ρ_T − ρ_t)). Zero at t == T.
[[nodiscard]] double hedge_ratio(const MmmParams& params, double nbar_t, YearTime t,
                                 YearTime T);

/// Fraction of hedge wealth held in the NP, u / (e^u − 1). Requires t < T.
[[nodiscard]] double hedge_fraction(const MmmParams& params, double nbar_t, YearTime t,
                                    YearTime T);

/// u / (e^u − 1) with the u → 0 limit handled.
[[nodiscard]] double fraction_from_u(double u) noexcept;

}  // namespace mmm
