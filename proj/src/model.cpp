#include "mmm/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmm {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw std::invalid_argument(std::string(name) + " must be finite and > 0, got " +
                                    std::to_string(value));
    }
}

void require_ordered(YearTime t, YearTime T) {
    if (t > T) {
        throw std::invalid_argument("valuation time " + std::to_string(t.years()) +
                                    " is after maturity " + std::to_string(T.years()));
    }
}

double scaled_u(const MmmParams& params, double nbar_t, YearTime t, YearTime T) {
    return nbar_t / (2.0 * rho_increment(params, t, T));
}

}  // namespace

YearTime::YearTime(double years) : years_(years) {
    if (!(years >= 0.0)) {
        throw std::invalid_argument("year time must be >= 0, got " + std::to_string(years));
    }
}

MmmParams::MmmParams(double alpha0, double eta, double n0)
    : alpha0_(alpha0), eta_(eta), n0_(n0) {
    require_positive(alpha0, "alpha0");
    require_positive(eta, "eta");
    require_positive(n0, "n0");
}

double alpha(const MmmParams& params, YearTime t) {
    return params.alpha0() * std::exp(params.eta() * t.years());
}

double rho(const MmmParams& params, YearTime t) {
    return params.alpha0() / (4.0 * params.eta()) * std::expm1(params.eta() * t.years());
}

double rho_increment(const MmmParams& params, YearTime t, YearTime T) {
    // e^{ηT} − e^{ηt} = e^{ηt}(e^{η(T−t)} − 1)
    const double eta = params.eta();
    return params.alpha0() / (4.0 * eta) * std::exp(eta * t.years()) *
           std::expm1(eta * (T.years() - t.years()));
}

double discounted_minimal_zcb(const MmmParams& params, double nbar_t, YearTime t,
                              YearTime T) {
    require_positive(nbar_t, "nbar_t");
    require_ordered(t, T);
    if (t == T) {
        return 1.0;
    }
    return -std::expm1(-scaled_u(params, nbar_t, t, T));
}

PriceTriple zcb_price_triple(const MmmParams& params, double nbar_t, double savings_t,
                             YearTime t, YearTime T, double loading) {
    require_positive(savings_t, "savings_t");
    if (!(loading >= 0.0)) {
        throw std::invalid_argument("loading degree must be >= 0");
    }
    PriceTriple out;
    out.minimal = savings_t * discounted_minimal_zcb(params, nbar_t, t, T);
    out.risk_neutral = savings_t;
    out.loading = out.minimal + loading * (out.risk_neutral - out.minimal);
    out.loading_degree = loading;
    return out;
}

double price_ratio(const MmmParams& params, double nbar_t, YearTime t, YearTime T) {
    if (!(t < T)) {
        throw std::invalid_argument("price_ratio requires t < T");
    }
    return 1.0 / discounted_minimal_zcb(params, nbar_t, t, T);
}

double hedge_ratio(const MmmParams& params, double nbar_t, YearTime t, YearTime T) {
    require_positive(nbar_t, "nbar_t");
    require_ordered(t, T);
    if (t == T) {
        return 0.0;
    }
    const double d_rho = rho_increment(params, t, T);
    return std::exp(-nbar_t / (2.0 * d_rho)) / (2.0 * d_rho);
}

double fraction_from_u(double u) noexcept {
    if (u < 1e-8) {
        return 1.0 - 0.5 * u;
    }
    return u / std::expm1(u);
}

double hedge_fraction(const MmmParams& params, double nbar_t, YearTime t, YearTime T) {
    require_positive(nbar_t, "nbar_t");
    if (!(t < T)) {
        throw std::invalid_argument("hedge_fraction requires t < T");
    }
    return fraction_from_u(scaled_u(params, nbar_t, t, T));
}

}  // namespace mmm
