#include "mmm/pricing.hpp"

#include "mmm/csv.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mmm {

ClaimSpec::ClaimSpec(Kind kind, YearTime maturity, CatastropheModel model,
                     PayoffConvention convention)
    : kind_(kind), maturity_(maturity), model_(model), convention_(convention) {
    if (!(maturity.years() > 0.0)) {
        throw std::invalid_argument("claim maturity must be > 0");
    }
}

ClaimSpec ClaimSpec::zero_coupon(YearTime maturity) {
    return {Kind::kZeroCoupon, maturity, CatastropheModel(0.0), PayoffConvention::kOccurrence};
}

ClaimSpec ClaimSpec::cat_bond(YearTime maturity, CatastropheModel model,
                              PayoffConvention convention) {
    return {Kind::kCatBond, maturity, model, convention};
}

double payoff_weight(const ClaimSpec& claim, const MarketState& state) {
    if (claim.kind() == ClaimSpec::Kind::kZeroCoupon) {
        return 1.0;
    }
    const double xi = state.catastrophe_time.value_or(kNever);
    const double occurred = claim_probability(claim.catastrophe(), state.t, claim.maturity(), xi);
    return claim.convention() == PayoffConvention::kOccurrence ? occurred : 1.0 - occurred;
}

namespace {

void validate(const MarketState& state, const ClaimSpec& claim, double loading) {
    if (!(loading >= 0.0) || !std::isfinite(loading)) {
        throw std::invalid_argument("loading degree must be finite and >= 0");
    }
    if (state.t > claim.maturity()) {
        throw std::invalid_argument("valuation time is after maturity");
    }
    if (!(state.savings_t > 0.0)) {
        throw std::invalid_argument("savings account value must be > 0");
    }
    if (state.catastrophe_time && *state.catastrophe_time > state.t.years()) {
        throw std::invalid_argument("recorded catastrophe time lies after the valuation time");
    }
}

}  // namespace

PriceTriple price(const MmmParams& params, const MarketState& state, const ClaimSpec& claim,
                  double loading) {
    validate(state, claim, loading);
    const double vbar = discounted_minimal_zcb(params, state.nbar_t, state.t, claim.maturity());
    const double weight = payoff_weight(claim, state);

    PriceTriple out;
    out.risk_neutral = weight * state.savings_t;
    out.minimal = out.risk_neutral * vbar;
    // Same as L·R + (1 − L)·V, written so that V ≤ B holds after rounding.
    out.loading = out.minimal + loading * (out.risk_neutral - out.minimal);
    out.loading_degree = loading;
    return out;
}

double cat_loading_price(const MmmParams& params, const MarketState& state,
                         const ClaimSpec& claim, double loading) {
    validate(state, claim, loading);
    // exp(−N̄/(2Δρ)) = 1 − V̄, which is 0 at maturity.
    const double decay =
        1.0 - discounted_minimal_zcb(params, state.nbar_t, state.t, claim.maturity());
    return payoff_weight(claim, state) * state.savings_t * (1.0 - (1.0 - loading) * decay);
}

double extract_loading(double observed, double minimal, double risk_neutral) {
    if (minimal > risk_neutral) {
        throw std::invalid_argument("minimal price exceeds risk-neutral price");
    }
    if (observed < minimal) {
        throw std::invalid_argument("observed price is below the minimal price");
    }
    if (risk_neutral == minimal) {
        return 1.0;
    }
    return (observed - minimal) / (risk_neutral - minimal);
}

void write_quotes_csv(std::ostream& out, std::span<const Quote> quotes) {
    csv::write_header(out, {"t", "V", "R", "B", "L"});
    for (const auto& q : quotes) {
        csv::write_row(out, {q.t, q.prices.minimal, q.prices.risk_neutral, q.prices.loading,
                             q.prices.loading_degree});
    }
}

}  // namespace mmm
