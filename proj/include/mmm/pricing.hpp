#pragma once

#include "mmm/model.hpp"
#include "mmm/simulation.hpp"

#include <iosfwd>
#include <optional>
#include <span>

namespace mmm {

enum class PayoffConvention {
    /// Pays one savings-account unit at T if the catastrophe occurred by T.
    kOccurrence,
    /// Pays one savings-account unit at T if no catastrophe occurred by T.
    kPrincipalProtected,
};

/// A zero-coupon bond or a stylised CAT bond, both paying one unit of the
/// savings account at a fixed maturity.
class ClaimSpec {
public:
    enum class Kind { kZeroCoupon, kCatBond };

    /// Throws std::invalid_argument unless maturity > 0.
    [[nodiscard]] static ClaimSpec zero_coupon(YearTime maturity);
    [[nodiscard]] static ClaimSpec cat_bond(YearTime maturity, CatastropheModel model,
                                            PayoffConvention convention =
                                                PayoffConvention::kOccurrence);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] YearTime maturity() const noexcept { return maturity_; }
    [[nodiscard]] const CatastropheModel& catastrophe() const noexcept { return model_; }
    [[nodiscard]] PayoffConvention convention() const noexcept { return convention_; }

private:
    ClaimSpec(Kind kind, YearTime maturity, CatastropheModel model, PayoffConvention convention);

    Kind kind_;
    YearTime maturity_;
    CatastropheModel model_;
    PayoffConvention convention_;
};

/// Everything the closed forms need at a valuation date.
struct MarketState {
    YearTime t;
    double nbar_t = 0.0;
    double savings_t = 1.0;
    /// Catastrophe time if it has already happened, otherwise empty.
    std::optional<double> catastrophe_time;
};

/// Weight multiplying the bond prices: 1 for a zero-coupon bond, H̄_t or
/// 1 − H̄_t for a CAT bond depending on the payoff convention.
[[nodiscard]] double payoff_weight(const ClaimSpec& claim, const MarketState& state);

/// Minimal, risk-neutral and loading prices. B is formed as L·R + (1−L)·V.
/// Throws std::invalid_argument for L < 0, t > T or a non-positive state.
[[nodiscard]] PriceTriple price(const MmmParams& params, const MarketState& state,
                                const ClaimSpec& claim, double loading);

/// Direct loading price of a CAT bond, H̄ S¹ (1 − (1 − L) exp(−N̄/(2Δρ))),
/// with H̄ replaced by the convention's weight.
[[nodiscard]] double cat_loading_price(const MmmParams& params, const MarketState& state,
                                       const ClaimSpec& claim, double loading);

/// Loading degree implied by an observed loading price: (B − V)/(R − V),
/// and 1 when R == V. Throws std::invalid_argument if V > R or B < V.
[[nodiscard]] double extract_loading(double observed, double minimal, double risk_neutral);

/// Price in units of the numeraire portfolio, and back.
[[nodiscard]] inline double benchmark(double price, double np_value) { return price / np_value; }
[[nodiscard]] inline double unbenchmark(double benchmarked, double np_value) {
    return benchmarked * np_value;
}

struct Quote {
    double t = 0.0;
    PriceTriple prices;
};

/// `t,V,R,B,L` rows.
void write_quotes_csv(std::ostream& out, std::span<const Quote> quotes);

}  // namespace mmm
