#include "mmm/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace mmm;

namespace {

// Reference values from tests/oracles/closed_form_oracle.py (40-digit mpmath).
constexpr double kAlpha10 = 0.30276497694579954;
constexpr double kAlpha89 = 18.415663357281048;
constexpr double kRho10 = 0.59021623531634395;
constexpr double kRho59 = 17.739399742571752;
constexpr double kRho89 = 87.671458448466577;
constexpr double kVbar89 = 0.055435310134425697;
constexpr double kRatio89 = 18.039044024018066;
constexpr double kDelta89 = 0.0053869566366389977;
constexpr double kFraction89 = 0.9717554792380717;
constexpr double kFraction1 = 0.58197670686932642;
constexpr double kNbarRatioTwo = 121.53844847826601;
constexpr double kZcbLoading03 = 0.33880471709409799;

const MmmParams kParams(0.18, 0.052, 10.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(MmmParams, RejectsNonPositiveValues) {
    EXPECT_THROW(MmmParams(0.0, 0.05, 10.0), std::invalid_argument);
    EXPECT_THROW(MmmParams(0.18, -0.05, 10.0), std::invalid_argument);
    EXPECT_THROW(MmmParams(0.18, 0.05, 0.0), std::invalid_argument);
    EXPECT_THROW(MmmParams(0.18, NAN, 1.0), std::invalid_argument);
    EXPECT_NO_THROW(MmmParams(0.18, 0.052, 10.0));
}

TEST(YearTime, RejectsNegative) {
    EXPECT_THROW(YearTime(-1e-9), std::invalid_argument);
    EXPECT_LT(YearTime(1.0), YearTime(2.0));
}

TEST(Alpha, MatchesOracle) {
    EXPECT_DOUBLE_EQ(alpha(kParams, YearTime(0.0)), 0.18);
    EXPECT_LT(rel(alpha(kParams, YearTime(10.0)), kAlpha10), 1e-14);
    EXPECT_LT(rel(alpha(kParams, YearTime(89.0)), kAlpha89), 1e-14);
}

TEST(Rho, MatchesOracle) {
    EXPECT_EQ(rho(kParams, YearTime(0.0)), 0.0);
    EXPECT_LT(rel(rho(kParams, YearTime(10.0)), kRho10), 1e-14);
    EXPECT_LT(rel(rho(kParams, YearTime(59.0)), kRho59), 1e-14);
    EXPECT_LT(rel(rho(kParams, YearTime(89.0)), kRho89), 1e-14);
}

TEST(Rho, IncreasingAndConvex) {
    double prev = rho(kParams, YearTime(0.0));
    double prev_step = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double r = rho(kParams, YearTime(0.5 * k));
        EXPECT_GT(r, prev);
        EXPECT_GT(r - prev, prev_step);
        prev_step = r - prev;
        prev = r;
    }
}

TEST(Rho, IncrementAgreesWithDifference) {
    for (double t : {0.0, 3.0, 40.0}) {
        for (double tau : {1e-3, 1.0, 30.0}) {
            const double direct = rho(kParams, YearTime(t + tau)) - rho(kParams, YearTime(t));
            EXPECT_LT(rel(rho_increment(kParams, YearTime(t), YearTime(t + tau)), direct), 1e-10);
        }
    }
}

TEST(DiscountedMinimalZcb, AnchorValue) {
    const double v = discounted_minimal_zcb(kParams, 10.0, YearTime(0.0), YearTime(89.0));
    EXPECT_LT(rel(v, kVbar89), 1e-13);
}

TEST(DiscountedMinimalZcb, BoundaryAndLimits) {
    EXPECT_EQ(discounted_minimal_zcb(kParams, 10.0, YearTime(5.0), YearTime(5.0)), 1.0);
    EXPECT_DOUBLE_EQ(discounted_minimal_zcb(kParams, 1e6, YearTime(0.0), YearTime(89.0)), 1.0);
    EXPECT_THROW((void)discounted_minimal_zcb(kParams, 10.0, YearTime(6.0), YearTime(5.0)),
                 std::invalid_argument);
    EXPECT_THROW((void)discounted_minimal_zcb(kParams, 0.0, YearTime(0.0), YearTime(5.0)),
                 std::invalid_argument);
}

TEST(DiscountedMinimalZcb, MonotoneInNbarAndTime) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const double T = 1.0 + 99.0 * unif(gen);
        const double t = T * unif(gen) * 0.99;
        const double nbar = 0.1 + 200.0 * unif(gen);
        const double v = discounted_minimal_zcb(kParams, nbar, YearTime(t), YearTime(T));
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_LE(v, discounted_minimal_zcb(kParams, nbar * 1.01, YearTime(t), YearTime(T)));
        EXPECT_LE(v, discounted_minimal_zcb(kParams, nbar, YearTime(t + 0.005 * (T - t)),
                                            YearTime(T)));
    }
}

TEST(ZcbPriceTriple, CollapsesAtLoadingZeroAndOne) {
    const auto l0 = zcb_price_triple(kParams, 10.0, 1.7, YearTime(0.0), YearTime(89.0), 0.0);
    EXPECT_EQ(l0.loading, l0.minimal);
    const auto l1 = zcb_price_triple(kParams, 10.0, 1.7, YearTime(0.0), YearTime(89.0), 1.0);
    EXPECT_EQ(l1.loading, 1.7);
    EXPECT_EQ(l1.risk_neutral, 1.7);
}

TEST(ZcbPriceTriple, AnchorTriple) {
    const auto p = zcb_price_triple(kParams, 10.0, 1.0, YearTime(0.0), YearTime(89.0), 0.3);
    EXPECT_LT(rel(p.minimal, kVbar89), 1e-13);
    EXPECT_EQ(p.risk_neutral, 1.0);
    EXPECT_LT(rel(p.loading, kZcbLoading03), 1e-13);
    EXPECT_EQ(p.loading_degree, 0.3);
}

TEST(ZcbPriceTriple, OrderingAndNegativeLoading) {
    for (double L : {0.0, 0.1, 0.5, 0.99, 1.0}) {
        const auto p = zcb_price_triple(kParams, 25.0, 1.3, YearTime(10.0), YearTime(60.0), L);
        EXPECT_LE(p.minimal, p.loading);
        EXPECT_LE(p.loading, p.risk_neutral);
    }
    EXPECT_THROW((void)zcb_price_triple(kParams, 10.0, 1.0, YearTime(0.0), YearTime(1.0), -0.1),
                 std::invalid_argument);
}

TEST(PriceRatio, EighteenTimesAnchor) {
    const double ratio = price_ratio(kParams, 10.0, YearTime(0.0), YearTime(89.0));
    EXPECT_LT(rel(ratio, kRatio89), 1e-13);
    EXPECT_NEAR(ratio, 18.04, 0.5);
}

TEST(PriceRatio, ExactlyTwoAtLogTwoPoint) {
    EXPECT_NEAR(price_ratio(kParams, kNbarRatioTwo, YearTime(0.0), YearTime(89.0)), 2.0, 1e-13);
}

TEST(PriceRatio, TendsToOneAndRejectsMaturity) {
    EXPECT_NEAR(price_ratio(kParams, 10.0, YearTime(88.9999), YearTime(89.0)), 1.0, 1e-12);
    EXPECT_THROW((void)price_ratio(kParams, 10.0, YearTime(89.0), YearTime(89.0)),
                 std::invalid_argument);
    EXPECT_GE(price_ratio(kParams, 3.0, YearTime(0.0), YearTime(200.0)), 1.0);
}

TEST(HedgeRatio, AnchorValue) {
    EXPECT_LT(rel(hedge_ratio(kParams, 10.0, YearTime(0.0), YearTime(89.0)), kDelta89), 1e-13);
}

TEST(HedgeRatio, ZeroAtMaturityAndDecaysForLargeIndex) {
    EXPECT_EQ(hedge_ratio(kParams, 10.0, YearTime(89.0), YearTime(89.0)), 0.0);
    EXPECT_LT(hedge_ratio(kParams, 1e5, YearTime(0.0), YearTime(89.0)), 1e-200);
}

// Reading α in the hedge-ratio formula as α₀ makes it the exact N̄-derivative
// of the bond price; this check pins that reading.
TEST(HedgeRatio, MatchesCentralFiniteDifference) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const double T = 1.0 + 99.0 * unif(gen);
        const double t = T * 0.95 * unif(gen);
        const double nbar = 0.5 + 100.0 * unif(gen);
        const double h = 1e-5 * nbar;
        const double fd =
            (discounted_minimal_zcb(kParams, nbar + h, YearTime(t), YearTime(T)) -
             discounted_minimal_zcb(kParams, nbar - h, YearTime(t), YearTime(T))) /
            (2.0 * h);
        const double delta = hedge_ratio(kParams, nbar, YearTime(t), YearTime(T));
        // nbar * delta = u e^{-u}; below this the bond price is 1 to machine
        // precision and the difference quotient is pure rounding.
        if (nbar * delta > 1e-4) {
            EXPECT_LT(rel(delta, fd), 1e-6) << "t=" << t << " T=" << T << " nbar=" << nbar;
        }
    }
}

TEST(HedgeFraction, OracleValues) {
    EXPECT_LT(rel(hedge_fraction(kParams, 10.0, YearTime(0.0), YearTime(89.0)), kFraction89),
              1e-13);
    EXPECT_LT(rel(fraction_from_u(1.0), kFraction1), 1e-15);
    EXPECT_NEAR(fraction_from_u(1e-12), 1.0, 1e-12);
    EXPECT_THROW((void)hedge_fraction(kParams, 10.0, YearTime(5.0), YearTime(5.0)),
                 std::invalid_argument);
}

TEST(HedgeFraction, IdentityAndMonotonicity) {
    double prev = 1.0;
    for (int k = 1; k <= 400; ++k) {
        const double u = 0.05 * k;
        const double pi = fraction_from_u(u);
        EXPECT_GT(pi, 0.0);
        EXPECT_LT(pi, 1.0);
        EXPECT_LT(pi, prev);
        EXPECT_NEAR(pi * std::expm1(u), u, 1e-12 * std::max(1.0, u));
        prev = pi;
    }
}

TEST(HedgeFraction, EqualsDeltaTimesNbarOverPrice) {
    for (double nbar : {1.0, 10.0, 80.0}) {
        const YearTime t(4.0);
        const YearTime T(50.0);
        const double pi = hedge_fraction(kParams, nbar, t, T);
        const double direct = hedge_ratio(kParams, nbar, t, T) * nbar /
                              discounted_minimal_zcb(kParams, nbar, t, T);
        EXPECT_LT(rel(pi, direct), 1e-12);
    }
}
