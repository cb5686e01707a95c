#include "mmm/simulation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

using namespace mmm;

namespace {

const MmmParams kParams(0.18, 0.052, 10.0);

struct Moments {
    double mean = 0.0;
    double var = 0.0;
    double m4 = 0.0;
    std::size_t n = 0;

    [[nodiscard]] double se() const { return std::sqrt(var / static_cast<double>(n)); }
    [[nodiscard]] double var_se() const {
        return std::sqrt(std::max(m4 - var * var, 0.0) / static_cast<double>(n));
    }
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.n = xs.size();
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m.n);
    for (double x : xs) {
        const double d = x - m.mean;
        m.var += d * d;
        m.m4 += d * d * d * d;
    }
    m.var /= static_cast<double>(m.n - 1);
    m.m4 /= static_cast<double>(m.n);
    return m;
}

}  // namespace

TEST(PathGrid, Validation) {
    EXPECT_THROW(PathGrid({}), std::invalid_argument);
    EXPECT_THROW(PathGrid({0.5, 1.0}), std::invalid_argument);
    EXPECT_THROW(PathGrid({0.0, 1.0, 1.0}), std::invalid_argument);
    const auto g = PathGrid::uniform(1.0 / 12.0, 89.0);
    EXPECT_EQ(g.size(), 89u * 12u + 1u);
    EXPECT_EQ(g.back(), 89.0);
    const auto c = PathGrid::uniform(0.3, 1.0);
    EXPECT_EQ(c.size(), 5u);
    EXPECT_EQ(c.back(), 1.0);
    const auto coarse = g.coarsen(5);
    EXPECT_EQ(coarse.back(), 89.0);
    EXPECT_EQ(coarse[1], g[5]);
}

TEST(Besq4Transition, ZeroTimeChangeReturnsInput) {
    RandomStream rng(1, StreamPurpose::kMarket, 0);
    EXPECT_EQ(besq4_transition(kParams, 7.25, YearTime(3.0), YearTime(3.0), rng), 7.25);
    EXPECT_THROW((void)besq4_transition(kParams, 1.0, YearTime(2.0), YearTime(1.0), rng),
                 std::invalid_argument);
}

TEST(Besq4Transition, MeanAndInverseMeanIdentities) {
    const double nbar = 10.0;
    const YearTime t(0.0);
    const YearTime T(89.0);
    const double d_rho = rho_increment(kParams, t, T);
    RandomStream rng(2026, StreamPurpose::kMarket, 0);
    std::vector<double> draws(1'000'000);
    std::vector<double> inverse(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        draws[i] = besq4_transition(kParams, nbar, t, T, rng);
        inverse[i] = nbar / draws[i];
    }
    const auto m = moments(draws);
    EXPECT_LT(std::abs(m.mean - (nbar + 4.0 * d_rho)), 4.0 * m.se());
    const auto inv = moments(inverse);
    const double expected = discounted_minimal_zcb(kParams, nbar, t, T);
    EXPECT_LT(std::abs(inv.mean - expected), 4.0 * inv.se());
    EXPECT_GT(*std::min_element(draws.begin(), draws.end()), 0.0);
}

TEST(SimulatePath, SinglePointAndDeterminism) {
    const auto single = simulate_path(kParams, PathGrid({0.0}), 3);
    EXPECT_EQ(single.nbar, std::vector<double>{10.0});

    const auto grid = PathGrid::uniform(1.0 / 12.0, 30.0);
    const auto a = simulate_path(kParams, grid, 77, 5);
    const auto b = simulate_path(kParams, grid, 77, 5);
    const auto c = simulate_path(kParams, grid, 77, 6);
    EXPECT_EQ(a.nbar, b.nbar);
    EXPECT_NE(a.nbar, c.nbar);
    EXPECT_EQ(a.seed, 77u);
}

TEST(SimulatePath, TerminalMeanTelescopes) {
    const auto grid = PathGrid::uniform(1.0 / 12.0, 89.0);
    std::vector<double> terminal(10'000);
    parallel_for(terminal.size(), 0, [&](std::size_t p) {
        terminal[p] = simulate_path(kParams, grid, 31337, p).nbar.back();
    });
    const auto m = moments(terminal);
    const double expected = 10.0 + 4.0 * rho(kParams, YearTime(89.0));
    EXPECT_LT(std::abs(m.mean - expected), 4.0 * m.se());
}

TEST(Euler, ZeroAlphaIsConstant) {
    double x = 3.0;
    for (int i = 0; i < 100; ++i) {
        x = euler_step(0.0, x, 0.01, 0.3 * std::sin(i));
    }
    EXPECT_EQ(x, 3.0);
    EXPECT_EQ(euler_step(1.0, 1e-3, 0.0, -1.0), std::max(std::abs(1e-3 - std::sqrt(1e-3)), kEulerFloor));
    EXPECT_EQ(euler_step(0.0, 0.0, 1.0, 0.0), kEulerFloor);
}

TEST(Euler, DistributionMatchesExactSampler) {
    const auto grid = PathGrid::uniform(1.0 / 365.0, 2.0);
    constexpr std::size_t kPaths = 100'000;
    std::vector<double> exact(kPaths);
    std::vector<double> euler(kPaths);
    parallel_for(kPaths, 0, [&](std::size_t p) {
        RandomStream rng(8, StreamPurpose::kMarket, p);
        exact[p] = besq4_transition(kParams, kParams.n0(), YearTime(0.0), YearTime(2.0), rng);
        euler[p] = simulate_path_euler(kParams, grid, 8, p).nbar.back();
    });
    const auto me = moments(exact);
    const auto mu = moments(euler);
    EXPECT_LT(std::abs(me.mean - mu.mean), 3.0 * std::hypot(me.se(), mu.se()));
    EXPECT_LT(std::abs(me.var - mu.var), 3.0 * std::hypot(me.var_se(), mu.var_se()));
}

TEST(Euler, StrongErrorFallsUnderStepHalving) {
    constexpr std::size_t kFine = 1024;
    constexpr double kHorizon = 5.0;
    const auto fine = PathGrid::uniform(kHorizon / kFine, kHorizon);
    std::vector<double> errors(4, 0.0);
    constexpr std::size_t kPaths = 2000;
    for (std::size_t p = 0; p < kPaths; ++p) {
        RandomStream rng(123, StreamPurpose::kEuler, p);
        std::vector<double> dw(kFine);
        for (double& w : dw) {
            w = std::sqrt(kHorizon / kFine) * rng.normal();
        }
        const double reference = euler_path_from_increments(kParams, fine, dw).back();
        for (std::size_t level = 0; level < 4; ++level) {
            const std::size_t stride = std::size_t{64} >> level;  // 16, 32, 64, 128 steps
            std::vector<double> coarse_dw(kFine / stride, 0.0);
            for (std::size_t i = 0; i < kFine; ++i) {
                coarse_dw[i / stride] += dw[i];
            }
            const auto grid = fine.coarsen(stride);
            errors[level] += std::abs(euler_path_from_increments(kParams, grid, coarse_dw).back() -
                                      reference);
        }
    }
    for (std::size_t level = 1; level < 4; ++level) {
        EXPECT_LT(errors[level], errors[level - 1]) << "level " << level;
    }
}

TEST(Catastrophe, ZeroHazardNeverOccurs) {
    RandomStream rng(1, StreamPurpose::kCatastrophe, 0);
    EXPECT_EQ(sample_catastrophe(CatastropheModel(0.0), rng), kNever);
    EXPECT_THROW(CatastropheModel(-0.1), std::invalid_argument);
}

TEST(Catastrophe, EmpiricalDistribution) {
    const CatastropheModel model(0.05);
    RandomStream rng(55, StreamPurpose::kCatastrophe, 0);
    constexpr std::size_t kDraws = 1'000'000;
    std::vector<double> xi(kDraws);
    std::size_t hits = 0;
    for (double& x : xi) {
        x = sample_catastrophe(model, rng);
        hits += x <= 10.0 ? 1 : 0;
    }
    const double p = static_cast<double>(hits) / kDraws;
    const double expected = -std::expm1(-0.5);
    EXPECT_NEAR(expected, 0.39346934028736658, 1e-15);
    EXPECT_LT(std::abs(p - expected), 4.0 * std::sqrt(expected * (1 - expected) / kDraws));
    std::nth_element(xi.begin(), xi.begin() + kDraws / 2, xi.end());
    EXPECT_NEAR(xi[kDraws / 2], std::log(2.0) / 0.05, 0.01 * std::log(2.0) / 0.05);
}

TEST(ClaimProbability, Cases) {
    const CatastropheModel model(0.05);
    EXPECT_EQ(claim_probability(model, YearTime(3.0), YearTime(10.0), 2.0), 1.0);
    EXPECT_EQ(claim_probability(model, YearTime(3.0), YearTime(10.0), 3.0), 1.0);
    EXPECT_EQ(claim_probability(CatastropheModel(0.0), YearTime(3.0), YearTime(10.0), kNever), 0.0);
    EXPECT_NEAR(claim_probability(model, YearTime(5.0), YearTime(15.0), kNever),
                0.39346934028736658, 1e-15);
    EXPECT_EQ(claim_probability(model, YearTime(15.0), YearTime(15.0), kNever), 0.0);
}

TEST(Loading, ConstantAndZeroVol) {
    const auto grid = PathGrid::uniform(0.25, 5.0);
    for (double l : simulate_loading(LoadingSpec::constant(0.3), grid, 1)) {
        EXPECT_EQ(l, 0.3);
    }
    for (double l : simulate_loading(LoadingSpec::martingale(0.4, 0.0), grid, 1)) {
        EXPECT_EQ(l, 0.4);
    }
    EXPECT_THROW((void)LoadingSpec::constant(-0.1), std::invalid_argument);
    EXPECT_THROW((void)LoadingSpec::martingale(0.0, 0.2), std::invalid_argument);
}

TEST(Loading, MartingaleMeanPreserved) {
    const auto spec = LoadingSpec::martingale(0.3, 0.5);
    const PathGrid grid({0.0, 2.0, 5.0});
    std::vector<double> terminal(1'000'000);
    for (std::size_t p = 0; p < terminal.size(); ++p) {
        terminal[p] = simulate_loading(spec, grid, 9, p).back();
    }
    const auto m = moments(terminal);
    EXPECT_LT(std::abs(m.mean - 0.3), 4.0 * m.se());
    EXPECT_GT(*std::min_element(terminal.begin(), terminal.end()), 0.0);
}

TEST(Streams, PurposesAreDisjoint) {
    RandomStream market(5, StreamPurpose::kMarket, 0);
    RandomStream cat(5, StreamPurpose::kCatastrophe, 0);
    RandomStream loading(5, StreamPurpose::kLoading, 0);
    const double a = market.uniform();
    EXPECT_NE(a, cat.uniform());
    EXPECT_NE(a, loading.uniform());
    RandomStream sub0(5, StreamPurpose::kCatastrophe, 3, 0);
    RandomStream sub1(5, StreamPurpose::kCatastrophe, 3, 1);
    EXPECT_NE(sub0.uniform(), sub1.uniform());
}

TEST(ParallelFor, ResultsIndependentOfWorkerCount) {
    const auto grid = PathGrid::uniform(0.1, 10.0);
    auto run = [&](unsigned workers) {
        std::vector<double> out(64);
        parallel_for(out.size(), workers, [&](std::size_t p) {
            out[p] = simulate_path(kParams, grid, 17, p).nbar.back();
        });
        return out;
    };
    const auto serial = run(1);
    EXPECT_EQ(serial, run(3));
    EXPECT_EQ(serial, run(8));
}

TEST(ParallelFor, PropagatesExceptions) {
    EXPECT_THROW(parallel_for(10, 4,
                              [](std::size_t i) {
                                  if (i == 7) {
                                      throw std::runtime_error("boom");
                                  }
                              }),
                 std::runtime_error);
}

TEST(PathCsv, Header) {
    std::ostringstream out;
    write_path_csv(out, simulate_path(kParams, PathGrid({0.0, 1.0}), 1));
    EXPECT_EQ(out.str().rfind("t,nbar\n0,10\n1,", 0), 0u);
}
