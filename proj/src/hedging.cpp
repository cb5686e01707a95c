#include "mmm/hedging.hpp"

#include "mmm/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mmm {

namespace {

void require_within_maturity(const SampledPath& path, YearTime T) {
    if (path.nbar.size() != path.grid.size()) {
        throw std::invalid_argument("path values and grid differ in length");
    }
    if (path.grid.back() > T.years()) {
        throw std::invalid_argument("hedge grid extends past maturity");
    }
}

// π_t, with the maturity limit π_T = 0.
double fraction_or_zero(const MmmParams& params, double nbar, YearTime t, YearTime T) {
    return t < T ? hedge_fraction(params, nbar, t, T) : 0.0;
}

}  // namespace

HedgeLedger backtest_minimal_zcb(const MmmParams& params, const SampledPath& path, YearTime T) {
    require_within_maturity(path, T);
    const std::size_t n = path.grid.size();
    HedgeLedger ledger;
    ledger.t = path.grid.times();
    ledger.holdings_np.resize(n);
    ledger.holdings_savings.resize(n);
    ledger.value.resize(n);
    ledger.benchmarked_pnl.resize(n);

    ledger.value[0] = discounted_minimal_zcb(params, path.nbar[0], YearTime(0.0), T);
    for (std::size_t i = 0; i < n; ++i) {
        const YearTime t(path.grid[i]);
        const double nbar = path.nbar[i];
        if (i > 0) {
            ledger.value[i] = ledger.value[i - 1] +
                              ledger.holdings_np[i - 1] * (nbar - path.nbar[i - 1]);
        }
        ledger.holdings_np[i] = hedge_ratio(params, nbar, t, T);
        ledger.holdings_savings[i] = ledger.value[i] - ledger.holdings_np[i] * nbar;
        ledger.benchmarked_pnl[i] =
            (discounted_minimal_zcb(params, nbar, t, T) - ledger.value[i]) / nbar;
    }
    return ledger;
}

HedgeLedger risk_minimize_loading(const MmmParams& params, const SampledPath& path,
                                  const CatastropheModel& model, double xi, YearTime T,
                                  std::span<const double> loading) {
    require_within_maturity(path, T);
    const std::size_t n = path.grid.size();
    if (loading.size() != n) {
        throw std::invalid_argument("loading path must align with the market grid");
    }
    for (double l : loading) {
        if (!(l >= 0.0)) {
            throw std::invalid_argument("loading degree must be >= 0");
        }
    }

    HedgeLedger ledger;
    ledger.t = path.grid.times();
    for (auto* column : {&ledger.holdings_np, &ledger.holdings_savings, &ledger.value,
                         &ledger.benchmarked_pnl, &ledger.hedge_gains,
                         &ledger.self_financing_np, &ledger.pnl_increment_form}) {
        column->resize(n);
    }

    double prev_hbar = 0.0;
    double prev_integrand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const YearTime t(path.grid[i]);
        const double nbar = path.nbar[i];
        const double shat = 1.0 / nbar;
        const double hbar = claim_probability(model, t, T, xi);
        const double vbar = discounted_minimal_zcb(params, nbar, t, T);
        const double pi = fraction_or_zero(params, nbar, t, T);
        const double lvl = loading[i];

        const double vhat_bond = vbar * shat;
        const double vhat = hbar * vhat_bond;
        const double rhat = hbar * shat;
        const double bhat = vhat + lvl * (rhat - vhat);
        const double savings_units = hbar * ((1.0 - lvl) * (vbar * (1.0 - pi)) + lvl);

        if (i == 0) {
            ledger.hedge_gains[0] = vhat;
            ledger.pnl_increment_form[0] = bhat - vhat;
        } else {
            ledger.hedge_gains[i] =
                ledger.hedge_gains[i - 1] +
                ledger.holdings_savings[i - 1] * (shat - 1.0 / path.nbar[i - 1]);
            ledger.pnl_increment_form[i] =
                ledger.pnl_increment_form[i - 1] + prev_integrand * (hbar - prev_hbar);
        }
        ledger.holdings_savings[i] = savings_units;
        ledger.self_financing_np[i] = ledger.hedge_gains[i] - savings_units * shat;
        ledger.holdings_np[i] = bhat - savings_units * shat - ledger.self_financing_np[i];
        ledger.benchmarked_pnl[i] = bhat - ledger.hedge_gains[i];
        ledger.value[i] = bhat * nbar;

        prev_hbar = hbar;
        prev_integrand = lvl * shat + (1.0 - lvl) * vhat_bond;
    }
    return ledger;
}

HedgeLedger risk_minimize_cat(const MmmParams& params, const SampledPath& path,
                              const CatastropheModel& model, double xi, YearTime T) {
    const std::vector<double> zero(path.grid.size(), 0.0);
    return risk_minimize_loading(params, path, model, xi, T, zero);
}

TerminalPnlCalculator::TerminalPnlCalculator(const MmmParams& params, const SampledPath& path,
                                             const CatastropheModel& model, YearTime T)
    : t_(path.grid.times()), maturity_(T.years()) {
    require_within_maturity(path, T);
    const std::size_t n = t_.size();
    prob_.resize(n);
    std::vector<double> term(n, 0.0);  // a_i ΔŜ_i
    for (std::size_t i = 0; i < n; ++i) {
        const YearTime t(t_[i]);
        prob_[i] = claim_probability(model, t, T, kNever);
        if (i + 1 < n) {
            const double vbar = discounted_minimal_zcb(params, path.nbar[i], t, T);
            const double pi = fraction_or_zero(params, path.nbar[i], t, T);
            term[i] = vbar * (1.0 - pi) * (1.0 / path.nbar[i + 1] - 1.0 / path.nbar[i]);
        }
    }
    prefix_prob_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix_prob_[i + 1] = prefix_prob_[i] + prob_[i] * term[i];
    }
    suffix_sure_.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        suffix_sure_[i] = suffix_sure_[i + 1] + term[i];
    }
    vhat0_ = prob_[0] * discounted_minimal_zcb(params, path.nbar[0], YearTime(t_[0]), T) /
             path.nbar[0];
    vhat_bond_terminal_ = discounted_minimal_zcb(params, path.nbar.back(), YearTime(t_.back()), T) /
                     path.nbar.back();
}

double TerminalPnlCalculator::operator()(double xi) const {
    // First grid index at which the catastrophe is known to have happened.
    const auto k = static_cast<std::size_t>(
        std::lower_bound(t_.begin(), t_.end(), xi) - t_.begin());
    if (k == 0) {
        throw std::invalid_argument("catastrophe time must be > 0");
    }
    const double hbar_terminal = k < t_.size() ? 1.0 : prob_.back();
    const double gains = prefix_prob_[k] + suffix_sure_[k];
    return hbar_terminal * vhat_bond_terminal_ - vhat0_ - gains;
}

BookResult diversify_book(const MmmParams& params, const CatastropheModel& model, std::size_t n,
                          YearTime T, const BookSettings& settings) {
    if (n == 0) {
        throw std::invalid_argument("book needs at least one contract");
    }
    if (settings.replications == 0) {
        throw std::invalid_argument("book needs at least one replication");
    }
    const PathGrid grid = PathGrid::uniform(settings.step, T.years());
    BookResult result;
    result.n_contracts = n;
    result.replication_averages.assign(settings.replications, 0.0);

    parallel_for(settings.replications, settings.workers, [&](std::size_t r) {
        const SampledPath path = simulate_path(params, grid, settings.seed, r);
        const TerminalPnlCalculator pnl(params, path, model, T);
        RandomStream rng(settings.seed, StreamPurpose::kCatastrophe, r);
        double sum = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            sum += pnl(sample_catastrophe(model, rng));
        }
        result.replication_averages[r] = sum / static_cast<double>(n);
    });

    double sum = 0.0;
    double sum_sq = 0.0;
    for (double avg : result.replication_averages) {
        sum += avg;
        sum_sq += avg * avg;
    }
    const auto reps = static_cast<double>(settings.replications);
    result.avg_benchmarked_pnl_terminal = sum / reps;
    result.rms_across_seeds = std::sqrt(sum_sq / reps);
    return result;
}

void write_ledger_csv(std::ostream& out, const HedgeLedger& ledger) {
    csv::write_columns(out, {"t", "delta_np", "delta_savings", "value", "benchmarked_pnl"},
                       {ledger.t, ledger.holdings_np, ledger.holdings_savings, ledger.value,
                        ledger.benchmarked_pnl});
}

}  // namespace mmm
