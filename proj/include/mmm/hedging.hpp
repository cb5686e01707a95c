#pragma once

#include "mmm/model.hpp"
#include "mmm/simulation.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace mmm {

/// Holdings, value and benchmarked profit-and-loss of a hedge on a path
/// grid. All amounts are in savings-account discounted units (S¹ = 1), so
/// the discounted NP N̄ is also the NP value and Ŝ¹ = 1/N̄.
///
/// Holdings at index i are chosen at grid time i and held over (t_i, t_{i+1}].
struct HedgeLedger {
    std::vector<double> t;
    /// Units of the NP: δ for the bond backtest, δ* (NP units on top of the
    /// self-financing part) for the risk-minimisation ledgers.
    std::vector<double> holdings_np;
    /// Units of the savings account.
    std::vector<double> holdings_savings;
    /// Portfolio (bond backtest) or claim price process (risk minimisation).
    std::vector<double> value;
    /// Ĉ_t.
    std::vector<double> benchmarked_pnl;

    /// Benchmarked value of the self-financing savings-account hedge,
    /// G_{i+1} = G_i + δ¹_i (Ŝ¹_{i+1} − Ŝ¹_i). Empty for the bond backtest.
    std::vector<double> hedge_gains;
    /// NP units of that self-financing part. Empty for the bond backtest.
    std::vector<double> self_financing_np;
    /// Σ_{j<i} V̂(t_j) (H̄_{j+1} − H̄_j): the increment form of Ĉ, which
    /// agrees with benchmarked_pnl as the grid is refined. Empty for the
    /// bond backtest.
    std::vector<double> pnl_increment_form;

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
};

/// Monthly/daily rebalanced self-financing hedge of the minimal zero-coupon
/// bond paying one savings-account unit at T. Starts from V̄(0), holds
/// δ_t = ∂V̄/∂N̄ units of the NP and the rest in the savings account, and rolls
/// value_{i+1} = value_i + δ_i (N̄_{i+1} − N̄_i). benchmarked_pnl is
/// (V̄(t) − value)/N̄. Throws std::invalid_argument if the grid runs past T.
[[nodiscard]] HedgeLedger backtest_minimal_zcb(const MmmParams& params,
                                               const SampledPath& path, YearTime T);

/// Benchmarked risk minimisation of the occurrence CAT bond with
/// catastrophe time `xi` on the given market path. Savings units
/// δ¹ = H̄ V̄ (1 − π); Ĉ_t = V̂(t) − Σ δ¹ ΔŜ¹ − V̂(0).
[[nodiscard]] HedgeLedger risk_minimize_cat(const MmmParams& params, const SampledPath& path,
                                            const CatastropheModel& model, double xi,
                                            YearTime T);

/// Loading risk minimisation with a loading-degree path aligned to the
/// grid. Savings units δ^{L,1} = H̄((1 − L)V̄(1 − π) + L); the claim is sold
/// at the loading price, so Ĉ_0 = B̂(0) − V̂(0).
[[nodiscard]] HedgeLedger risk_minimize_loading(const MmmParams& params,
                                                const SampledPath& path,
                                                const CatastropheModel& model, double xi,
                                                YearTime T, std::span<const double> loading);

struct BookSettings {
    double step = 1.0 / 12.0;
    std::size_t replications = 50;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

struct BookResult {
    std::size_t n_contracts = 0;
    /// Mean over replications of the book-average terminal Ĉ.
    double avg_benchmarked_pnl_terminal = 0.0;
    /// Root mean square over replications of the book-average terminal Ĉ.
    double rms_across_seeds = 0.0;
    /// Book-average terminal Ĉ per replication.
    std::vector<double> replication_averages;
};

/// n contracts with independent catastrophe times on one shared market path
/// per replication; each replication uses its own market substream.
[[nodiscard]] BookResult diversify_book(const MmmParams& params, const CatastropheModel& model,
                                        std::size_t n, YearTime T,
                                        const BookSettings& settings);

/// Terminal Ĉ of one contract on a precomputed market path. Exposed so the
/// fast book computation can be checked against full ledgers.
class TerminalPnlCalculator {
public:
    TerminalPnlCalculator(const MmmParams& params, const SampledPath& path,
                          const CatastropheModel& model, YearTime T);

    [[nodiscard]] double operator()(double xi) const;

private:
    std::vector<double> t_;
    std::vector<double> prob_;          // H̄_i given no catastrophe by t_i
    std::vector<double> prefix_prob_;   // Σ_{j<i} p_j a_j ΔŜ_j
    std::vector<double> suffix_sure_;   // Σ_{j>=i} a_j ΔŜ_j
    double vhat0_ = 0.0;
    double vhat_bond_terminal_ = 0.0;
    double maturity_ = 0.0;
};

/// `t,delta_np,delta_savings,value,benchmarked_pnl` rows.
void write_ledger_csv(std::ostream& out, const HedgeLedger& ledger);

}  // namespace mmm
