#include "mmm/cli.hpp"

#include "mmm/calibration.hpp"
#include "mmm/csv.hpp"
#include "mmm/errors.hpp"
#include "mmm/hedging.hpp"
#include "mmm/market_data.hpp"
#include "mmm/pricing.hpp"
#include "mmm/simulation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mmm::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out);
    std::ofstream file(cfg.out / name, std::ios::binary);
    if (!file) {
        throw DataError("cannot write '" + (cfg.out / name).string() + "'");
    }
    return file;
}

std::string numbered(const std::string& stem, std::size_t index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 4) {
        digits.insert(0, 4 - digits.size(), '0');
    }
    return stem + "_" + digits + ".csv";
}

DiscountedSeries load_series(const RunConfig& cfg, std::ostream& err) {
    const RawSeries raw = load_raw(cfg.data);
    if (raw.rates_defaulted()) {
        err << "mmm: warning: short rate missing on some rows; 0 substituted\n";
    }
    std::optional<double> normalize;
    if (cfg.normalize > 0.0) {
        normalize = cfg.normalize;
    }
    DiscountedSeries series = build_discounted(raw, normalize);
    series.validate();
    return series;
}

FitOptions fit_options(const RunConfig& cfg) {
    FitOptions options;
    options.eta_lo = cfg.eta_lo;
    options.eta_hi = cfg.eta_hi;
    if (cfg.weighting == "equal") {
        options.weighting = FitWeighting::kEqual;
    } else if (cfg.weighting == "terminal") {
        options.weighting = FitWeighting::kTerminal;
    } else {
        throw UsageError("weighting must be 'equal' or 'terminal'");
    }
    return options;
}

MmmParams resolve_params(const RunConfig& cfg, std::ostream& err) {
    if (!cfg.params.empty()) {
        if (cfg.params.size() != 3) {
            throw UsageError("--params expects alpha0,eta,n0");
        }
        return {cfg.params[0], cfg.params[1], cfg.params[2]};
    }
    if (cfg.calibration) {
        std::ifstream in(*cfg.calibration);
        if (!in) {
            throw DataError("cannot open '" + cfg.calibration->string() + "'");
        }
        return read_calibration_params(in);
    }
    if (!cfg.data.empty()) {
        const auto series = load_series(cfg, err);
        const auto result = fit_rho(quadratic_variation(series), series.nbar.front(),
                                    fit_options(cfg));
        if (!result.converged) {
            throw NumericalError(result.diagnostics);
        }
        return result.params;
    }
    throw UsageError("model parameters needed: pass --params, --calibration or --data");
}

// Market path for figures and hedging: the data series when given,
// otherwise an exact simulation with the configured grid.
SampledPath market_path(const RunConfig& cfg, const MmmParams& params, std::ostream& err,
                        std::size_t path_index = 0) {
    if (!cfg.data.empty()) {
        const auto series = load_series(cfg, err);
        return {PathGrid(series.t), series.nbar, 0};
    }
    return simulate_path(params, PathGrid::uniform(cfg.step, cfg.horizon), cfg.seed,
                         path_index);
}

// Drops grid points after T.
SampledPath truncate(const SampledPath& path, double T) {
    std::vector<double> times;
    std::vector<double> values;
    for (std::size_t i = 0; i < path.grid.size() && path.grid[i] <= T; ++i) {
        times.push_back(path.grid[i]);
        values.push_back(path.nbar[i]);
    }
    return {PathGrid(std::move(times)), std::move(values), path.seed};
}

ClaimSpec claim_from(const RunConfig& cfg, double T) {
    if (cfg.claim == "zcb") {
        return ClaimSpec::zero_coupon(YearTime(T));
    }
    if (cfg.claim == "cat") {
        PayoffConvention convention;
        if (cfg.convention == "occurrence") {
            convention = PayoffConvention::kOccurrence;
        } else if (cfg.convention == "principal_protected") {
            convention = PayoffConvention::kPrincipalProtected;
        } else {
            throw UsageError("convention must be 'occurrence' or 'principal_protected'");
        }
        return ClaimSpec::cat_bond(YearTime(T), CatastropheModel(cfg.lambda), convention);
    }
    throw UsageError("claim must be 'zcb' or 'cat'");
}

LoadingSpec loading_from(const RunConfig& cfg) {
    if (cfg.loading_vol > 0.0) {
        return LoadingSpec::martingale(cfg.loading, cfg.loading_vol);
    }
    return LoadingSpec::constant(cfg.loading);
}

int cmd_calibrate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.data.empty()) {
        throw UsageError("calibrate needs --data");
    }
    const auto series = load_series(cfg, err);
    const auto curve = quadratic_variation(series);
    const auto result = fit_rho(curve, series.nbar.front(), fit_options(cfg));
    {
        auto file = open_output(cfg, "calibration.txt");
        write_calibration(file, result);
    }
    {
        auto file = open_output(cfg, "qv_fit.csv");
        write_fit_csv(file, curve, result.params);
    }
    write_calibration(out, result);
    if (!result.converged) {
        err << "mmm: error[numerical]: " << result.diagnostics << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_price(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const MmmParams params = resolve_params(cfg, err);
    std::vector<Quote> quotes;
    if (!cfg.data.empty()) {
        const auto series = load_series(cfg, err);
        const double T = cfg.maturity.value_or(series.t.back());
        const ClaimSpec claim = claim_from(cfg, T);
        for (std::size_t i = 0; i < series.t.size() && series.t[i] <= T; ++i) {
            MarketState state{YearTime(series.t[i]), series.nbar[i], series.savings[i], {}};
            if (cfg.catastrophe_time && *cfg.catastrophe_time <= series.t[i]) {
                state.catastrophe_time = cfg.catastrophe_time;
            }
            quotes.push_back({series.t[i], price(params, state, claim, cfg.loading)});
        }
    } else {
        const double T = cfg.maturity.value_or(cfg.horizon);
        const ClaimSpec claim = claim_from(cfg, T);
        const MarketState state{YearTime(0.0), params.n0(), 1.0, {}};
        quotes.push_back({0.0, price(params, state, claim, cfg.loading)});
    }
    auto file = open_output(cfg, "quotes.csv");
    write_quotes_csv(file, quotes);
    write_quotes_csv(out, std::span<const Quote>(quotes).first(1));
    return kExitOk;
}

int cmd_figures(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const MmmParams params = resolve_params(cfg, err);
    const SampledPath full = market_path(cfg, params, err);
    const double T = cfg.maturity.value_or(full.grid.back());
    const SampledPath path = truncate(full, T);
    const YearTime maturity(T);

    {
        auto file = open_output(cfg, "fig1_log_discounted.csv");
        csv::write_header(file, {"t", "log_nbar"});
        for (std::size_t i = 0; i < full.grid.size(); ++i) {
            csv::write_row(file, {full.grid[i], std::log(full.nbar[i])});
        }
    }
    {
        auto file = open_output(cfg, "fig2_qv.csv");
        write_fit_csv(file, quadratic_variation(full.grid.times(), full.nbar), params);
    }
    {
        auto file = open_output(cfg, "fig3_ratio.csv");
        csv::write_header(file, {"t", "time_to_maturity", "ratio"});
        for (std::size_t i = 0; i < path.grid.size() && path.grid[i] < T; ++i) {
            const YearTime t(path.grid[i]);
            csv::write_row(file, {path.grid[i], T - path.grid[i],
                                  price_ratio(params, path.nbar[i], t, maturity)});
        }
    }
    {
        auto file = open_output(cfg, "fig4_fraction.csv");
        csv::write_header(file, {"t", "fraction"});
        for (std::size_t i = 0; i < path.grid.size() && path.grid[i] < T; ++i) {
            csv::write_row(file, {path.grid[i], hedge_fraction(params, path.nbar[i],
                                                               YearTime(path.grid[i]),
                                                               maturity)});
        }
    }
    {
        const HedgeLedger ledger = backtest_minimal_zcb(params, path, maturity);
        auto file = open_output(cfg, "fig5_hedge.csv");
        csv::write_header(file, {"t", "log_hedge", "log_minimal", "log_loading"});
        for (std::size_t i = 0; i < path.grid.size(); ++i) {
            const double vbar = discounted_minimal_zcb(params, path.nbar[i],
                                                       YearTime(path.grid[i]), maturity);
            const double loading = cfg.loading + (1.0 - cfg.loading) * vbar;
            csv::write_row(file, {path.grid[i], std::log(ledger.value[i]), std::log(vbar),
                                  std::log(loading)});
        }
    }
    out << "figures written to " << cfg.out.string() << '\n';
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const MmmParams params = resolve_params(cfg, err);
    const PathGrid grid = PathGrid::uniform(cfg.step, cfg.horizon);
    std::vector<double> terminal(cfg.paths);
    std::filesystem::create_directories(cfg.out);
    parallel_for(cfg.paths, cfg.workers, [&](std::size_t p) {
        const SampledPath path = simulate_path(params, grid, cfg.seed, p);
        terminal[p] = path.nbar.back();
        auto file = open_output(cfg, numbered("path", p));
        write_path_csv(file, path);
    });
    auto file = open_output(cfg, "terminal.csv");
    csv::write_header(file, {"path", "t", "nbar"});
    for (std::size_t p = 0; p < cfg.paths; ++p) {
        csv::write_row(file, {static_cast<double>(p), grid.back(), terminal[p]});
    }
    out << cfg.paths << " paths written to " << cfg.out.string() << '\n';
    return kExitOk;
}

struct HedgeSummary {
    double xi = 0.0;
    double zcb_value = 0.0;
    double zcb_error = 0.0;
    double cat_pnl = 0.0;
    double loading_pnl = 0.0;
};

int cmd_hedge(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const MmmParams params = resolve_params(cfg, err);
    const std::size_t paths = cfg.data.empty() ? cfg.paths : 1;
    const CatastropheModel model(cfg.lambda);
    const LoadingSpec loading = loading_from(cfg);
    std::vector<HedgeSummary> summary(paths);
    std::filesystem::create_directories(cfg.out);

    parallel_for(paths, cfg.workers, [&](std::size_t p) {
        const SampledPath full = market_path(cfg, params, err, p);
        const double T = cfg.maturity.value_or(full.grid.back());
        const SampledPath path = truncate(full, T);
        const YearTime maturity(T);
        RandomStream cat_rng(cfg.seed, StreamPurpose::kCatastrophe, p);
        const double xi = sample_catastrophe(model, cat_rng);
        const auto levels = simulate_loading(loading, path.grid, cfg.seed, p);

        const HedgeLedger zcb = backtest_minimal_zcb(params, path, maturity);
        const HedgeLedger cat = risk_minimize_cat(params, path, model, xi, maturity);
        const HedgeLedger loaded = risk_minimize_loading(params, path, model, xi, maturity, levels);
        {
            auto file = open_output(cfg, numbered("hedge_zcb", p));
            write_ledger_csv(file, zcb);
        }
        {
            auto file = open_output(cfg, numbered("risk_min_cat", p));
            write_ledger_csv(file, cat);
        }
        {
            auto file = open_output(cfg, numbered("risk_min_loading", p));
            write_ledger_csv(file, loaded);
        }
        const double target =
            discounted_minimal_zcb(params, path.nbar.back(), YearTime(path.grid.back()), maturity);
        summary[p] = {xi, zcb.value.back(), zcb.value.back() - target, cat.benchmarked_pnl.back(),
                      loaded.benchmarked_pnl.back()};
    });

    auto file = open_output(cfg, "hedge_summary.csv");
    csv::write_header(file, {"path", "xi", "zcb_terminal_value", "zcb_error", "cat_terminal_pnl",
                             "loading_terminal_pnl"});
    for (std::size_t p = 0; p < paths; ++p) {
        const auto& s = summary[p];
        csv::write_row(file, {static_cast<double>(p), s.xi, s.zcb_value, s.zcb_error, s.cat_pnl,
                              s.loading_pnl});
    }
    out << paths << " hedge ledgers written to " << cfg.out.string() << '\n';
    return kExitOk;
}

int cmd_book(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const MmmParams params = resolve_params(cfg, err);
    const CatastropheModel model(cfg.lambda);
    const double T = cfg.maturity.value_or(cfg.horizon);
    BookSettings settings;
    settings.step = cfg.step;
    settings.replications = cfg.replications;
    settings.seed = cfg.seed;
    settings.workers = cfg.workers;

    auto book = open_output(cfg, "book.csv");
    auto reps = open_output(cfg, "book_replications.csv");
    csv::write_header(book, {"n", "replications", "avg_terminal_pnl", "rms"});
    csv::write_header(reps, {"n", "replication", "average"});
    for (std::size_t n : cfg.contracts) {
        const BookResult result = diversify_book(params, model, n, YearTime(T), settings);
        csv::write_row(book, {static_cast<double>(n), static_cast<double>(cfg.replications),
                              result.avg_benchmarked_pnl_terminal, result.rms_across_seeds});
        for (std::size_t r = 0; r < result.replication_averages.size(); ++r) {
            csv::write_row(reps, {static_cast<double>(n), static_cast<double>(r),
                                  result.replication_averages[r]});
        }
        out << "n=" << n << " rms=" << csv::format_number(result.rms_across_seeds) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Minimal market model pricing, simulation and hedging", "mmm"};
    app.set_config("--config", "", "key=value run configuration (flags override it)");
    app.require_subcommand(1);

    app.add_option("--data", cfg.data, "CSV with header date,index[,rate]");
    app.add_option("--calibration", cfg.calibration, "calibration.txt from a previous run");
    app.add_option("--normalize", cfg.normalize, "initial discounted NP value (<= 0: none)");
    app.add_option("--params", cfg.params, "alpha0,eta,n0")->delimiter(',')->expected(3);
    app.add_option("--eta-lo", cfg.eta_lo, "lower eta search bound");
    app.add_option("--eta-hi", cfg.eta_hi, "upper eta search bound");
    app.add_option("--weighting", cfg.weighting, "equal | terminal");
    app.add_option("--seed", cfg.seed, "master random seed")->envname("MMM_SEED");
    app.add_option("--step", cfg.step, "grid step in years");
    app.add_option("--horizon", cfg.horizon, "simulation horizon in years");
    app.add_option("--maturity", cfg.maturity, "claim maturity in years");
    app.add_option("--claim", cfg.claim, "zcb | cat");
    app.add_option("--convention", cfg.convention, "occurrence | principal_protected");
    app.add_option("--lambda", cfg.lambda, "catastrophe hazard rate per year");
    app.add_option("--catastrophe-time", cfg.catastrophe_time,
                   "time of an already observed catastrophe");
    app.add_option("--loading", cfg.loading, "loading degree L0");
    app.add_option("--loading-vol", cfg.loading_vol, "volatility of a martingale loading degree");
    app.add_option("--paths", cfg.paths, "number of simulated paths");
    app.add_option("--contracts", cfg.contracts, "book sizes")->delimiter(',');
    app.add_option("--replications", cfg.replications, "book replications");
    app.add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
    app.add_option("--out", cfg.out, "output directory");

    using Command = int (*)(const RunConfig&, std::ostream&, std::ostream&);
    const std::pair<const char*, Command> commands[] = {
        {"calibrate", cmd_calibrate}, {"price", cmd_price}, {"figures", cmd_figures},
        {"simulate", cmd_simulate},   {"hedge", cmd_hedge}, {"book", cmd_book},
    };
    const char* help[] = {
        "fit alpha0 and eta to the quadratic variation of sqrt(discounted index)",
        "minimal, risk-neutral and loading quotes",
        "CSV data behind the log-index, QV fit, price ratio, NP fraction and hedge plots",
        "exact minimal market model paths",
        "bond hedge backtest and CAT bond risk-minimisation ledgers",
        "diversification of terminal profit-and-loss across a book of contracts",
    };
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        app.add_subcommand(commands[i].first, help[i])->fallthrough();
    }

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) {
            args.emplace_back(argv[i]);
        }
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "mmm: error[usage]: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        for (const auto& [name, command] : commands) {
            if (app.got_subcommand(name)) {
                return command(cfg, out, err);
            }
        }
        err << "mmm: error[usage]: no subcommand\n";
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "mmm: error[numerical]: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DataError& e) {
        err << "mmm: error[data]: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "mmm: error[usage]: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "mmm: error[usage]: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "mmm: error[internal]: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace mmm::cli
