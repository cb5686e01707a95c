#include "mmm/simulation.hpp"

#include "mmm/csv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mmm {

PathGrid::PathGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.empty() || times_.front() != 0.0) {
        throw std::invalid_argument("grid must be non-empty and start at 0");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) {
            throw std::invalid_argument("grid times must be strictly increasing");
        }
    }
}

PathGrid PathGrid::uniform(double step, double horizon) {
    if (!(step > 0.0) || !(horizon >= 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("uniform grid needs step > 0 and finite horizon >= 0");
    }
    if (horizon == 0.0) {
        return PathGrid({0.0});
    }
    const auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    std::vector<double> times(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        times[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
    }
    times[n] = horizon;
    return PathGrid(std::move(times));
}

PathGrid PathGrid::coarsen(std::size_t stride) const {
    if (stride == 0) {
        throw std::invalid_argument("stride must be >= 1");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < times_.size(); i += stride) {
        out.push_back(times_[i]);
    }
    if (out.back() != times_.back()) {
        out.push_back(times_.back());
    }
    return PathGrid(std::move(out));
}

SampledPath SampledPath::coarsen(std::size_t stride) const {
    SampledPath out{grid.coarsen(stride), {}, seed};
    for (std::size_t i = 0; i < nbar.size(); i += stride) {
        out.nbar.push_back(nbar[i]);
    }
    if (out.nbar.size() < out.grid.size()) {
        out.nbar.push_back(nbar.back());
    }
    return out;
}

double besq4_step(double nbar_t, double d_rho, RandomStream& rng) {
    if (d_rho <= 0.0) {
        return nbar_t;
    }
    const double shift = std::sqrt(nbar_t / d_rho);
    const double z1 = rng.normal() + shift;
    const double z2 = rng.normal();
    const double z3 = rng.normal();
    const double z4 = rng.normal();
    return d_rho * (z1 * z1 + z2 * z2 + z3 * z3 + z4 * z4);
}

double besq4_transition(const MmmParams& params, double nbar_t, YearTime t, YearTime T,
                        RandomStream& rng) {
    if (t > T) {
        throw std::invalid_argument("transition requires t <= T");
    }
    return besq4_step(nbar_t, rho_increment(params, t, T), rng);
}

SampledPath simulate_path(const MmmParams& params, const PathGrid& grid, std::uint64_t seed,
                          std::uint64_t path_index) {
    RandomStream rng(seed, StreamPurpose::kMarket, path_index);
    SampledPath path{grid, {}, seed};
    path.nbar.resize(grid.size());
    path.nbar[0] = params.n0();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double d_rho = rho_increment(params, YearTime(grid[i - 1]), YearTime(grid[i]));
        path.nbar[i] = besq4_step(path.nbar[i - 1], d_rho, rng);
    }
    return path;
}

double euler_step(double alpha_t, double nbar, double dt, double dw) noexcept {
    const double next = nbar + alpha_t * dt + std::sqrt(alpha_t * nbar) * dw;
    return std::max(std::abs(next), kEulerFloor);
}

std::vector<double> euler_path_from_increments(const MmmParams& params, const PathGrid& grid,
                                               std::span<const double> dw) {
    if (dw.size() + 1 != grid.size()) {
        throw std::invalid_argument("need one Brownian increment per grid interval");
    }
    std::vector<double> nbar(grid.size());
    nbar[0] = params.n0();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dt = grid[i] - grid[i - 1];
        nbar[i] = euler_step(alpha(params, YearTime(grid[i - 1])), nbar[i - 1], dt, dw[i - 1]);
    }
    return nbar;
}

SampledPath simulate_path_euler(const MmmParams& params, const PathGrid& grid,
                                std::uint64_t seed, std::uint64_t path_index) {
    RandomStream rng(seed, StreamPurpose::kEuler, path_index);
    std::vector<double> dw(grid.size() - 1);
    for (std::size_t i = 0; i < dw.size(); ++i) {
        dw[i] = std::sqrt(grid[i + 1] - grid[i]) * rng.normal();
    }
    return {grid, euler_path_from_increments(params, grid, dw), seed};
}

CatastropheModel::CatastropheModel(double lambda) : lambda_(lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("catastrophe hazard rate must be finite and >= 0");
    }
}

double sample_catastrophe(const CatastropheModel& model, RandomStream& rng) {
    if (model.lambda() == 0.0) {
        return kNever;
    }
    return rng.exponential(model.lambda());
}

double claim_probability(const CatastropheModel& model, YearTime t, YearTime T, double xi) {
    if (t > T) {
        throw std::invalid_argument("claim probability requires t <= T");
    }
    if (xi <= t.years()) {
        return 1.0;
    }
    return -std::expm1(-model.lambda() * (T.years() - t.years()));
}

LoadingSpec LoadingSpec::constant(double level) {
    if (!(level >= 0.0) || !std::isfinite(level)) {
        throw std::invalid_argument("constant loading degree must be >= 0");
    }
    return {Kind::kConstant, level, 0.0};
}

LoadingSpec LoadingSpec::martingale(double initial, double vol) {
    if (!(initial > 0.0) || !std::isfinite(initial)) {
        throw std::invalid_argument("martingale loading degree needs initial value > 0");
    }
    if (!(vol >= 0.0) || !std::isfinite(vol)) {
        throw std::invalid_argument("loading volatility must be >= 0");
    }
    return {Kind::kMartingale, initial, vol};
}

std::vector<double> simulate_loading(const LoadingSpec& spec, const PathGrid& grid,
                                     std::uint64_t seed, std::uint64_t path_index) {
    std::vector<double> out(grid.size(), spec.initial());
    if (spec.kind() == LoadingSpec::Kind::kConstant || spec.vol() == 0.0) {
        return out;
    }
    RandomStream rng(seed, StreamPurpose::kLoading, path_index);
    const double vol = spec.vol();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dt = grid[i] - grid[i - 1];
        out[i] = out[i - 1] * std::exp(vol * std::sqrt(dt) * rng.normal() - 0.5 * vol * vol * dt);
    }
    return out;
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

void write_path_csv(std::ostream& out, const SampledPath& path) {
    csv::write_columns(out, {"t", "nbar"}, {path.grid.times(), path.nbar});
}

}  // namespace mmm
