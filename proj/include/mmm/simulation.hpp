#pragma once

#include "mmm/model.hpp"
#include "mmm/random.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace mmm {

/// Strictly increasing simulation times starting at 0.
class PathGrid {
public:
    /// Throws std::invalid_argument if empty, not starting at 0 or not
    /// strictly increasing.
    explicit PathGrid(std::vector<double> times);

    /// 0, h, 2h, ..., horizon with h = horizon / ceil(horizon / step).
    [[nodiscard]] static PathGrid uniform(double step, double horizon);

    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return times_[i]; }
    [[nodiscard]] double back() const { return times_.back(); }

    /// Every `stride`-th point, always keeping the last one.
    [[nodiscard]] PathGrid coarsen(std::size_t stride) const;

private:
    std::vector<double> times_;
};

struct SampledPath {
    PathGrid grid;
    std::vector<double> nbar;
    std::uint64_t seed = 0;

    /// Same path observed on every `stride`-th grid point.
    [[nodiscard]] SampledPath coarsen(std::size_t stride) const;
};

/// Exact draw of N̄_T given N̄_t = nbar_t: Δρ·X with X noncentral χ² on four
/// degrees of freedom and noncentrality nbar_t/Δρ. Returns nbar_t when Δρ = 0.
[[nodiscard]] double besq4_transition(const MmmParams& params, double nbar_t, YearTime t,
                                      YearTime T, RandomStream& rng);

/// Same draw in time-changed form, for callers that already hold Δρ.
[[nodiscard]] double besq4_step(double nbar_t, double d_rho, RandomStream& rng);

/// Exact path started at params.n0(), driven by the market substream
/// (seed, path_index).
[[nodiscard]] SampledPath simulate_path(const MmmParams& params, const PathGrid& grid,
                                        std::uint64_t seed, std::uint64_t path_index = 0);

inline constexpr double kEulerFloor = 1e-12;

/// One Euler–Maruyama step of dN̄ = α dt + sqrt(α N̄) dW. Negative results
/// are reflected and floored at kEulerFloor.
[[nodiscard]] double euler_step(double alpha_t, double nbar, double dt, double dw) noexcept;

/// Euler path for given Brownian increments (dw[i] spans grid[i]..grid[i+1]).
[[nodiscard]] std::vector<double> euler_path_from_increments(const MmmParams& params,
                                                             const PathGrid& grid,
                                                             std::span<const double> dw);

/// Euler path with increments from the Euler substream (seed, path_index).
[[nodiscard]] SampledPath simulate_path_euler(const MmmParams& params, const PathGrid& grid,
                                              std::uint64_t seed,
                                              std::uint64_t path_index = 0);

/// Exponential first-catastrophe time with constant hazard `lambda`.
class CatastropheModel {
public:
    explicit CatastropheModel(double lambda);
    [[nodiscard]] double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

inline constexpr double kNever = std::numeric_limits<double>::infinity();

/// Exponential(lambda) draw; kNever when lambda == 0.
[[nodiscard]] double sample_catastrophe(const CatastropheModel& model, RandomStream& rng);

/// P(ξ ≤ T | information at t): 1 if xi ≤ t, else 1 − exp(−λ(T − t)).
[[nodiscard]] double claim_probability(const CatastropheModel& model, YearTime t, YearTime T,
                                       double xi);

/// Loading degree process: constant, or the driftless exponential martingale
/// L_{t+Δ} = L_t exp(σ√Δ Z − σ²Δ/2) on an independent stream.
class LoadingSpec {
public:
    enum class Kind { kConstant, kMartingale };

    [[nodiscard]] static LoadingSpec constant(double level);
    [[nodiscard]] static LoadingSpec martingale(double initial, double vol);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double initial() const noexcept { return initial_; }
    [[nodiscard]] double vol() const noexcept { return vol_; }

private:
    LoadingSpec(Kind kind, double initial, double vol)
        : kind_(kind), initial_(initial), vol_(vol) {}

    Kind kind_;
    double initial_;
    double vol_;
};

[[nodiscard]] std::vector<double> simulate_loading(const LoadingSpec& spec,
                                                   const PathGrid& grid, std::uint64_t seed,
                                                   std::uint64_t path_index = 0);

/// Runs body(i) for i in [0, count) on `workers` threads (0 = hardware
/// concurrency). Callers write results into per-index slots.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

/// `t,nbar` rows.
void write_path_csv(std::ostream& out, const SampledPath& path);

}  // namespace mmm
