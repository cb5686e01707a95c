#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mmm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Settings shared by every subcommand. Filled from a key=value config file
/// and command-line flags (flags win).
struct RunConfig {
    std::filesystem::path data;
    std::optional<std::filesystem::path> calibration;
    double normalize = 10.0;  // <= 0 disables normalisation
    std::vector<double> params;  // alpha0, eta, n0
    double eta_lo = 1e-4;
    double eta_hi = 0.5;
    std::string weighting = "equal";
    std::uint64_t seed = 20260101;
    double step = 1.0 / 12.0;
    double horizon = 89.0;
    std::optional<double> maturity;
    std::string claim = "zcb";
    std::string convention = "occurrence";
    double lambda = 0.05;
    std::optional<double> catastrophe_time;
    double loading = 0.3;
    double loading_vol = 0.0;
    std::size_t paths = 1;
    std::vector<std::size_t> contracts{100, 10000};
    std::size_t replications = 50;
    unsigned workers = 1;
    std::filesystem::path out = ".";
};

/// Parses arguments and runs the selected subcommand: calibrate, price,
/// figures, simulate, hedge or book. Errors are reported on `err` as one
/// line `mmm: error[<kind>]: <message>`; the return value is the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmm::cli
