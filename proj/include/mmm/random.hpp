#pragma once

#include <cstdint>
#include <random>

namespace mmm {

/// Independent random sources. Each purpose gets a disjoint family of
/// substreams so that market, catastrophe and loading draws never share state.
enum class StreamPurpose : std::uint64_t {
    kMarket = 1,
    kCatastrophe = 2,
    kLoading = 3,
    kEuler = 4,
};

/// SplitMix64 finaliser.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Random stream addressed by (master seed, purpose, index, sub-index).
/// Draws depend only on that address, so work can be split across threads
/// in any way without changing results.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t index,
                 std::uint64_t sub_index = 0)
        : engine_(mix64(mix64(mix64(master_seed) ^ static_cast<std::uint64_t>(purpose)) ^
                        mix64(index + 0x632BE59BD9B4E019ULL * (sub_index + 1)))) {}

    double normal() { return normal_(engine_); }

    /// Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 53>(engine_); }

    double exponential(double rate) {
        return std::exponential_distribution<double>(rate)(engine_);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace mmm
