#pragma once

#include <cmath>
#include <cstdint>

namespace conclab {

// SplitMix64 finalizer: a bijective avalanche mix on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based random stream: the state is a pure function of
// (seed, stream, substream), so sample i can be drawn independently of any
// other sample and of the number of worker threads. Stream "phase" advances
// splitmix64-style.
class CounterRng {
  public:
    static constexpr const char* algorithm_id = "splitmix64-boxmuller-v1";

    CounterRng(std::uint64_t seed, std::uint64_t stream,
               std::uint64_t substream = 0) noexcept
        : state_(mix64(mix64(seed ^ 0x9E3779B97F4A7C15ULL) +
                       stream * 0xBF58476D1CE4E5B9ULL +
                       substream * 0x94D049BB133111EBULL)) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; safe as a log() argument.
    double next_unit_positive() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal pair via Box-Muller.
    void next_gaussian_pair(double& g0, double& g1) noexcept {
        const double u = next_unit_positive();
        const double v = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u));
        const double angle = 6.283185307179586476925286766559 * v;
        g0 = radius * std::cos(angle);
        g1 = radius * std::sin(angle);
    }

    double next_gaussian() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double g0 = 0.0;
        next_gaussian_pair(g0, spare_);
        have_spare_ = true;
        return g0;
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace conclab
