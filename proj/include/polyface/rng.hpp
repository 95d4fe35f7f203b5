#ifndef POLYFACE_RNG_HPP
#define POLYFACE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace polyface {

/// Default seed used by the command-line tools when none is given.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Domain tags keep the per-trial streams used for different purposes
/// (matrix entries, planted supports, face pinning, ...) decorrelated
/// even when they share a seed and trial index.
enum class RngDomain : std::uint64_t {
    Matrix = 1,
    Face = 2,
    Plant = 3,
    Highpass = 4,
    Subsets = 5,
    Oracle = 6,
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/**
 * Counter-keyed random stream: the state is a pure function of
 * (seed, trial_index, domain), so trial t always sees the same stream
 * no matter how trials are scheduled across threads or runs.
 *
 * The generator is SplitMix64; uniforms take the top 53 bits and
 * Gaussians come from a Box-Muller pair with an internal spare.
 */
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial_index, RngDomain domain)
        : state_(detail::mix64(detail::mix64(seed) ^
                               detail::mix64(trial_index * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL) ^
                               detail::mix64(static_cast<std::uint64_t>(domain) * 0xD1B54A32D192ED03ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1); never returns an exact endpoint.
    double uniform_open01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform on [-1, 1].
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

    /// Fair coin in {-1, +1}.
    double rademacher() { return (next_u64() & 1ULL) ? 1.0 : -1.0; }

    bool coin() { return (next_u64() & 1ULL) != 0; }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Unbiased integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (~0ULL / bound);
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % bound;
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace polyface

#endif  // POLYFACE_RNG_HPP
