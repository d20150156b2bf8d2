#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace trunctail {

/// Mixes (base, stream, index) into an independent 64-bit seed.
/// Replicate seeds are derived from the replicate index, never from
/// the worker that happens to run it.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) noexcept;

/// Thin wrapper over mt19937_64 with the handful of variates the
/// simulations need.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept
    {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Unit-rate exponential.
    double exponential() noexcept { return -std::log(uniform()); }

    std::uint64_t bits() noexcept { return engine_(); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Runs body(i) for i in [0, count) on up to `workers` threads
/// (0 = hardware concurrency). Iterations must be independent.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned workers = 0);

}  // namespace trunctail
