#pragma once

// Hot loops of the Monte Carlo code. Compiled on their own with relaxed
// floating-point flags; see src/CMakeLists.txt.

#include <cstddef>
#include <span>

namespace trunctail {

class Rng;

namespace detail {

struct SeriesDraw {
    double value = 0.0;      // Gamma_1^s * sum_{j<=N} Gamma_j^{-s}
    double last_term = 0.0;  // (Gamma_1 / Gamma_N)^s
    double tail_mean = 0.0;  // E[sum_{j>N} (Gamma_1/Gamma_j)^s | Gamma_1, Gamma_N]
};

/// One truncated draw of the Poisson-arrival series with exponent s > 1.
/// `scratch` is working storage; its size sets the block length.
SeriesDraw z_series(Rng& rng, std::size_t n_terms, double s, std::span<double> scratch);

/// In place: open-interval uniforms u -> scale * u^{-1/alpha}.
void pareto_radii(std::span<double> values, double alpha, double scale);

}  // namespace detail
}  // namespace trunctail
