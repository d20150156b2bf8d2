#include "kernels.hpp"

#include "trunctail/random.hpp"

#include <algorithm>
#include <cmath>

namespace trunctail::detail {

SeriesDraw z_series(Rng& rng, std::size_t n_terms, double s, std::span<double> scratch)
{
    const std::size_t block = scratch.size();
    double* buf = scratch.data();

    double gamma = 0.0;
    double log_gamma1 = 0.0;
    double sum = 0.0;
    for (std::size_t start = 0; start < n_terms; start += block) {
        const std::size_t len = std::min(block, n_terms - start);
        for (std::size_t i = 0; i < len; ++i) {
            buf[i] = rng.uniform();
        }
        for (std::size_t i = 0; i < len; ++i) {
            buf[i] = -std::log(buf[i]);
        }
        // running sum of exponentials: arrival times of a unit Poisson process
        for (std::size_t i = 0; i < len; ++i) {
            gamma += buf[i];
            buf[i] = gamma;
        }
        for (std::size_t i = 0; i < len; ++i) {
            buf[i] = std::log(buf[i]);
        }
        if (start == 0) {
            log_gamma1 = buf[0];
        }
        // the j = 1 term is exactly one
        double acc = start == 0 ? 1.0 : 0.0;
        for (std::size_t i = start == 0 ? 1 : 0; i < len; ++i) {
            acc += std::exp(s * (log_gamma1 - buf[i]));
        }
        sum += acc;
    }

    SeriesDraw out;
    out.value = sum;
    out.last_term = std::exp(s * (log_gamma1 - std::log(gamma)));
    out.tail_mean = out.last_term * gamma / (s - 1.0);
    return out;
}

void pareto_radii(std::span<double> values, double alpha, double scale)
{
    const double inv_alpha = 1.0 / alpha;
    for (double& v : values) {
        v = scale * std::exp(-inv_alpha * std::log(v));
    }
}

}  // namespace trunctail::detail
