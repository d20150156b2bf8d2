#include "trunctail/stats.hpp"

#include "trunctail/errors.hpp"
#include "trunctail/numerics.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace trunctail {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

std::vector<double> sorted_finite(std::span<const double> values)
{
    std::vector<double> v(values.begin(), values.end());
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw ArgumentError("KS test: non-finite value");
        }
    }
    std::sort(v.begin(), v.end());
    return v;
}

double stephens(double d, double n)
{
    const double root = std::sqrt(n);
    return (root + 0.12 + 0.11 / root) * d;
}

}  // namespace

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double kolmogorov_sf(double lambda)
{
    if (lambda <= 0.0) {
        return 1.0;
    }
    if (lambda < 1.0) {
        // Jacobi-transformed series, fast for small lambda
        const double c = -kPi * kPi / (8.0 * lambda * lambda);
        double s = 0.0;
        for (int j = 1; j <= 20; ++j) {
            const double odd = 2.0 * j - 1.0;
            s += std::exp(c * odd * odd);
        }
        return std::clamp(1.0 - std::sqrt(2.0 * kPi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        s += sign * term;
        if (term < 1e-18) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_normal(std::span<const double> values, double mean, double sd)
{
    if (values.empty()) {
        throw ArgumentError("KS test: empty sample");
    }
    if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
        throw ArgumentError("KS test: reference law needs finite mean and positive sd");
    }
    const auto v = sorted_finite(values);
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = normal_cdf((v[i] - mean) / sd);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return {d, kolmogorov_sf(stephens(d, n)), v.size()};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty()) {
        throw ArgumentError("KS test: empty sample");
    }
    const auto x = sorted_finite(a);
    const auto y = sorted_finite(b);
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t) {
            ++i;
        }
        while (j < y.size() && y[j] == t) {
            ++j;
        }
        d = std::max(d, std::abs(i / n - j / m));
    }
    const double ne = n * m / (n + m);
    return {d, kolmogorov_sf(stephens(d, ne)), x.size() + y.size()};
}

SampleMoments sample_moments(std::span<const double> values)
{
    if (values.size() < 2) {
        throw ArgumentError("sample moments need at least two values");
    }
    const double n = static_cast<double>(values.size());
    const double mean = pairwise_sum(values) / n;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double c = values[i] - mean;
        sq[i] = c * c;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    return {mean, var, std::sqrt(var / n), values.size()};
}

std::complex<double> empirical_cf(std::span<const double> values, double t)
{
    if (values.empty()) {
        throw ArgumentError("empirical characteristic function of an empty sample");
    }
    std::vector<double> re(values.size());
    std::vector<double> im(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = std::cos(t * values[i]);
        im[i] = std::sin(t * values[i]);
    }
    const double n = static_cast<double>(values.size());
    return {pairwise_sum(re) / n, pairwise_sum(im) / n};
}

}  // namespace trunctail
