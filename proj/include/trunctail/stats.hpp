#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace trunctail {

double normal_cdf(double x);

/// Asymptotic Kolmogorov survival function P(K > lambda).
double kolmogorov_sf(double lambda);

struct KsResult {
    double statistic = 0.0;  // sup distance D
    double p_value = 1.0;
    std::size_t n = 0;
};

/// One-sample test against N(mean, sd^2), Stephens' small-sample correction.
KsResult ks_normal(std::span<const double> values, double mean, double sd);

/// Two-sample test with the asymptotic p-value at the effective size nm/(n+m).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double std_error = 0.0; // of the mean
    std::size_t n = 0;
};

SampleMoments sample_moments(std::span<const double> values);

/// (1/n) sum exp(i t x).
std::complex<double> empirical_cf(std::span<const double> values, double t);

}  // namespace trunctail
