#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace trunctail {

struct MonteCarloSource {
    std::size_t n_terms = 100000;
    std::size_t n_reps = 100000;
    std::uint64_t seed = 0;
    /// Mean over replicates of the expected series remainder beyond n_terms.
    double tail_mean = 0.0;

    bool operator==(const MonteCarloSource&) const = default;
};

struct MarkovSource {
    double r = 0.05;
    std::size_t k_grid = 10000000;

    bool operator==(const MarkovSource&) const = default;
};

using QuantileSource = std::variant<MonteCarloSource, MarkovSource>;

std::string source_name(const QuantileSource& source);

/// Upper quantile c with P(Z(theta) > c) approximately (Monte Carlo) or at most (Markov) p.
struct ZThetaQuantile {
    double theta = 0.0;
    double p = 0.0;
    double value = 0.0;
    QuantileSource source;

    /// True when the truncated series may miss more than 1% of the quantile.
    bool truncation_suspect() const;

    bool operator==(const ZThetaQuantile&) const = default;
};

/// One truncated draw of Gamma_1^{1/theta} sum_j Gamma_j^{-1/theta}.
struct ZDraw {
    double value = 0.0;
    /// (Gamma_1 / Gamma_N)^{1/theta}, the smallest term kept.
    double last_term = 0.0;
    /// Conditional expectation of the dropped terms given the path.
    double tail_mean = 0.0;

    /// Unbiased for E Z(theta): the kept terms plus the expected remainder.
    double compensated() const { return value + tail_mean; }
};

/// Throws ArgumentError unless 0 < theta < 1.
void check_theta(double theta);

double simulate_Z(double theta, std::size_t n_terms, std::uint64_t seed);
ZDraw simulate_Z_draw(double theta, std::size_t n_terms, std::uint64_t seed);

/// Replicate i is drawn from derive_seed(seed, kZStream, i), so the batch does
/// not depend on the number of workers.
std::vector<ZDraw> simulate_Z_batch(double theta, std::size_t n_terms, std::size_t n_reps, std::uint64_t seed,
                                    unsigned workers = 0);

/// Order statistic of rank ceil((1 - p) n) of an ascending sample.
double upper_quantile(std::span<const double> ascending, double p);

ZThetaQuantile mc_quantile(double theta, double p, std::size_t n_terms, std::size_t n_reps, std::uint64_t seed,
                           unsigned workers = 0);

/// Several levels from one shared set of draws.
std::vector<ZThetaQuantile> mc_quantiles(double theta, std::span<const double> ps, std::size_t n_terms,
                                         std::size_t n_reps, std::uint64_t seed, unsigned workers = 0);

/// 1 + gamma e^gamma int_0^1 e^{-gamma x} x^{-theta} dx; vanishes at gamma0(theta).
double laplace_denominator(double theta, double gamma);

/// E exp(-gamma Z(theta)); throws DomainError for gamma <= gamma0(theta).
double laplace_transform(double theta, double gamma);

/// Negative root of laplace_denominator.
double gamma0(double theta);

/// Upper Riemann sum for int_0^1 e^{rx} x^{-theta} dx on a grid of k_grid cells.
double riemann_upper_integral(double theta, double r, std::size_t k_grid);

/// Upper bound for E exp(r Z(theta)).
double mgf_bound(double theta, double r, std::size_t k_grid);

ZThetaQuantile markov_quantile(double theta, double p, double r = 0.05, std::size_t k_grid = 10000000);

enum class CriticalPolicy { Auto, MonteCarlo, MarkovBound };

std::string to_string(CriticalPolicy policy);
CriticalPolicy parse_policy(const std::string& name);

struct CriticalBudget {
    std::size_t n_terms = 100000;
    std::size_t n_reps = 100000;
    std::uint64_t seed = 20240101;
    unsigned workers = 0;
    double r = 0.05;
    std::size_t k_grid = 10000000;
};

/// Auto takes Monte Carlo for theta <= 0.7 and the Markov bound above.
ZThetaQuantile critical_value(double theta, double p, CriticalPolicy policy = CriticalPolicy::Auto,
                              const CriticalBudget& budget = {});

/// Source Auto would choose for theta.
CriticalPolicy resolve_policy(double theta, CriticalPolicy policy);

}  // namespace trunctail
