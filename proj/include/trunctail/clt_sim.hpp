#pragma once

#include "trunctail/stats.hpp"
#include "trunctail/tail_model.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trunctail {

enum class Centering { None, TheoreticalMean, EmpiricalMean };
enum class Scaling { Bn, bn };

std::string to_string(Centering c);
std::string to_string(Scaling s);
Centering parse_centering(const std::string& name);
Scaling parse_scaling(const std::string& name);

/// Row sums S_n of `reps` independent rows of length n.
///
/// Centering TheoreticalMean subtracts E S_n under Bn scaling, and
/// n b_n^{-1} E[H 1(|H| <= b_n)] under bn scaling (the centering that makes
/// the Levy-Khinchine shift of the limit vanish).
struct SumExperiment {
    TailModelConfig config;
    std::size_t n = 10000;
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    Centering centering = Centering::TheoreticalMean;
    Scaling scaling = Scaling::Bn;
    /// Execution detail; never changes the result.
    unsigned workers = 0;

    void validate() const;

    bool operator==(const SumExperiment& o) const
    {
        return config == o.config && n == o.n && reps == o.reps && seed == o.seed && centering == o.centering &&
               scaling == o.scaling;
    }
};

/// Levy-Khinchine data of an alpha-stable law: shift and (unnormalized) spectral measure.
struct StableLimitSpec {
    double alpha = 1.0;
    std::vector<double> gamma_shift;
    SpectralMeasure spectral = SpectralMeasure::symmetric_line();

    void validate() const;
};

/// reps x d standardized sums; replicate i depends only on (seed, i).
Points run_sums(const SumExperiment& exp);

using Matrix = std::vector<std::vector<double>>;

/// (2 / (2 - alpha)) sum_k w_k s_k s_k^T over the normalized atoms.
Matrix gaussian_covariance(double alpha, const SpectralMeasure& spectral);

/// Limit of n b_n^{-1} E[H 1(|H| <= b_n)]-centered sums of the untruncated model:
/// spectral mass alpha * (normalized atoms), zero shift.
StableLimitSpec stable_limit(const HeavyTailSpec& heavy);

/// Characteristic function of the jump-truncated infinitely divisible law rho_delta.
std::complex<double> rho_delta_cf(std::span<const double> t, double delta, const StableLimitSpec& limit);

/// Scalar S_alpha(sigma, beta, mu) limit of bn-scaled, TheoreticalMean-centered
/// sums of a d = 1 radial Pareto model (soft regime). Asymmetric alpha = 1 is rejected.
StableParams stable_oracle(const HeavyTailSpec& heavy);

struct NormalityCheck {
    std::vector<double> statistic;  // KS distance per coordinate
    std::vector<double> p_value;
    double threshold = 0.01;
    bool pass = false;
};

/// KS test of each coordinate against N(0, variance_k); passes when every p >= threshold.
NormalityCheck normality_check(const Points& values, std::span<const double> variances, double threshold = 0.01);
NormalityCheck normality_check(std::span<const double> values, double variance, double threshold = 0.01);

/// n B_n^{-2} E[|H|^2 1(|H| <= M_n)] in closed form.
double karamata_ratio(std::size_t n, const TailModelConfig& config);
double karamata_limit(double alpha);

struct ExperimentDiagnostics {
    Regime regime;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> std_error;
    /// Hard regime with Bn scaling only.
    std::optional<Matrix> target_covariance;
    std::optional<NormalityCheck> normality;
    std::optional<double> karamata_ratio;
    /// Soft regime, bn scaling, d = 1: two-sample KS against the stable oracle.
    std::optional<KsResult> stable_ks;
};

/// Runs the sums and the diagnostics that apply to the configuration's regime.
ExperimentDiagnostics run_experiment(const SumExperiment& exp, Points* sums_out = nullptr);

/// CSV with one column per coordinate (x0, x1, ...).
std::string sums_csv(const Points& sums);

}  // namespace trunctail
