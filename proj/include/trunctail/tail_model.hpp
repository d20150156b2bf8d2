#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace trunctail {

class Rng;

/// Row-major block of n points in R^d.
class Points {
public:
    Points() = default;
    Points(std::size_t rows, std::size_t dim);

    static Points from_scalars(std::vector<double> values);

    std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * dim_, dim_}; }

    /// Euclidean norm of row i.
    double norm(std::size_t i) const noexcept;

    /// Flat row-major storage; for d = 1 this is the scalar series.
    const std::vector<double>& values() const noexcept { return data_; }
    std::vector<double>& values() noexcept { return data_; }

    bool operator==(const Points&) const = default;

private:
    std::size_t dim_ = 1;
    std::vector<double> data_;
};

struct SpectralAtom {
    std::vector<double> direction;
    double weight = 0.0;

    bool operator==(const SpectralAtom&) const = default;
};

/// Finite discrete measure on the unit sphere of R^d.
class SpectralMeasure {
public:
    /// Validates: at least one atom, common dimension, unit-norm directions
    /// (within 1e-12), nonnegative weights and positive total mass.
    explicit SpectralMeasure(std::vector<SpectralAtom> atoms);

    /// Atoms at +1 and -1 carrying mass/2 each.
    static SpectralMeasure symmetric_line(double mass = 1.0);
    /// Single atom at +1.
    static SpectralMeasure positive_line(double mass = 1.0);

    const std::vector<SpectralAtom>& atoms() const noexcept { return atoms_; }
    std::size_t dimension() const noexcept { return atoms_.front().direction.size(); }
    double total_mass() const noexcept { return total_mass_; }

    SpectralMeasure normalized() const;
    SpectralMeasure scaled(double factor) const;

    /// Integral of s with respect to the measure.
    std::vector<double> first_moment() const;

    bool operator==(const SpectralMeasure&) const = default;

private:
    std::vector<SpectralAtom> atoms_;
    double total_mass_ = 0.0;
};

/// Radial Pareto law: P(|H| > x) = (x / scale)^{-alpha} for x >= scale,
/// direction drawn independently from the (normalized) spectral atoms.
struct HeavyTailSpec {
    double alpha = 1.0;
    double scale = 1.0;
    SpectralMeasure spectral = SpectralMeasure::symmetric_line();

    /// Throws ConfigError unless alpha, scale are finite and positive and the
    /// spectral weights sum to one within 1e-12.
    void validate() const;

    /// P(|H| > level).
    double survival(double level) const;

    bool operator==(const HeavyTailSpec&) const = default;
};

/// M_n = coefficient * n^exponent.
struct TruncationRule {
    double coefficient = 1.0;
    double exponent = 0.0;

    void validate() const;
    double level(std::size_t n) const;

    bool operator==(const TruncationRule&) const = default;
};

struct ZeroResidual {
    bool operator==(const ZeroResidual&) const = default;
};
struct ExponentialResidual {
    double rate = 1.0;
    bool operator==(const ExponentialResidual&) const = default;
};
struct UniformResidual {
    double upper = 1.0;
    bool operator==(const UniformResidual&) const = default;
};

/// Law of the nonnegative overshoot R_j added beyond the truncation level.
struct ResidualSpec {
    std::variant<ZeroResidual, ExponentialResidual, UniformResidual> law = ZeroResidual{};

    static ResidualSpec zero() { return {}; }
    static ResidualSpec exponential(double rate) { return {ExponentialResidual{rate}}; }
    static ResidualSpec uniform(double upper) { return {UniformResidual{upper}}; }

    void validate() const;
    double mean() const;
    /// Almost-sure upper bound, when the law has one.
    std::optional<double> upper_bound() const;
    double sample(Rng& rng) const;

    bool operator==(const ResidualSpec&) const = default;
};

struct TailModelConfig {
    HeavyTailSpec heavy;
    TruncationRule truncation;
    ResidualSpec residual;
    std::size_t dimension = 1;

    void validate() const;
    double truncation_level(std::size_t n) const { return truncation.level(n); }

    bool operator==(const TailModelConfig&) const = default;
};

struct Regime {
    enum class Kind { Soft, Hard, Intermediate };

    Kind kind = Kind::Soft;
    /// Limit of n P(|H| > M_n); set only for Intermediate.
    double delta = 0.0;

    bool operator==(const Regime&) const = default;
};

std::string to_string(Regime::Kind kind);

/// n i.i.d. draws of the radial Pareto vector. Deterministic given seed.
Points sample_heavy(std::size_t n, const HeavyTailSpec& spec, std::uint64_t seed);

/// Applies the truncation mechanism row by row: rows with norm <= m are kept,
/// longer rows are rescaled to norm m + R_j with a fresh residual draw.
Points truncate_row(const Points& h, double m, const ResidualSpec& residual, std::uint64_t seed);

/// One row of the triangular array: sample_heavy followed by truncate_row at M_n.
Points generate_row(const TailModelConfig& config, std::size_t n, std::uint64_t seed);

/// Scalar series for d = 1 configurations.
std::vector<double> generate_series(const TailModelConfig& config, std::size_t n, std::uint64_t seed);

/// Classifies by the sign of 1 - alpha * rho in n P(|H| > c n^rho) = (c/scale)^{-alpha} n^{1 - alpha rho}.
/// |1 - alpha rho| <= 1e-12 counts as the intermediate regime.
Regime classify_regime(const TailModelConfig& config);

/// Pareto quantile scale b(n) = scale * n^{1/alpha}.
double scaling_bn(std::size_t n, const HeavyTailSpec& spec);

/// [n M_n^2 P(|H| > M_n)]^{1/2}.
double scaling_Bn(std::size_t n, const TailModelConfig& config);

/// E[|H|^q 1(|H| <= level)] in closed form.
double truncated_radial_moment(const HeavyTailSpec& spec, double q, double level);

/// E X_{n1}, exact under the radial Pareto model.
std::vector<double> truncated_mean(const TailModelConfig& config, std::size_t n);

struct StableParams {
    double alpha = 2.0;
    double beta = 0.0;
    double sigma = 1.0;
    double mu = 0.0;
};

/// C_alpha = (Gamma(1 - alpha) cos(pi alpha / 2))^{-1}, 2/pi at alpha = 1.
double stable_tail_constant(double alpha);

/// Chambers-Mallows-Stuck draws from S_alpha(sigma, beta, mu).
std::vector<double> sample_stable(std::size_t n, const StableParams& params, std::uint64_t seed);

}  // namespace trunctail
