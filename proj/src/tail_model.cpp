#include "trunctail/tail_model.hpp"

#include "kernels.hpp"
#include "trunctail/errors.hpp"
#include "trunctail/numerics.hpp"
#include "trunctail/random.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace trunctail {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kPi = boost::math::constants::pi<double>();

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

Points::Points(std::size_t rows, std::size_t dim) : dim_(dim), data_(rows * dim, 0.0)
{
    if (dim == 0) {
        throw ConfigError("Points: dimension must be positive");
    }
}

Points Points::from_scalars(std::vector<double> values)
{
    Points p;
    p.dim_ = 1;
    p.data_ = std::move(values);
    return p;
}

double Points::norm(std::size_t i) const noexcept
{
    if (dim_ == 1) {
        return std::abs(data_[i]);
    }
    double ss = 0.0;
    for (double v : row(i)) {
        ss += v * v;
    }
    return std::sqrt(ss);
}

SpectralMeasure::SpectralMeasure(std::vector<SpectralAtom> atoms) : atoms_(std::move(atoms))
{
    if (atoms_.empty()) {
        throw ConfigError("spectral measure needs at least one atom");
    }
    const std::size_t d = atoms_.front().direction.size();
    if (d == 0) {
        throw ConfigError("spectral atom with empty direction");
    }
    CompensatedSum mass;
    for (const auto& atom : atoms_) {
        if (atom.direction.size() != d) {
            throw ConfigError("spectral atoms have mixed dimensions");
        }
        double ss = 0.0;
        for (double v : atom.direction) {
            if (!std::isfinite(v)) {
                throw ConfigError("spectral direction is not finite");
            }
            ss += v * v;
        }
        if (std::abs(std::sqrt(ss) - 1.0) > kUnitTol) {
            throw ConfigError("spectral direction is not a unit vector");
        }
        if (!std::isfinite(atom.weight) || atom.weight < 0.0) {
            throw ConfigError("spectral weight must be finite and nonnegative");
        }
        mass.add(atom.weight);
    }
    total_mass_ = mass.value();
    if (!(total_mass_ > 0.0)) {
        throw ConfigError("spectral measure has zero mass");
    }
}

SpectralMeasure SpectralMeasure::symmetric_line(double mass)
{
    return SpectralMeasure({{{1.0}, mass / 2.0}, {{-1.0}, mass / 2.0}});
}

SpectralMeasure SpectralMeasure::positive_line(double mass)
{
    return SpectralMeasure({{{1.0}, mass}});
}

SpectralMeasure SpectralMeasure::normalized() const
{
    return scaled(1.0 / total_mass_);
}

SpectralMeasure SpectralMeasure::scaled(double factor) const
{
    if (!positive_finite(factor)) {
        throw ConfigError("spectral scaling factor must be positive");
    }
    auto atoms = atoms_;
    for (auto& atom : atoms) {
        atom.weight *= factor;
    }
    return SpectralMeasure(std::move(atoms));
}

std::vector<double> SpectralMeasure::first_moment() const
{
    std::vector<double> m(dimension(), 0.0);
    for (const auto& atom : atoms_) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i] += atom.weight * atom.direction[i];
        }
    }
    return m;
}

void HeavyTailSpec::validate() const
{
    if (!positive_finite(alpha)) {
        throw ConfigError("alpha must be finite and positive");
    }
    if (!positive_finite(scale)) {
        throw ConfigError("scale must be finite and positive");
    }
    if (std::abs(spectral.total_mass() - 1.0) > kUnitTol) {
        throw ConfigError("spectral weights of the heavy-tail law must sum to 1");
    }
}

double HeavyTailSpec::survival(double level) const
{
    if (level <= scale) {
        return 1.0;
    }
    return std::pow(level / scale, -alpha);
}

void TruncationRule::validate() const
{
    if (!positive_finite(coefficient)) {
        throw ConfigError("truncation coefficient must be finite and positive");
    }
    if (!std::isfinite(exponent) || exponent < 0.0) {
        throw ConfigError("truncation exponent must be finite and nonnegative");
    }
}

double TruncationRule::level(std::size_t n) const
{
    return coefficient * std::pow(static_cast<double>(n), exponent);
}

void ResidualSpec::validate() const
{
    if (const auto* e = std::get_if<ExponentialResidual>(&law); e && !positive_finite(e->rate)) {
        throw ConfigError("exponential residual rate must be positive");
    }
    if (const auto* u = std::get_if<UniformResidual>(&law); u && !positive_finite(u->upper)) {
        throw ConfigError("uniform residual upper bound must be positive");
    }
}

double ResidualSpec::mean() const
{
    if (const auto* e = std::get_if<ExponentialResidual>(&law)) {
        return 1.0 / e->rate;
    }
    if (const auto* u = std::get_if<UniformResidual>(&law)) {
        return u->upper / 2.0;
    }
    return 0.0;
}

std::optional<double> ResidualSpec::upper_bound() const
{
    if (std::holds_alternative<ZeroResidual>(law)) {
        return 0.0;
    }
    if (const auto* u = std::get_if<UniformResidual>(&law)) {
        return u->upper;
    }
    return std::nullopt;
}

double ResidualSpec::sample(Rng& rng) const
{
    if (const auto* e = std::get_if<ExponentialResidual>(&law)) {
        return rng.exponential() / e->rate;
    }
    if (const auto* u = std::get_if<UniformResidual>(&law)) {
        return u->upper * rng.uniform();
    }
    return 0.0;
}

void TailModelConfig::validate() const
{
    heavy.validate();
    truncation.validate();
    residual.validate();
    if (dimension == 0) {
        throw ConfigError("dimension must be positive");
    }
    if (heavy.spectral.dimension() != dimension) {
        throw ConfigError("spectral atoms do not live in R^" + std::to_string(dimension));
    }
}

std::string to_string(Regime::Kind kind)
{
    switch (kind) {
    case Regime::Kind::Soft: return "soft";
    case Regime::Kind::Hard: return "hard";
    case Regime::Kind::Intermediate: return "intermediate";
    }
    return "unknown";
}

Points sample_heavy(std::size_t n, const HeavyTailSpec& spec, std::uint64_t seed)
{
    if (n == 0) {
        throw ArgumentError("sample_heavy: n must be at least 1");
    }
    spec.validate();

    const auto& atoms = spec.spectral.atoms();
    const std::size_t d = spec.spectral.dimension();
    std::vector<double> cumulative(atoms.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        acc += atoms[k].weight;
        cumulative[k] = acc;
    }
    for (double& c : cumulative) {
        c /= acc;
    }
    cumulative.back() = 1.0;

    Rng rng(seed);
    std::vector<double> radius(n);
    for (double& u : radius) {
        u = rng.uniform();
    }
    detail::pareto_radii(radius, spec.alpha, spec.scale);

    Points out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = 0;
        if (atoms.size() > 1) {
            const double u = rng.uniform();
            k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                         cumulative.begin());
            k = std::min(k, atoms.size() - 1);
        }
        auto row = out.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = radius[i] * atoms[k].direction[j];
        }
    }
    return out;
}

Points truncate_row(const Points& h, double m, const ResidualSpec& residual, std::uint64_t seed)
{
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw ConfigError("truncation level must be finite and positive");
    }
    residual.validate();

    Rng rng(seed);
    Points out = h;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double norm = out.norm(i);
        if (norm <= m) {
            continue;
        }
        const double factor = (m + residual.sample(rng)) / norm;
        for (double& v : out.row(i)) {
            v *= factor;
        }
    }
    return out;
}

Points generate_row(const TailModelConfig& config, std::size_t n, std::uint64_t seed)
{
    config.validate();
    const Points h = sample_heavy(n, config.heavy, derive_seed(seed, 0, 0));
    return truncate_row(h, config.truncation_level(n), config.residual, derive_seed(seed, 0, 1));
}

std::vector<double> generate_series(const TailModelConfig& config, std::size_t n, std::uint64_t seed)
{
    if (config.dimension != 1) {
        throw ConfigError("generate_series needs a one-dimensional configuration");
    }
    return std::move(generate_row(config, n, seed).values());
}

Regime classify_regime(const TailModelConfig& config)
{
    config.validate();
    const double alpha = config.heavy.alpha;
    const double exponent = 1.0 - alpha * config.truncation.exponent;
    if (std::abs(exponent) <= kUnitTol) {
        const double delta = std::pow(config.heavy.scale / config.truncation.coefficient, alpha);
        return {Regime::Kind::Intermediate, delta};
    }
    return {exponent < 0.0 ? Regime::Kind::Soft : Regime::Kind::Hard, 0.0};
}

double scaling_bn(std::size_t n, const HeavyTailSpec& spec)
{
    if (n == 0) {
        throw ArgumentError("scaling_bn: n must be at least 1");
    }
    return spec.scale * std::pow(static_cast<double>(n), 1.0 / spec.alpha);
}

double scaling_Bn(std::size_t n, const TailModelConfig& config)
{
    if (n == 0) {
        throw ArgumentError("scaling_Bn: n must be at least 1");
    }
    const double m = config.truncation_level(n);
    return m * std::sqrt(static_cast<double>(n) * config.heavy.survival(m));
}

double truncated_radial_moment(const HeavyTailSpec& spec, double q, double level)
{
    const double a = spec.alpha;
    const double x0 = spec.scale;
    if (level <= x0) {
        return 0.0;
    }
    // alpha x0^alpha * int_{x0}^{level} x^{q-alpha-1} dx
    const double e = q - a;
    if (std::abs(e) < 1e-12) {
        return a * std::pow(x0, a) * std::log(level / x0);
    }
    const double t = std::log(level / x0);
    return a * std::pow(x0, q) * std::expm1(e * t) / e;
}

std::vector<double> truncated_mean(const TailModelConfig& config, std::size_t n)
{
    config.validate();
    const double m = config.truncation_level(n);
    const double radial = truncated_radial_moment(config.heavy, 1.0, m) +
                          config.heavy.survival(m) * (m + config.residual.mean());
    auto mean = config.heavy.spectral.first_moment();
    for (double& v : mean) {
        v *= radial;
    }
    return mean;
}

double stable_tail_constant(double alpha)
{
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw ArgumentError("stable_tail_constant: alpha must lie in (0, 2)");
    }
    if (alpha == 1.0) {
        return 2.0 / kPi;
    }
    return 1.0 / (std::tgamma(1.0 - alpha) * std::cos(kPi * alpha / 2.0));
}

std::vector<double> sample_stable(std::size_t n, const StableParams& p, std::uint64_t seed)
{
    if (!(p.alpha > 0.0 && p.alpha <= 2.0)) {
        throw ConfigError("stable alpha must lie in (0, 2]");
    }
    if (!(p.beta >= -1.0 && p.beta <= 1.0)) {
        throw ConfigError("stable beta must lie in [-1, 1]");
    }
    if (!positive_finite(p.sigma) || !std::isfinite(p.mu)) {
        throw ConfigError("stable sigma must be positive and mu finite");
    }

    Rng rng(seed);
    std::vector<double> out(n);
    const double a = p.alpha;
    if (a == 1.0) {
        const double drift = 2.0 / kPi * p.beta * p.sigma * std::log(p.sigma);
        for (double& x : out) {
            const double v = kPi * (rng.uniform() - 0.5);
            const double w = rng.exponential();
            const double h = kPi / 2.0 + p.beta * v;
            const double z = 2.0 / kPi * (h * std::tan(v) - p.beta * std::log(kPi / 2.0 * w * std::cos(v) / h));
            x = p.sigma * z + drift + p.mu;
        }
        return out;
    }

    const double t = p.beta * std::tan(kPi * a / 2.0);
    const double b = std::atan(t) / a;
    const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * a));
    for (double& x : out) {
        const double v = kPi * (rng.uniform() - 0.5);
        const double w = rng.exponential();
        const double z = s * std::sin(a * (v + b)) / std::pow(std::cos(v), 1.0 / a) *
                         std::pow(std::cos(v - a * (v + b)) / w, (1.0 - a) / a);
        x = p.sigma * z + p.mu;
    }
    return out;
}

}  // namespace trunctail
