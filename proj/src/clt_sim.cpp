#include "trunctail/clt_sim.hpp"

#include "trunctail/errors.hpp"
#include "trunctail/numerics.hpp"
#include "trunctail/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trunctail {

namespace {

constexpr std::uint64_t kSumStream = 0x53;
constexpr std::uint64_t kOracleStream = 0x4f;

// int_0^xmax {e^{ixu} - 1 - ixu 1(x <= 1)} x^{-1-alpha} dx
std::complex<double> jump_integral(double u, double alpha, double xmax)
{
    if (u == 0.0) {
        return {0.0, 0.0};
    }
    constexpr double tol = 1e-9;
    const double inner = std::min(xmax, 1.0);
    const double p = 2.0 - alpha;
    // x = y^{1/(2-alpha)} turns x^{-1-alpha} dx into x^{-2} dy / (2 - alpha)
    auto x_of = [p](double y) { return std::pow(y, 1.0 / p); };
    auto re = [&](double y) {
        const double x = x_of(y);
        if (x == 0.0) {
            return -u * u / 2.0 / p;
        }
        const double h = std::sin(x * u / 2.0);
        return -2.0 * h * h / (x * x) / p;
    };
    auto im = [&](double y) {
        const double x = x_of(y);
        const double z = x * u;
        double g;
        if (std::abs(z) < 1.0) {
            // sin z - z by its series; the direct difference cancels badly
            const double z2 = z * z;
            double term = -z * z2 / 6.0;
            g = term;
            for (int k = 2; std::abs(term) > 1e-18 * std::abs(g); ++k) {
                term *= -z2 / ((2.0 * k) * (2.0 * k + 1.0));
                g += term;
            }
        } else {
            g = std::sin(z) - z;
        }
        return x == 0.0 ? 0.0 : g / (x * x) / p;
    };
    const double ymax = std::pow(inner, p);
    std::complex<double> out{integrate(re, 0.0, ymax, tol).value, integrate(im, 0.0, ymax, tol).value};
    if (xmax > 1.0) {
        auto re_out = [&](double x) { return (std::cos(x * u) - 1.0) * std::pow(x, -1.0 - alpha); };
        auto im_out = [&](double x) { return std::sin(x * u) * std::pow(x, -1.0 - alpha); };
        out += std::complex<double>{integrate(re_out, 1.0, xmax, tol).value, integrate(im_out, 1.0, xmax, tol).value};
    }
    return out;
}

std::vector<double> column(const Points& p, std::size_t k)
{
    std::vector<double> v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        v[i] = p.row(i)[k];
    }
    return v;
}

}  // namespace

std::string to_string(Centering c)
{
    switch (c) {
    case Centering::None: return "none";
    case Centering::TheoreticalMean: return "theoretical_mean";
    case Centering::EmpiricalMean: return "empirical_mean";
    }
    return "none";
}

std::string to_string(Scaling s)
{
    return s == Scaling::Bn ? "Bn" : "bn";
}

Centering parse_centering(const std::string& name)
{
    if (name == "none") {
        return Centering::None;
    }
    if (name == "theoretical_mean") {
        return Centering::TheoreticalMean;
    }
    if (name == "empirical_mean") {
        return Centering::EmpiricalMean;
    }
    throw ArgumentError("unknown centering '" + name + "'");
}

Scaling parse_scaling(const std::string& name)
{
    if (name == "Bn") {
        return Scaling::Bn;
    }
    if (name == "bn") {
        return Scaling::bn;
    }
    throw ArgumentError("unknown scaling '" + name + "' (expected Bn or bn)");
}

void SumExperiment::validate() const
{
    config.validate();
    if (n == 0) {
        throw ArgumentError("row length n must be positive");
    }
    if (reps < 100) {
        throw ArgumentError("a sum experiment needs at least 100 replicates");
    }
    if (scaling == Scaling::bn && config.heavy.alpha >= 2.0) {
        throw ArgumentError("b_n scaling needs alpha < 2");
    }
}

void StableLimitSpec::validate() const
{
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw ConfigError("stable limit needs alpha in (0, 2)");
    }
    if (gamma_shift.size() != spectral.dimension()) {
        throw ConfigError("stable limit shift and spectral atoms differ in dimension");
    }
}

Points run_sums(const SumExperiment& exp)
{
    exp.validate();
    const auto& cfg = exp.config;
    const std::size_t d = cfg.dimension;
    const double nd = static_cast<double>(exp.n);

    double norm = 0.0;
    std::vector<double> center(d, 0.0);
    if (exp.scaling == Scaling::Bn) {
        norm = scaling_Bn(exp.n, cfg);
        if (exp.centering == Centering::TheoreticalMean) {
            center = truncated_mean(cfg, exp.n);
            for (double& c : center) {
                c *= nd;
            }
        }
    } else {
        norm = scaling_bn(exp.n, cfg.heavy);
        if (exp.centering == Centering::TheoreticalMean) {
            const double radial = truncated_radial_moment(cfg.heavy, 1.0, norm);
            center = cfg.heavy.spectral.first_moment();
            for (double& c : center) {
                c *= nd * radial;
            }
        }
    }

    Points sums(exp.reps, d);
    parallel_for(
        exp.reps,
        [&](std::size_t i) {
            const Points row = generate_row(cfg, exp.n, derive_seed(exp.seed, kSumStream, i));
            auto out = sums.row(i);
            if (d == 1) {
                out[0] = pairwise_sum(row.values());
            } else {
                std::vector<CompensatedSum> acc(d);
                for (std::size_t j = 0; j < row.size(); ++j) {
                    const auto r = row.row(j);
                    for (std::size_t k = 0; k < d; ++k) {
                        acc[k].add(r[k]);
                    }
                }
                for (std::size_t k = 0; k < d; ++k) {
                    out[k] = acc[k].value();
                }
            }
            for (std::size_t k = 0; k < d; ++k) {
                out[k] = (out[k] - center[k]) / norm;
            }
        },
        exp.workers);

    if (exp.centering == Centering::EmpiricalMean) {
        for (std::size_t k = 0; k < d; ++k) {
            const auto col = column(sums, k);
            const double mean = pairwise_sum(col) / static_cast<double>(col.size());
            for (std::size_t i = 0; i < sums.size(); ++i) {
                sums.row(i)[k] -= mean;
            }
        }
    }
    return sums;
}

Matrix gaussian_covariance(double alpha, const SpectralMeasure& spectral)
{
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw ArgumentError("gaussian_covariance needs alpha in (0, 2)");
    }
    const std::size_t d = spectral.dimension();
    const double factor = 2.0 / (2.0 - alpha) / spectral.total_mass();
    Matrix cov(d, std::vector<double>(d, 0.0));
    for (const auto& atom : spectral.atoms()) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                cov[i][j] += factor * atom.weight * atom.direction[i] * atom.direction[j];
            }
        }
    }
    return cov;
}

StableLimitSpec stable_limit(const HeavyTailSpec& heavy)
{
    heavy.validate();
    StableLimitSpec spec;
    spec.alpha = heavy.alpha;
    spec.spectral = heavy.spectral.normalized().scaled(heavy.alpha);
    spec.gamma_shift.assign(heavy.spectral.dimension(), 0.0);
    spec.validate();
    return spec;
}

std::complex<double> rho_delta_cf(std::span<const double> t, double delta, const StableLimitSpec& limit)
{
    limit.validate();
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ArgumentError("rho_delta_cf needs delta > 0");
    }
    const std::size_t d = limit.spectral.dimension();
    if (t.size() != d) {
        throw ArgumentError("rho_delta_cf: argument dimension mismatch");
    }
    const double a = limit.alpha;
    const double mass = limit.spectral.total_mass();
    const double xmax = std::pow(delta, -1.0 / a) * std::pow(mass / a, 1.0 / a);

    // shift: gamma - int_{xmax}^inf x^{-alpha} 1(x <= 1) dx * int s Gamma(ds)
    double cut = 0.0;
    if (xmax < 1.0) {
        cut = a == 1.0 ? -std::log(xmax) : (1.0 - std::pow(xmax, 1.0 - a)) / (1.0 - a);
    }
    const auto drift = limit.spectral.first_moment();
    double shift = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        shift += t[k] * (limit.gamma_shift[k] - cut * drift[k]);
    }

    std::complex<double> exponent{0.0, shift};
    for (const auto& atom : limit.spectral.atoms()) {
        double u = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            u += t[k] * atom.direction[k];
        }
        const std::complex<double> poisson = delta / mass * (std::exp(std::complex<double>{0.0, xmax * u}) - 1.0);
        exponent += atom.weight * (jump_integral(u, a, xmax) + poisson);
    }
    return std::exp(exponent);
}

StableParams stable_oracle(const HeavyTailSpec& heavy)
{
    heavy.validate();
    if (heavy.spectral.dimension() != 1) {
        throw ArgumentError("stable_oracle is scalar only");
    }
    const double a = heavy.alpha;
    if (!(a > 0.0 && a < 2.0)) {
        throw ArgumentError("stable_oracle needs alpha in (0, 2)");
    }
    const double m = heavy.spectral.normalized().first_moment()[0];
    if (a == 1.0 && std::abs(m) > 1e-12) {
        throw ArgumentError("stable_oracle: asymmetric alpha = 1 is not supported");
    }
    StableParams p;
    p.alpha = a;
    p.beta = std::clamp(m, -1.0, 1.0);
    p.sigma = std::pow(stable_tail_constant(a), -1.0 / a);
    // the truncated-at-b_n centering moves the strictly stable (a < 1) or
    // mean-zero (a > 1) law by -int_{|x|<=1} x nu(dx) or +int_{|x|>1} x nu(dx)
    if (a < 1.0) {
        p.mu = -m * a / (1.0 - a);
    } else if (a > 1.0) {
        p.mu = m * a / (a - 1.0);
    }
    return p;
}

NormalityCheck normality_check(const Points& values, std::span<const double> variances, double threshold)
{
    if (values.size() < 1000) {
        throw ArgumentError("normality_check needs at least 1000 values");
    }
    if (variances.size() != values.dim()) {
        throw ArgumentError("normality_check: one variance per coordinate");
    }
    NormalityCheck out;
    out.threshold = threshold;
    out.pass = true;
    for (std::size_t k = 0; k < values.dim(); ++k) {
        const auto ks = ks_normal(column(values, k), 0.0, std::sqrt(variances[k]));
        out.statistic.push_back(ks.statistic);
        out.p_value.push_back(ks.p_value);
        out.pass = out.pass && ks.p_value >= threshold;
    }
    return out;
}

NormalityCheck normality_check(std::span<const double> values, double variance, double threshold)
{
    const double v[] = {variance};
    return normality_check(Points::from_scalars({values.begin(), values.end()}), v, threshold);
}

double karamata_ratio(std::size_t n, const TailModelConfig& config)
{
    const double m = config.truncation_level(n);
    const double b = scaling_Bn(n, config);
    return static_cast<double>(n) * truncated_radial_moment(config.heavy, 2.0, m) / (b * b);
}

double karamata_limit(double alpha)
{
    return alpha / (2.0 - alpha);
}

ExperimentDiagnostics run_experiment(const SumExperiment& exp, Points* sums_out)
{
    const Points sums = run_sums(exp);
    ExperimentDiagnostics diag;
    diag.regime = classify_regime(exp.config);
    for (std::size_t k = 0; k < sums.dim(); ++k) {
        const auto m = sample_moments(column(sums, k));
        diag.mean.push_back(m.mean);
        diag.variance.push_back(m.variance);
        diag.std_error.push_back(m.std_error);
    }
    const double alpha = exp.config.heavy.alpha;
    if (diag.regime.kind == Regime::Kind::Hard && exp.scaling == Scaling::Bn && alpha < 2.0) {
        auto cov = gaussian_covariance(alpha, exp.config.heavy.spectral);
        std::vector<double> var(cov.size());
        for (std::size_t k = 0; k < cov.size(); ++k) {
            var[k] = cov[k][k];
        }
        if (sums.size() >= 1000) {
            diag.normality = normality_check(sums, var);
        }
        diag.target_covariance = std::move(cov);
        diag.karamata_ratio = karamata_ratio(exp.n, exp.config);
    }
    if (diag.regime.kind == Regime::Kind::Soft && exp.scaling == Scaling::bn && exp.config.dimension == 1 &&
        exp.centering == Centering::TheoreticalMean) {
        const auto params = stable_oracle(exp.config.heavy);
        const auto oracle = sample_stable(exp.reps, params, derive_seed(exp.seed, kOracleStream, 0));
        diag.stable_ks = ks_two_sample(sums.values(), oracle);
    }
    if (sums_out != nullptr) {
        *sums_out = sums;
    }
    return diag;
}

std::string sums_csv(const Points& sums)
{
    std::ostringstream os;
    os.precision(17);
    for (std::size_t k = 0; k < sums.dim(); ++k) {
        os << (k ? "," : "") << 'x' << k;
    }
    os << '\n';
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const auto r = sums.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) {
            os << (k ? "," : "") << r[k];
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace trunctail
