#include "trunctail/ztheta.hpp"

#include "kernels.hpp"
#include "trunctail/errors.hpp"
#include "trunctail/numerics.hpp"
#include "trunctail/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trunctail {

namespace {

constexpr std::uint64_t kZStream = 0x5a;
constexpr std::size_t kBlock = 2048;

void check_p(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("level p must lie in (0, 1)");
    }
}

// int_0^1 e^{g (1 - x)} x^{-theta} dx after u = x^{1 - theta}.
double shifted_integral(double theta, double g)
{
    const double q = 1.0 / (1.0 - theta);
    auto f = [=](double u) { return std::exp(g * (1.0 - std::pow(u, q))) * q; };
    return integrate(f, 0.0, 1.0, 1e-10).value;
}

// int_0^1 e^{-g x} x^{-theta} dx after the same substitution.
double damped_integral(double theta, double g)
{
    const double q = 1.0 / (1.0 - theta);
    auto f = [=](double u) { return std::exp(-g * std::pow(u, q)) * q; };
    return integrate(f, 0.0, 1.0, 1e-10).value;
}

}  // namespace

std::string source_name(const QuantileSource& source)
{
    return std::holds_alternative<MonteCarloSource>(source) ? "monte_carlo" : "markov_bound";
}

bool ZThetaQuantile::truncation_suspect() const
{
    const auto* mc = std::get_if<MonteCarloSource>(&source);
    return mc != nullptr && mc->tail_mean > 0.01 * value;
}

void check_theta(double theta)
{
    if (!(theta > 0.0 && theta < 1.0)) {
        throw ArgumentError("theta must lie in (0, 1), got " + std::to_string(theta));
    }
}

ZDraw simulate_Z_draw(double theta, std::size_t n_terms, std::uint64_t seed)
{
    check_theta(theta);
    if (n_terms == 0) {
        throw ArgumentError("simulate_Z: n_terms must be at least 1");
    }
    thread_local std::vector<double> scratch(kBlock);
    Rng rng(seed);
    const auto d = detail::z_series(rng, n_terms, 1.0 / theta, scratch);
    return {d.value, d.last_term, d.tail_mean};
}

double simulate_Z(double theta, std::size_t n_terms, std::uint64_t seed)
{
    return simulate_Z_draw(theta, n_terms, seed).value;
}

std::vector<ZDraw> simulate_Z_batch(double theta, std::size_t n_terms, std::size_t n_reps, std::uint64_t seed,
                                    unsigned workers)
{
    check_theta(theta);
    if (n_terms == 0) {
        throw ArgumentError("simulate_Z: n_terms must be at least 1");
    }
    std::vector<ZDraw> out(n_reps);
    parallel_for(
        n_reps, [&](std::size_t i) { out[i] = simulate_Z_draw(theta, n_terms, derive_seed(seed, kZStream, i)); },
        workers);
    return out;
}

double upper_quantile(std::span<const double> ascending, double p)
{
    check_p(p);
    if (ascending.empty()) {
        throw ArgumentError("quantile of an empty sample");
    }
    const double n = static_cast<double>(ascending.size());
    const long long rank = std::clamp<long long>(ceil_guarded((1.0 - p) * n), 1,
                                                 static_cast<long long>(ascending.size()));
    return ascending[static_cast<std::size_t>(rank - 1)];
}

std::vector<ZThetaQuantile> mc_quantiles(double theta, std::span<const double> ps, std::size_t n_terms,
                                         std::size_t n_reps, std::uint64_t seed, unsigned workers)
{
    check_theta(theta);
    if (n_reps < 100) {
        throw ArgumentError("mc_quantile needs at least 100 replicates");
    }
    for (double p : ps) {
        check_p(p);
    }
    const auto draws = simulate_Z_batch(theta, n_terms, n_reps, seed, workers);
    std::vector<double> values(draws.size());
    std::vector<double> tails(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        values[i] = draws[i].value;
        tails[i] = draws[i].tail_mean;
    }
    std::sort(values.begin(), values.end());
    const double tail_mean = pairwise_sum(tails) / static_cast<double>(tails.size());

    std::vector<ZThetaQuantile> out;
    out.reserve(ps.size());
    for (double p : ps) {
        out.push_back({theta, p, upper_quantile(values, p), MonteCarloSource{n_terms, n_reps, seed, tail_mean}});
    }
    return out;
}

ZThetaQuantile mc_quantile(double theta, double p, std::size_t n_terms, std::size_t n_reps, std::uint64_t seed,
                           unsigned workers)
{
    const double ps[] = {p};
    return mc_quantiles(theta, ps, n_terms, n_reps, seed, workers).front();
}

double laplace_denominator(double theta, double gamma)
{
    check_theta(theta);
    if (!std::isfinite(gamma)) {
        throw ArgumentError("Laplace argument must be finite");
    }
    if (gamma <= 0.0) {
        // e^gamma folded into the integrand keeps it bounded by 1
        return 1.0 + gamma * shifted_integral(theta, gamma);
    }
    return 1.0 + gamma * std::exp(gamma) * damped_integral(theta, gamma);
}

double laplace_transform(double theta, double gamma)
{
    check_theta(theta);
    if (gamma == 0.0) {
        return 1.0;
    }
    if (gamma < 0.0) {
        const double d = laplace_denominator(theta, gamma);
        if (!(d > 0.0)) {
            throw DomainError("Laplace transform of Z(theta) diverges at gamma=" + std::to_string(gamma));
        }
        return 1.0 / d;
    }
    const double e = std::exp(-gamma);
    return e / (e + gamma * damped_integral(theta, gamma));
}

double gamma0(double theta)
{
    check_theta(theta);
    auto d = [theta](double g) { return laplace_denominator(theta, g); };
    double hi = 0.0;
    double lo = -0.01;
    while (d(lo) > 0.0) {
        hi = lo;
        lo *= 2.0;
        if (lo < -1e6) {
            throw NumericError("gamma0: no sign change found");
        }
    }
    return bisect(d, lo, hi, 1e-10);
}

double riemann_upper_integral(double theta, double r, std::size_t k_grid)
{
    check_theta(theta);
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw ArgumentError("r must be positive");
    }
    if (k_grid < 2) {
        throw ArgumentError("k_grid must be at least 2");
    }
    const double k = static_cast<double>(k_grid);
    // first cell: e^{r/k} int_0^{1/k} x^{-theta} dx
    CompensatedSum sum;
    sum.add(std::exp(r / k) * std::pow(k, theta - 1.0) / (1.0 - theta));
    CompensatedSum cells;
    for (std::size_t j = 2; j <= k_grid; ++j) {
        const double jd = static_cast<double>(j);
        cells.add(std::exp(r * jd / k) * std::pow((jd - 1.0) / k, -theta));
    }
    sum.add(cells.value() / k);
    return sum.value();
}

double mgf_bound(double theta, double r, std::size_t k_grid)
{
    const double denom = 1.0 - r * std::exp(-r) * riemann_upper_integral(theta, r, k_grid);
    if (!(denom > 0.0)) {
        throw DomainError("mgf bound: r=" + std::to_string(r) + " is too large for theta=" + std::to_string(theta));
    }
    return 1.0 / denom;
}

ZThetaQuantile markov_quantile(double theta, double p, double r, std::size_t k_grid)
{
    check_p(p);
    const double m = mgf_bound(theta, r, k_grid);
    return {theta, p, (std::log(m) - std::log(p)) / r, MarkovSource{r, k_grid}};
}

std::string to_string(CriticalPolicy policy)
{
    switch (policy) {
    case CriticalPolicy::Auto: return "auto";
    case CriticalPolicy::MonteCarlo: return "monte_carlo";
    case CriticalPolicy::MarkovBound: return "markov_bound";
    }
    return "auto";
}

CriticalPolicy parse_policy(const std::string& name)
{
    if (name == "auto") {
        return CriticalPolicy::Auto;
    }
    if (name == "monte_carlo" || name == "mc") {
        return CriticalPolicy::MonteCarlo;
    }
    if (name == "markov_bound" || name == "markov") {
        return CriticalPolicy::MarkovBound;
    }
    throw ArgumentError("unknown critical-value policy '" + name + "'");
}

CriticalPolicy resolve_policy(double theta, CriticalPolicy policy)
{
    if (policy != CriticalPolicy::Auto) {
        return policy;
    }
    // ratios such as 1.05 / 1.5 land a few ulps above 0.7
    return theta <= 0.7 + 1e-9 ? CriticalPolicy::MonteCarlo : CriticalPolicy::MarkovBound;
}

ZThetaQuantile critical_value(double theta, double p, CriticalPolicy policy, const CriticalBudget& budget)
{
    check_theta(theta);
    if (resolve_policy(theta, policy) == CriticalPolicy::MonteCarlo) {
        return mc_quantile(theta, p, budget.n_terms, budget.n_reps, budget.seed, budget.workers);
    }
    return markov_quantile(theta, p, budget.r, budget.k_grid);
}

}  // namespace trunctail
