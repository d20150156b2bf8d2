#include "trunctail/hill.hpp"

#include "trunctail/errors.hpp"
#include "trunctail/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

namespace trunctail {

namespace {

void check_level(double v, const char* name)
{
    if (!(v > 0.0 && v < 1.0)) {
        throw ArgumentError(std::string(name) + " must lie in (0, 1)");
    }
}

}  // namespace

OrderStatistics::OrderStatistics(std::span<const double> sample) : desc_(sample.begin(), sample.end())
{
    if (desc_.empty()) {
        throw ArgumentError("Hill estimation needs a nonempty sample");
    }
    for (double v : desc_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ArgumentError("Hill estimation needs finite nonnegative values (pass |X|)");
        }
    }
    std::sort(desc_.begin(), desc_.end(), std::greater<>());
}

HillEstimate OrderStatistics::hill(std::size_t k) const
{
    const std::size_t n = desc_.size();
    if (k < 1 || k > n) {
        throw ArgumentError("Hill statistic: k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    const double xk = desc_[k - 1];
    if (!(xk > 0.0)) {
        throw DegenerateSampleError("Hill statistic: X_(k) is zero for k=" + std::to_string(k));
    }
    const double log_xk = std::log(xk);
    CompensatedSum sum;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        sum.add(std::log(desc_[i]) - log_xk);
    }
    return {sum.value() / static_cast<double>(k), k, std::nullopt, std::nullopt, n};
}

std::size_t OrderStatistics::random_k(double gamma, double beta) const
{
    check_level(gamma, "gamma");
    // beta = 1 is allowed: k is then the exceedance count itself
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw ArgumentError("beta must lie in (0, 1]");
    }
    const double top = desc_.front();
    if (!(top > 0.0)) {
        throw DegenerateSampleError("random k: sample maximum is zero");
    }
    const double threshold = gamma * top;
    // descending order: count of leading values strictly above the threshold
    const auto it = std::partition_point(desc_.begin(), desc_.end(), [&](double v) { return v > threshold; });
    const double count = static_cast<double>(it - desc_.begin());
    const double n = static_cast<double>(desc_.size());
    const long long k = floor_guarded(n * std::pow(count / n, beta));
    return static_cast<std::size_t>(std::clamp<long long>(k, 1, static_cast<long long>(desc_.size())));
}

HillEstimate OrderStatistics::hill_random_k(double gamma, double beta) const
{
    HillEstimate est = hill(random_k(gamma, beta));
    est.beta = beta;
    est.gamma = gamma;
    return est;
}

HillEstimate hill_statistic(std::span<const double> sample, std::size_t k)
{
    return OrderStatistics(sample).hill(k);
}

std::size_t random_k(std::span<const double> sample, double gamma, double beta)
{
    return OrderStatistics(sample).random_k(gamma, beta);
}

HillEstimate hill_random_k(std::span<const double> sample, double gamma, double beta)
{
    return OrderStatistics(sample).hill_random_k(gamma, beta);
}

std::vector<HillEstimate> hill_grid(std::span<const double> sample, std::span<const double> betas,
                                    std::span<const double> gammas)
{
    if (betas.empty() || gammas.empty()) {
        throw ArgumentError("Hill grid needs at least one beta and one gamma");
    }
    const OrderStatistics stats(sample);
    std::vector<HillEstimate> grid;
    grid.reserve(betas.size() * gammas.size());
    for (double beta : betas) {
        for (double gamma : gammas) {
            grid.push_back(stats.hill_random_k(gamma, beta));
        }
    }
    return grid;
}

AlphaBound alpha_upper_bound(std::span<const HillEstimate> grid, double margin)
{
    if (grid.empty()) {
        throw ArgumentError("alpha bound needs a nonempty grid");
    }
    if (!(margin > 0.0) || !std::isfinite(margin)) {
        throw ArgumentError("alpha bound margin must be positive");
    }
    double worst = 0.0;
    for (const auto& e : grid) {
        if (!(e.h > 0.0)) {
            throw DegenerateSampleError("cannot bound alpha: a Hill estimate is zero");
        }
        worst = std::max(worst, 1.0 / e.h);
    }
    return {margin * worst, {grid.begin(), grid.end()}, margin, "margin-max"};
}

std::vector<double> default_hill_levels()
{
    return {0.3, 0.4, 0.5, 0.6, 0.7};
}

std::string hill_grid_csv(std::span<const HillEstimate> grid)
{
    auto shortest = [](double v) {
        char buf[32];
        return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
    };
    std::ostringstream os;
    os << "beta,gamma,k,h\n";
    for (const auto& e : grid) {
        if (e.beta) {
            os << shortest(*e.beta);
        }
        os << ',';
        if (e.gamma) {
            os << shortest(*e.gamma);
        }
        os << ',' << e.k << ',' << shortest(e.h) << '\n';
    }
    return os.str();
}

}  // namespace trunctail
