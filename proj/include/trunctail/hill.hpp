#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trunctail {

struct HillEstimate {
    double h = 0.0;  // estimate of 1/alpha
    std::size_t k = 0;
    std::optional<double> beta;
    std::optional<double> gamma;
    std::size_t n = 0;

    bool operator==(const HillEstimate&) const = default;
};

struct AlphaBound {
    double a_upper = 0.0;
    std::vector<HillEstimate> grid;
    double margin = 1.1;
    std::string rule = "margin-max";

    bool operator==(const AlphaBound&) const = default;
};

/// Sample sorted in descending order, shared by repeated Hill evaluations.
/// Values must be finite and nonnegative.
class OrderStatistics {
public:
    explicit OrderStatistics(std::span<const double> sample);

    std::size_t size() const noexcept { return desc_.size(); }
    /// X_(i), 1-based.
    double at(std::size_t i) const { return desc_.at(i - 1); }

    HillEstimate hill(std::size_t k) const;
    std::size_t random_k(double gamma, double beta) const;
    HillEstimate hill_random_k(double gamma, double beta) const;

private:
    std::vector<double> desc_;
};

/// h = (1/k) sum_{i<=k} log(X_(i) / X_(k)).
HillEstimate hill_statistic(std::span<const double> sample, std::size_t k);

/// floor(n * (#{X_j > gamma max X} / n)^beta).
std::size_t random_k(std::span<const double> sample, double gamma, double beta);

HillEstimate hill_random_k(std::span<const double> sample, double gamma, double beta);

/// Random-k Hill estimates over betas x gammas (beta-major order).
std::vector<HillEstimate> hill_grid(std::span<const double> sample, std::span<const double> betas,
                                    std::span<const double> gammas);

/// A = margin * max(1/h) over the grid.
AlphaBound alpha_upper_bound(std::span<const HillEstimate> grid, double margin = 1.1);

/// 0.3, 0.4, ..., 0.7
std::vector<double> default_hill_levels();

/// CSV with columns beta,gamma,k,h.
std::string hill_grid_csv(std::span<const HillEstimate> grid);

}  // namespace trunctail
