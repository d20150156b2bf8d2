#pragma once

#include "trunctail/ztheta.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trunctail {

/// Tabulated quantiles of Z(theta). CSV columns:
/// theta,p,value,source,n_terms,n_reps,seed,tail_mean,r,k_grid
class QuantileTable {
public:
    /// Inserts or replaces the entry at (theta, p); entries stay sorted by (theta, p).
    void add(const ZThetaQuantile& q);

    /// Entry whose theta and p match within 1e-9.
    std::optional<ZThetaQuantile> find(double theta, double p) const;

    const std::vector<ZThetaQuantile>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    std::string to_csv() const;
    static QuantileTable from_csv(const std::string& text);

    void save(const std::string& path) const;
    static QuantileTable load(const std::string& path);

    bool operator==(const QuantileTable&) const = default;

private:
    std::vector<ZThetaQuantile> entries_;
};

/// Computes every (theta, p) pair; Monte Carlo draws and Markov mgf bounds are
/// shared across the levels of one theta.
QuantileTable generate_table(std::span<const double> thetas, std::span<const double> ps, CriticalPolicy policy,
                             const CriticalBudget& budget);

/// 0.5, 0.6, 0.7, 0.8, 0.9, 0.95
std::vector<double> default_thetas();
/// 0.05, 0.025, 0.01
std::vector<double> default_levels();

/// Table lookup with on-demand computation of missing entries. Safe to share
/// between threads.
class CriticalValues {
public:
    CriticalValues(QuantileTable table, CriticalPolicy policy, CriticalBudget budget);

    ZThetaQuantile get(double theta, double p);

    /// Snapshot including computed entries.
    QuantileTable table() const;
    CriticalPolicy policy() const noexcept { return policy_; }
    const CriticalBudget& budget() const noexcept { return budget_; }

private:
    struct SortedDraws {
        std::vector<double> values;
        double tail_mean = 0.0;
    };

    mutable std::mutex mutex_;
    QuantileTable table_;
    CriticalPolicy policy_;
    CriticalBudget budget_;
    std::map<double, SortedDraws> draws_;
    std::map<double, double> mgf_;
};

}  // namespace trunctail
