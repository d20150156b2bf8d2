#pragma once

#include "trunctail/hill.hpp"
#include "trunctail/quantile_table.hpp"
#include "trunctail/regime_tests.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trunctail {

/// Half-open, zero-based index range [begin, end).
struct Segment {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool operator==(const Segment&) const = default;
};

/// Parses "a:b[,c:d...]".
std::vector<Segment> parse_segments(const std::string& text);

struct AnalysisConfig {
    std::string input;
    std::optional<std::string> column;
    /// Empty means the whole series.
    std::vector<Segment> segments;

    std::vector<double> hill_betas = default_hill_levels();
    std::vector<double> hill_gammas = default_hill_levels();
    double margin = 1.1;

    /// A / A1 ratios of the soft test.
    std::vector<double> thetas = default_thetas();
    std::vector<double> test_gammas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> epsilons = {0.1, 0.2, 0.3, 0.4};
    std::vector<double> levels = default_levels();

    /// Precomputed quantile table; missing entries are computed with `budget`.
    std::optional<std::string> tables_path;
    CriticalPolicy policy = CriticalPolicy::Auto;
    CriticalBudget budget{10000, 20000, 1, 0, 0.05, 10000000};

    std::uint64_t seed = 1;
    /// Apply a seeded permutation before the order-sensitive hard test.
    bool shuffle_hard = false;

    /// Throws ArgumentError for out-of-range grids or levels.
    void validate() const;
};

struct SegmentReport {
    Segment segment;
    Segment estimation;
    Segment testing;
    std::optional<AlphaBound> alpha_bound;
    std::vector<TestOutcome> soft;
    std::vector<TestOutcome> hard;
    std::vector<TestOutcome> hard_strong;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool operator==(const SegmentReport&) const = default;
};

struct Report {
    std::string schema = "trunctail.report/1";
    std::string input;
    std::optional<std::string> column;
    std::size_t n_observations = 0;
    std::uint64_t seed = 0;
    std::string policy;
    std::optional<std::string> tables_path;
    CriticalBudget budget;
    std::vector<SegmentReport> segments;

    bool has_errors() const;
    bool operator==(const Report& o) const;
};

/// Split-half workflow per segment: Hill grid and alpha bound on the first
/// floor(len/2) observations, the three tests on the rest. A failure inside
/// one segment is recorded in that segment and the others still run.
Report analyze(const AnalysisConfig& config);

/// analyze() on an in-memory series; config.input is only recorded.
Report analyze_series(std::span<const double> data, const AnalysisConfig& config, CriticalValues& critical);

/// One row per test outcome: segment,test,parameter,value,level,statistic,critical_value,p_value,reject,source
std::string report_csv(const Report& report);

/// Human-readable summary.
std::string report_text(const Report& report);

}  // namespace trunctail
