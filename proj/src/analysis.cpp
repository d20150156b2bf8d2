#include "trunctail/analysis.hpp"

#include "trunctail/errors.hpp"
#include "trunctail/ingest.hpp"
#include "trunctail/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace trunctail {

namespace {

constexpr std::uint64_t kShuffleStream = 0x68;

void check_unit_grid(const std::vector<double>& grid, const char* name)
{
    if (grid.empty()) {
        throw ArgumentError(std::string(name) + " grid is empty");
    }
    for (double v : grid) {
        if (!(v > 0.0 && v < 1.0)) {
            throw ArgumentError(std::string(name) + " values must lie in (0, 1)");
        }
    }
}

std::size_t parse_index(const std::string& s, const std::string& whole)
{
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (s.empty() || pos != s.size() || s.front() == '-') {
        throw ArgumentError("bad segment list '" + whole + "' (expected a:b[,c:d...])");
    }
    return static_cast<std::size_t>(v);
}

std::string fmt(double v, const char* spec = "%.6g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

bool same_budget(const CriticalBudget& a, const CriticalBudget& b)
{
    return a.n_terms == b.n_terms && a.n_reps == b.n_reps && a.seed == b.seed && a.r == b.r && a.k_grid == b.k_grid;
}

template <typename F>
void guarded(SegmentReport& seg, const std::string& what, F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        seg.errors.push_back(what + ": " + e.what());
    }
}

}  // namespace

std::vector<Segment> parse_segments(const std::string& text)
{
    std::vector<Segment> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ArgumentError("bad segment '" + item + "' (expected a:b)");
        }
        out.push_back({parse_index(item.substr(0, colon), text), parse_index(item.substr(colon + 1), text)});
    }
    if (out.empty()) {
        throw ArgumentError("empty segment list");
    }
    return out;
}

void AnalysisConfig::validate() const
{
    check_unit_grid(hill_betas, "Hill beta");
    check_unit_grid(hill_gammas, "Hill gamma");
    check_unit_grid(thetas, "A/A1");
    check_unit_grid(test_gammas, "test gamma");
    check_unit_grid(epsilons, "epsilon");
    check_unit_grid(levels, "level");
    if (!(margin > 0.0) || !std::isfinite(margin)) {
        throw ArgumentError("margin must be positive");
    }
    if (budget.n_reps < 100 || budget.n_terms < 1) {
        throw ArgumentError("Monte Carlo budget needs n_terms >= 1 and n_reps >= 100");
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].end <= segments[i].begin) {
            throw ArgumentError("segment " + std::to_string(i) + " is empty or reversed");
        }
        if (i > 0 && segments[i].begin < segments[i - 1].end) {
            throw ArgumentError("segments must be disjoint and ascending");
        }
    }
}

bool Report::has_errors() const
{
    for (const auto& s : segments) {
        if (!s.errors.empty()) {
            return true;
        }
    }
    return false;
}

bool Report::operator==(const Report& o) const
{
    return schema == o.schema && input == o.input && column == o.column && n_observations == o.n_observations &&
           seed == o.seed && policy == o.policy && tables_path == o.tables_path && same_budget(budget, o.budget) &&
           segments == o.segments;
}

Report analyze_series(std::span<const double> data, const AnalysisConfig& config, CriticalValues& critical)
{
    config.validate();
    std::vector<Segment> segments = config.segments;
    if (segments.empty()) {
        segments.push_back({0, data.size()});
    }
    for (const auto& s : segments) {
        if (s.end > data.size()) {
            throw DataError("segment " + std::to_string(s.begin) + ":" + std::to_string(s.end) +
                            " exceeds the series length " + std::to_string(data.size()));
        }
        if (s.size() < 100) {
            throw DataError("segment " + std::to_string(s.begin) + ":" + std::to_string(s.end) +
                            " has fewer than 100 observations");
        }
    }

    Report report;
    report.input = config.input;
    report.column = config.column;
    report.n_observations = data.size();
    report.seed = config.seed;
    report.policy = to_string(config.policy);
    report.tables_path = config.tables_path;
    report.budget = config.budget;

    for (std::size_t si = 0; si < segments.size(); ++si) {
        const Segment s = segments[si];
        SegmentReport seg;
        seg.segment = s;
        const std::size_t mid = s.begin + s.size() / 2;
        seg.estimation = {s.begin, mid};
        seg.testing = {mid, s.end};

        std::vector<double> first(s.size() / 2);
        for (std::size_t i = 0; i < first.size(); ++i) {
            first[i] = std::abs(data[s.begin + i]);
        }
        const std::span<const double> second = data.subspan(mid, s.end - mid);

        guarded(seg, "hill", [&] {
            const auto grid = hill_grid(first, config.hill_betas, config.hill_gammas);
            seg.alpha_bound = alpha_upper_bound(grid, config.margin);
        });
        if (!seg.alpha_bound) {
            report.segments.push_back(std::move(seg));
            continue;
        }
        const double a = seg.alpha_bound->a_upper;

        guarded(seg, "soft", [&] {
            for (double theta : config.thetas) {
                for (double p : config.levels) {
                    auto o = test_soft(second, a, a / theta, p,
                                       [&](double t, double level) { return critical.get(t, level); });
                    const auto& q = std::get<ZThetaQuantile>(o.critical_source);
                    const std::string note =
                        "critical value at theta=" + fmt(theta) + " may be biased by series truncation";
                    if (q.truncation_suspect() &&
                        std::find(seg.warnings.begin(), seg.warnings.end(), note) == seg.warnings.end()) {
                        seg.warnings.push_back(note);
                    }
                    seg.soft.push_back(std::move(o));
                }
            }
        });
        guarded(seg, "hard", [&] {
            std::vector<double> ordered(second.begin(), second.end());
            if (config.shuffle_hard) {
                ordered = shuffled(second, derive_seed(config.seed, kShuffleStream, si));
            }
            for (double gamma : config.test_gammas) {
                for (double p : config.levels) {
                    seg.hard.push_back(test_hard(ordered, a, gamma, p));
                }
            }
        });
        guarded(seg, "hard_strong", [&] {
            for (double eps : config.epsilons) {
                for (double p : config.levels) {
                    seg.hard_strong.push_back(test_hard_strong(second, a, eps, p));
                }
            }
        });
        report.segments.push_back(std::move(seg));
    }
    return report;
}

Report analyze(const AnalysisConfig& config)
{
    config.validate();
    const auto data = ingest(config.input, IngestOptions{config.column});
    QuantileTable table;
    if (config.tables_path) {
        table = QuantileTable::load(*config.tables_path);
    }
    CriticalValues critical(std::move(table), config.policy, config.budget);
    return analyze_series(data, config, critical);
}

std::string report_csv(const Report& report)
{
    std::ostringstream os;
    os.precision(17);
    os << "segment,test,parameter,value,level,statistic,critical_value,p_value,reject,source\n";
    for (std::size_t si = 0; si < report.segments.size(); ++si) {
        const auto& seg = report.segments[si];
        auto emit = [&](const TestOutcome& o) {
            std::string name;
            double value = 0.0;
            if (o.test == TestKind::Soft) {
                name = "theta";
                value = o.params.theta.value_or(0.0);
            } else if (o.test == TestKind::Hard) {
                name = "gamma";
                value = o.params.gamma.value_or(0.0);
            } else {
                name = "epsilon";
                value = o.params.epsilon.value_or(0.0);
            }
            std::string source;
            if (const auto* q = std::get_if<ZThetaQuantile>(&o.critical_source)) {
                source = source_name(q->source);
            } else if (std::holds_alternative<ChiSquareSource>(o.critical_source)) {
                source = "chi_square";
            } else {
                source = "exponential_bound";
            }
            os << si << ',' << to_string(o.test) << ',' << name << ',' << value << ',' << o.level << ','
               << o.statistic << ',' << o.critical_value << ',';
            if (o.p_value) {
                os << *o.p_value;
            }
            os << ',' << (o.reject ? "true" : "false") << ',' << source << '\n';
        };
        for (const auto& o : seg.soft) {
            emit(o);
        }
        for (const auto& o : seg.hard) {
            emit(o);
        }
        for (const auto& o : seg.hard_strong) {
            emit(o);
        }
    }
    return os.str();
}

std::string report_text(const Report& report)
{
    std::ostringstream os;
    os << "input: " << report.input << " (" << report.n_observations << " observations)\n";
    for (std::size_t si = 0; si < report.segments.size(); ++si) {
        const auto& seg = report.segments[si];
        os << "\nsegment " << si << " [" << seg.segment.begin << ", " << seg.segment.end << ")\n";
        if (seg.alpha_bound) {
            os << "  A = " << fmt(seg.alpha_bound->a_upper, "%.4f") << " (" << seg.alpha_bound->rule << ", margin "
               << fmt(seg.alpha_bound->margin) << ", " << seg.alpha_bound->grid.size() << " Hill cells)\n";
        }
        if (!seg.soft.empty()) {
            os << "  soft truncation null  (A/A1, level, Z_n(A1), critical, decision)\n";
            for (const auto& o : seg.soft) {
                os << "    " << fmt(*o.params.theta, "%-5.3g") << "  " << fmt(o.level, "%-6.3g") << "  "
                   << fmt(o.statistic, "%10.4f") << "  " << fmt(o.critical_value, "%9.3f") << "  "
                   << (o.reject ? "reject" : "accept") << '\n';
            }
        }
        if (!seg.hard.empty()) {
            os << "  hard truncation null  (gamma, level, Z_n(A;gamma), p-value, decision)\n";
            for (const auto& o : seg.hard) {
                os << "    " << fmt(*o.params.gamma, "%-5.3g") << "  " << fmt(o.level, "%-6.3g") << "  "
                   << fmt(o.statistic, "%10.4f") << "  " << fmt(*o.p_value, "%7.4f") << "  "
                   << (o.reject ? "reject" : "accept") << '\n';
            }
        }
        if (!seg.hard_strong.empty()) {
            os << "  strengthened hard null  (epsilon, level, Z_n(A), p-value, decision)\n";
            for (const auto& o : seg.hard_strong) {
                os << "    " << fmt(*o.params.epsilon, "%-5.3g") << "  " << fmt(o.level, "%-6.3g") << "  "
                   << fmt(o.statistic, "%10.4f") << "  " << fmt(*o.p_value, "%7.4f") << "  "
                   << (o.reject ? "reject" : "accept") << '\n';
            }
        }
        for (const auto& w : seg.warnings) {
            os << "  warning: " << w << '\n';
        }
        for (const auto& e : seg.errors) {
            os << "  error: " << e << '\n';
        }
    }
    return os.str();
}

}  // namespace trunctail
