#include "trunctail/quantile_table.hpp"

#include "trunctail/errors.hpp"
#include "trunctail/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace trunctail {

namespace {

constexpr double kMatchTol = 1e-9;
constexpr const char* kHeader = "theta,p,value,source,n_terms,n_reps,seed,tail_mean,r,k_grid";

std::string shortest(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

template <typename T>
T parse_field(const std::string& field, std::size_t line, const char* name)
{
    T v{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw DataError("quantile table line " + std::to_string(line) + ": bad " + name + " '" + field + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) {
        out.push_back(cur);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

bool same(double a, double b) { return std::abs(a - b) <= kMatchTol; }

}  // namespace

void QuantileTable::add(const ZThetaQuantile& q)
{
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const ZThetaQuantile& e) { return same(e.theta, q.theta) && same(e.p, q.p); });
    if (it != entries_.end()) {
        *it = q;
        return;
    }
    // ascending theta, then descending p (ascending quantile)
    auto pos = std::find_if(entries_.begin(), entries_.end(), [&](const ZThetaQuantile& e) {
        return e.theta > q.theta || (same(e.theta, q.theta) && e.p < q.p);
    });
    entries_.insert(pos, q);
}

std::optional<ZThetaQuantile> QuantileTable::find(double theta, double p) const
{
    for (const auto& e : entries_) {
        if (same(e.theta, theta) && same(e.p, p)) {
            return e;
        }
    }
    return std::nullopt;
}

std::string QuantileTable::to_csv() const
{
    std::string out = std::string(kHeader) + "\n";
    for (const auto& e : entries_) {
        out += shortest(e.theta) + ',' + shortest(e.p) + ',' + shortest(e.value) + ',' + source_name(e.source) + ',';
        if (const auto* mc = std::get_if<MonteCarloSource>(&e.source)) {
            out += std::to_string(mc->n_terms) + ',' + std::to_string(mc->n_reps) + ',' + std::to_string(mc->seed) +
                   ',' + shortest(mc->tail_mean) + ",,";
        } else {
            const auto& mk = std::get<MarkovSource>(e.source);
            out += ",,,," + shortest(mk.r) + ',' + std::to_string(mk.k_grid);
        }
        out += '\n';
    }
    return out;
}

QuantileTable QuantileTable::from_csv(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line)) {
        throw DataError("quantile table is empty");
    }
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kHeader) {
        throw DataError("quantile table header mismatch: expected '" + std::string(kHeader) + "'");
    }
    QuantileTable table;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != 10) {
            throw DataError("quantile table line " + std::to_string(lineno) + ": expected 10 fields");
        }
        ZThetaQuantile q;
        q.theta = parse_field<double>(f[0], lineno, "theta");
        q.p = parse_field<double>(f[1], lineno, "p");
        q.value = parse_field<double>(f[2], lineno, "value");
        if (f[3] == "monte_carlo") {
            q.source = MonteCarloSource{parse_field<std::size_t>(f[4], lineno, "n_terms"),
                                        parse_field<std::size_t>(f[5], lineno, "n_reps"),
                                        parse_field<std::uint64_t>(f[6], lineno, "seed"),
                                        parse_field<double>(f[7], lineno, "tail_mean")};
        } else if (f[3] == "markov_bound") {
            q.source = MarkovSource{parse_field<double>(f[8], lineno, "r"),
                                    parse_field<std::size_t>(f[9], lineno, "k_grid")};
        } else {
            throw DataError("quantile table line " + std::to_string(lineno) + ": unknown source '" + f[3] + "'");
        }
        if (!(q.theta > 0.0 && q.theta < 1.0) || !(q.p > 0.0 && q.p < 1.0) || !(q.value >= 1.0)) {
            throw DataError("quantile table line " + std::to_string(lineno) + ": value out of range");
        }
        table.add(q);
    }
    return table;
}

void QuantileTable::save(const std::string& path) const
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw DataError("cannot write quantile table '" + path + "'");
    }
    os << to_csv();
    if (!os) {
        throw DataError("failed writing quantile table '" + path + "'");
    }
}

QuantileTable QuantileTable::load(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw DataError("cannot open quantile table '" + path + "'");
    }
    std::ostringstream buf;
    buf << is.rdbuf();
    return from_csv(buf.str());
}

QuantileTable generate_table(std::span<const double> thetas, std::span<const double> ps, CriticalPolicy policy,
                             const CriticalBudget& budget)
{
    for (double t : thetas) {
        check_theta(t);
    }
    QuantileTable table;
    for (double theta : thetas) {
        if (resolve_policy(theta, policy) == CriticalPolicy::MonteCarlo) {
            for (const auto& q : mc_quantiles(theta, ps, budget.n_terms, budget.n_reps, budget.seed, budget.workers)) {
                table.add(q);
            }
        } else {
            const double m = mgf_bound(theta, budget.r, budget.k_grid);
            for (double p : ps) {
                if (!(p > 0.0 && p < 1.0)) {
                    throw ArgumentError("level p must lie in (0, 1)");
                }
                table.add({theta, p, (std::log(m) - std::log(p)) / budget.r, MarkovSource{budget.r, budget.k_grid}});
            }
        }
    }
    return table;
}

std::vector<double> default_thetas()
{
    return {0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
}

std::vector<double> default_levels()
{
    return {0.05, 0.025, 0.01};
}

CriticalValues::CriticalValues(QuantileTable table, CriticalPolicy policy, CriticalBudget budget)
    : table_(std::move(table)), policy_(policy), budget_(budget)
{
}

ZThetaQuantile CriticalValues::get(double theta, double p)
{
    check_theta(theta);
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("level p must lie in (0, 1)");
    }
    std::lock_guard lock(mutex_);
    const CriticalPolicy resolved = resolve_policy(theta, policy_);
    if (auto hit = table_.find(theta, p)) {
        const bool mc = std::holds_alternative<MonteCarloSource>(hit->source);
        if (policy_ == CriticalPolicy::Auto || mc == (resolved == CriticalPolicy::MonteCarlo)) {
            return *hit;
        }
    }

    ZThetaQuantile q;
    if (resolved == CriticalPolicy::MonteCarlo) {
        auto it = draws_.find(theta);
        if (it == draws_.end()) {
            const auto batch =
                simulate_Z_batch(theta, budget_.n_terms, budget_.n_reps, budget_.seed, budget_.workers);
            SortedDraws d;
            std::vector<double> tails;
            for (const auto& z : batch) {
                d.values.push_back(z.value);
                tails.push_back(z.tail_mean);
            }
            std::sort(d.values.begin(), d.values.end());
            d.tail_mean = pairwise_sum(tails) / static_cast<double>(tails.size());
            it = draws_.emplace(theta, std::move(d)).first;
        }
        q = {theta, p, upper_quantile(it->second.values, p),
             MonteCarloSource{budget_.n_terms, budget_.n_reps, budget_.seed, it->second.tail_mean}};
    } else {
        auto it = mgf_.find(theta);
        if (it == mgf_.end()) {
            it = mgf_.emplace(theta, mgf_bound(theta, budget_.r, budget_.k_grid)).first;
        }
        q = {theta, p, (std::log(it->second) - std::log(p)) / budget_.r, MarkovSource{budget_.r, budget_.k_grid}};
    }
    table_.add(q);
    return q;
}

QuantileTable CriticalValues::table() const
{
    std::lock_guard lock(mutex_);
    return table_;
}

}  // namespace trunctail
