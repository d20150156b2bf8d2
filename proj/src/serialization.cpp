#include "trunctail/serialization.hpp"

#include "trunctail/errors.hpp"

namespace trunctail {

namespace {

template <typename T>
json optional_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_get(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<T>();
}

TestKind parse_test_kind(const std::string& s)
{
    if (s == "soft") {
        return TestKind::Soft;
    }
    if (s == "hard") {
        return TestKind::Hard;
    }
    if (s == "hard_strong") {
        return TestKind::HardStrong;
    }
    throw DataError("unknown test kind '" + s + "'");
}

}  // namespace

void to_json(json& j, const SpectralMeasure& s)
{
    j = json::array();
    for (const auto& a : s.atoms()) {
        j.push_back({{"direction", a.direction}, {"weight", a.weight}});
    }
}

SpectralMeasure spectral_from_json(const json& j)
{
    std::vector<SpectralAtom> atoms;
    for (const auto& a : j) {
        atoms.push_back({a.at("direction").get<std::vector<double>>(), a.at("weight").get<double>()});
    }
    return SpectralMeasure(std::move(atoms));
}

void to_json(json& j, const HeavyTailSpec& s)
{
    j = {{"alpha", s.alpha}, {"scale", s.scale}, {"spectral", s.spectral}};
}

void from_json(const json& j, HeavyTailSpec& s)
{
    s.alpha = j.at("alpha").get<double>();
    s.scale = j.value("scale", 1.0);
    s.spectral = j.contains("spectral") ? spectral_from_json(j.at("spectral")) : SpectralMeasure::symmetric_line();
}

void to_json(json& j, const TruncationRule& r)
{
    j = {{"coefficient", r.coefficient}, {"exponent", r.exponent}};
}

void from_json(const json& j, TruncationRule& r)
{
    r.coefficient = j.value("coefficient", 1.0);
    r.exponent = j.at("exponent").get<double>();
}

void to_json(json& j, const ResidualSpec& r)
{
    if (const auto* e = std::get_if<ExponentialResidual>(&r.law)) {
        j = {{"kind", "exponential"}, {"rate", e->rate}};
    } else if (const auto* u = std::get_if<UniformResidual>(&r.law)) {
        j = {{"kind", "uniform"}, {"upper", u->upper}};
    } else {
        j = {{"kind", "zero"}};
    }
}

void from_json(const json& j, ResidualSpec& r)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "zero") {
        r = ResidualSpec::zero();
    } else if (kind == "exponential") {
        r = ResidualSpec::exponential(j.at("rate").get<double>());
    } else if (kind == "uniform") {
        r = ResidualSpec::uniform(j.at("upper").get<double>());
    } else {
        throw ConfigError("unknown residual kind '" + kind + "'");
    }
}

void to_json(json& j, const TailModelConfig& c)
{
    j = {{"heavy", c.heavy}, {"truncation", c.truncation}, {"residual", c.residual}, {"dimension", c.dimension}};
}

void from_json(const json& j, TailModelConfig& c)
{
    c.heavy = j.at("heavy").get<HeavyTailSpec>();
    c.truncation = j.at("truncation").get<TruncationRule>();
    c.residual = j.contains("residual") ? j.at("residual").get<ResidualSpec>() : ResidualSpec::zero();
    c.dimension = j.value("dimension", c.heavy.spectral.dimension());
}

void to_json(json& j, const Regime& r)
{
    j = {{"kind", to_string(r.kind)}};
    if (r.kind == Regime::Kind::Intermediate) {
        j["delta"] = r.delta;
    }
}

void to_json(json& j, const HillEstimate& e)
{
    j = {{"h", e.h}, {"k", e.k}, {"beta", optional_json(e.beta)}, {"gamma", optional_json(e.gamma)}, {"n", e.n}};
}

void from_json(const json& j, HillEstimate& e)
{
    e.h = j.at("h").get<double>();
    e.k = j.at("k").get<std::size_t>();
    e.beta = optional_get<double>(j, "beta");
    e.gamma = optional_get<double>(j, "gamma");
    e.n = j.at("n").get<std::size_t>();
}

void to_json(json& j, const AlphaBound& b)
{
    j = {{"a_upper", b.a_upper}, {"margin", b.margin}, {"rule", b.rule}, {"grid", b.grid}};
}

void from_json(const json& j, AlphaBound& b)
{
    b.a_upper = j.at("a_upper").get<double>();
    b.margin = j.at("margin").get<double>();
    b.rule = j.at("rule").get<std::string>();
    b.grid = j.at("grid").get<std::vector<HillEstimate>>();
}

void to_json(json& j, const ZThetaQuantile& q)
{
    json src;
    if (const auto* mc = std::get_if<MonteCarloSource>(&q.source)) {
        src = {{"method", "monte_carlo"},
               {"n_terms", mc->n_terms},
               {"n_reps", mc->n_reps},
               {"seed", mc->seed},
               {"tail_mean", mc->tail_mean}};
    } else {
        const auto& mk = std::get<MarkovSource>(q.source);
        src = {{"method", "markov_bound"}, {"r", mk.r}, {"k_grid", mk.k_grid}};
    }
    j = {{"theta", q.theta}, {"p", q.p}, {"value", q.value}, {"source", src}};
}

void from_json(const json& j, ZThetaQuantile& q)
{
    q.theta = j.at("theta").get<double>();
    q.p = j.at("p").get<double>();
    q.value = j.at("value").get<double>();
    const auto& src = j.at("source");
    const auto method = src.at("method").get<std::string>();
    if (method == "monte_carlo") {
        q.source = MonteCarloSource{src.at("n_terms").get<std::size_t>(), src.at("n_reps").get<std::size_t>(),
                                    src.at("seed").get<std::uint64_t>(), src.at("tail_mean").get<double>()};
    } else if (method == "markov_bound") {
        q.source = MarkovSource{src.at("r").get<double>(), src.at("k_grid").get<std::size_t>()};
    } else {
        throw DataError("unknown quantile source '" + method + "'");
    }
}

void to_json(json& j, const TestOutcome& o)
{
    json params = {{"A", optional_json(o.params.a)},
                   {"A1", optional_json(o.params.a1)},
                   {"gamma", optional_json(o.params.gamma)},
                   {"epsilon", optional_json(o.params.epsilon)},
                   {"theta", optional_json(o.params.theta)}};
    json src;
    if (const auto* q = std::get_if<ZThetaQuantile>(&o.critical_source)) {
        src = {{"kind", "z_theta"}, {"quantile", *q}};
    } else if (const auto* c = std::get_if<ChiSquareSource>(&o.critical_source)) {
        src = {{"kind", "chi_square"}, {"c_p", c->c_p}};
    } else {
        src = {{"kind", "exponential_bound"}};
    }
    j = {{"test", to_string(o.test)},
         {"statistic", o.statistic},
         {"critical_value", o.critical_value},
         {"p_value", optional_json(o.p_value)},
         {"reject", o.reject},
         {"level", o.level},
         {"n", o.n},
         {"params", params},
         {"critical_source", src}};
}

void from_json(const json& j, TestOutcome& o)
{
    o.test = parse_test_kind(j.at("test").get<std::string>());
    o.statistic = j.at("statistic").get<double>();
    o.critical_value = j.at("critical_value").get<double>();
    o.p_value = optional_get<double>(j, "p_value");
    o.reject = j.at("reject").get<bool>();
    o.level = j.at("level").get<double>();
    o.n = j.at("n").get<std::size_t>();
    const auto& p = j.at("params");
    o.params = {optional_get<double>(p, "A"), optional_get<double>(p, "A1"), optional_get<double>(p, "gamma"),
                optional_get<double>(p, "epsilon"), optional_get<double>(p, "theta")};
    const auto& src = j.at("critical_source");
    const auto kind = src.at("kind").get<std::string>();
    if (kind == "z_theta") {
        o.critical_source = src.at("quantile").get<ZThetaQuantile>();
    } else if (kind == "chi_square") {
        o.critical_source = ChiSquareSource{src.at("c_p").get<double>()};
    } else if (kind == "exponential_bound") {
        o.critical_source = ExponentialBoundSource{};
    } else {
        throw DataError("unknown critical source '" + kind + "'");
    }
}

void to_json(json& j, const SumExperiment& e)
{
    j = {{"config", e.config},
         {"n", e.n},
         {"reps", e.reps},
         {"seed", e.seed},
         {"centering", to_string(e.centering)},
         {"scaling", to_string(e.scaling)}};
}

void from_json(const json& j, SumExperiment& e)
{
    e.config = j.at("config").get<TailModelConfig>();
    e.n = j.at("n").get<std::size_t>();
    e.reps = j.at("reps").get<std::size_t>();
    e.seed = j.value("seed", std::uint64_t{1});
    e.centering = parse_centering(j.value("centering", std::string("theoretical_mean")));
    e.scaling = parse_scaling(j.value("scaling", std::string("Bn")));
}

void to_json(json& j, const KsResult& k)
{
    j = {{"statistic", k.statistic}, {"p_value", k.p_value}, {"n", k.n}};
}

void to_json(json& j, const NormalityCheck& c)
{
    j = {{"statistic", c.statistic}, {"p_value", c.p_value}, {"threshold", c.threshold}, {"pass", c.pass}};
}

void to_json(json& j, const ExperimentDiagnostics& d)
{
    j = {{"regime", d.regime},
         {"mean", d.mean},
         {"variance", d.variance},
         {"std_error", d.std_error},
         {"target_covariance", optional_json(d.target_covariance)},
         {"normality", optional_json(d.normality)},
         {"karamata_ratio", optional_json(d.karamata_ratio)},
         {"stable_ks", optional_json(d.stable_ks)}};
}

void to_json(json& j, const Segment& s)
{
    j = {{"begin", s.begin}, {"end", s.end}};
}

void from_json(const json& j, Segment& s)
{
    s.begin = j.at("begin").get<std::size_t>();
    s.end = j.at("end").get<std::size_t>();
}

void to_json(json& j, const SegmentReport& s)
{
    j = {{"segment", s.segment},
         {"estimation", s.estimation},
         {"testing", s.testing},
         {"alpha_bound", optional_json(s.alpha_bound)},
         {"soft", s.soft},
         {"hard", s.hard},
         {"hard_strong", s.hard_strong},
         {"errors", s.errors},
         {"warnings", s.warnings}};
}

void from_json(const json& j, SegmentReport& s)
{
    s.segment = j.at("segment").get<Segment>();
    s.estimation = j.at("estimation").get<Segment>();
    s.testing = j.at("testing").get<Segment>();
    s.alpha_bound = optional_get<AlphaBound>(j, "alpha_bound");
    s.soft = j.at("soft").get<std::vector<TestOutcome>>();
    s.hard = j.at("hard").get<std::vector<TestOutcome>>();
    s.hard_strong = j.at("hard_strong").get<std::vector<TestOutcome>>();
    s.errors = j.at("errors").get<std::vector<std::string>>();
    s.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(json& j, const Report& r)
{
    j = {{"schema", r.schema},
         {"input", r.input},
         {"column", optional_json(r.column)},
         {"n_observations", r.n_observations},
         {"seed", r.seed},
         {"policy", r.policy},
         {"tables_path", optional_json(r.tables_path)},
         {"budget",
          {{"n_terms", r.budget.n_terms},
           {"n_reps", r.budget.n_reps},
           {"seed", r.budget.seed},
           {"r", r.budget.r},
           {"k_grid", r.budget.k_grid}}},
         {"segments", r.segments}};
}

void from_json(const json& j, Report& r)
{
    r.schema = j.at("schema").get<std::string>();
    r.input = j.at("input").get<std::string>();
    r.column = optional_get<std::string>(j, "column");
    r.n_observations = j.at("n_observations").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.policy = j.at("policy").get<std::string>();
    r.tables_path = optional_get<std::string>(j, "tables_path");
    const auto& b = j.at("budget");
    r.budget.n_terms = b.at("n_terms").get<std::size_t>();
    r.budget.n_reps = b.at("n_reps").get<std::size_t>();
    r.budget.seed = b.at("seed").get<std::uint64_t>();
    r.budget.r = b.at("r").get<double>();
    r.budget.k_grid = b.at("k_grid").get<std::size_t>();
    r.segments = j.at("segments").get<std::vector<SegmentReport>>();
}

Report parse_report(const std::string& text)
{
    try {
        const auto j = json::parse(text);
        Report r = j.get<Report>();
        if (r.schema != Report{}.schema) {
            throw DataError("unsupported report schema '" + r.schema + "'");
        }
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

std::string serialize_report(const Report& report, int indent)
{
    return json(report).dump(indent);
}

}  // namespace trunctail
