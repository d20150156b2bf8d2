// trunctail: tail-truncation regime analysis from the command line.
//
//   trunctail analyze data.txt --segments 0:50000,50000:120000 --tables data/z_theta_quantiles.csv
//   trunctail gen-tables --out table.csv
//   trunctail simulate --alpha 1 --rho 0.3 --n 10000 --reps 10000
//   trunctail generate --alpha 1.5 --rho 1 --n 200000 --out series.txt
//   trunctail hill data.txt

#include "trunctail/analysis.hpp"
#include "trunctail/clt_sim.hpp"
#include "trunctail/errors.hpp"
#include "trunctail/hill.hpp"
#include "trunctail/ingest.hpp"
#include "trunctail/quantile_table.hpp"
#include "trunctail/serialization.hpp"
#include "trunctail/tail_model.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace trunctail;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os || !(os << text)) {
        throw DataError("cannot write '" + path + "'");
    }
}

ResidualSpec parse_residual(const std::string& s)
{
    if (s == "zero") {
        return ResidualSpec::zero();
    }
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    if (colon == std::string::npos) {
        throw ArgumentError("residual must be zero, exp:RATE or uniform:UPPER");
    }
    const double v = std::stod(s.substr(colon + 1));
    if (kind == "exp") {
        return ResidualSpec::exponential(v);
    }
    if (kind == "uniform") {
        return ResidualSpec::uniform(v);
    }
    throw ArgumentError("residual must be zero, exp:RATE or uniform:UPPER");
}

struct ModelFlags {
    double alpha = 1.5;
    double scale = 1.0;
    double coefficient = 1.0;
    double rho = 1.0;
    double positive_weight = 0.5;
    std::string residual = "zero";

    void attach(CLI::App* app)
    {
        app->add_option("--alpha", alpha, "tail exponent")->capture_default_str();
        app->add_option("--scale", scale, "Pareto scale")->capture_default_str();
        app->add_option("--c", coefficient, "truncation coefficient in M_n = c n^rho")->capture_default_str();
        app->add_option("--rho", rho, "truncation exponent in M_n = c n^rho")->capture_default_str();
        app->add_option("--positive-weight", positive_weight, "spectral weight of +1 (d = 1)")
            ->capture_default_str();
        app->add_option("--residual", residual, "zero | exp:RATE | uniform:UPPER")->capture_default_str();
    }

    TailModelConfig config() const
    {
        TailModelConfig c;
        std::vector<SpectralAtom> atoms;
        if (positive_weight > 0.0) {
            atoms.push_back({{1.0}, positive_weight});
        }
        if (positive_weight < 1.0) {
            atoms.push_back({{-1.0}, 1.0 - positive_weight});
        }
        c.heavy = {alpha, scale, SpectralMeasure(atoms)};
        c.truncation = {coefficient, rho};
        c.residual = parse_residual(residual);
        c.validate();
        return c;
    }
};

int run(int argc, char** argv)
{
    CLI::App app{"Inference for power-law tails truncated at an unknown level"};
    app.require_subcommand(1);

    // analyze
    AnalysisConfig acfg;
    std::string segments;
    std::string report_path;
    std::string csv_path;
    std::string format = "json";
    std::string policy = "auto";
    bool gen_tables = false;
    std::vector<double> levels;
    auto* analyze_cmd = app.add_subcommand("analyze", "split-half Hill bound, then the three regime tests");
    analyze_cmd->add_option("input", acfg.input, "newline-delimited floats or CSV (gzip accepted)")->required();
    analyze_cmd->add_option("--column", acfg.column, "CSV column name");
    analyze_cmd->add_option("--segments", segments, "a:b[,c:d...] half-open zero-based ranges");
    analyze_cmd->add_option("--seed", acfg.seed, "seed for Monte Carlo critical values and shuffling")
        ->capture_default_str();
    auto* tables_opt = analyze_cmd->add_option("--tables", acfg.tables_path, "precomputed quantile table (CSV)");
    analyze_cmd->add_flag("--gen-tables", gen_tables, "compute critical values from the Monte Carlo budget")
        ->excludes(tables_opt);
    analyze_cmd->add_option("--level", levels, "significance level (repeatable)");
    analyze_cmd->add_option("--report", report_path, "write the JSON report here");
    analyze_cmd->add_option("--csv", csv_path, "write the flat per-test table here");
    analyze_cmd->add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    analyze_cmd->add_option("--policy", policy, "critical values: auto | monte_carlo | markov_bound")
        ->capture_default_str();
    analyze_cmd->add_option("--margin", acfg.margin, "Hill bound margin")->capture_default_str();
    analyze_cmd->add_option("--betas", acfg.hill_betas, "Hill beta grid")->delimiter(',');
    analyze_cmd->add_option("--hill-gammas", acfg.hill_gammas, "Hill gamma grid")->delimiter(',');
    analyze_cmd->add_option("--thetas", acfg.thetas, "A/A1 grid of the soft test")->delimiter(',');
    analyze_cmd->add_option("--gammas", acfg.test_gammas, "gamma grid of the hard test")->delimiter(',');
    analyze_cmd->add_option("--epsilons", acfg.epsilons, "epsilon grid of the strengthened test")->delimiter(',');
    analyze_cmd->add_option("--mc-terms", acfg.budget.n_terms, "series terms per Monte Carlo draw")
        ->capture_default_str();
    analyze_cmd->add_option("--mc-reps", acfg.budget.n_reps, "Monte Carlo draws per theta")->capture_default_str();
    analyze_cmd->add_option("--workers", acfg.budget.workers, "threads (0 = all cores)");
    analyze_cmd->add_flag("--shuffle-hard", acfg.shuffle_hard, "seeded shuffle before the hard test");

    // gen-tables
    std::string table_out;
    std::vector<double> thetas = default_thetas();
    std::vector<double> table_levels = default_levels();
    CriticalBudget tbudget;
    std::string tpolicy = "auto";
    auto* gen = app.add_subcommand("gen-tables", "tabulate quantiles of Z(theta)");
    gen->add_option("--out", table_out, "output CSV")->required();
    gen->add_option("--thetas", thetas, "theta grid")->delimiter(',');
    gen->add_option("--levels", table_levels, "levels p")->delimiter(',');
    gen->add_option("--mc-terms", tbudget.n_terms, "series terms per draw")->capture_default_str();
    gen->add_option("--mc-reps", tbudget.n_reps, "draws per theta")->capture_default_str();
    gen->add_option("--seed", tbudget.seed, "Monte Carlo seed")->capture_default_str();
    gen->add_option("--r", tbudget.r, "Markov bound exponent")->capture_default_str();
    gen->add_option("--k-grid", tbudget.k_grid, "Riemann grid size")->capture_default_str();
    gen->add_option("--policy", tpolicy, "auto | monte_carlo | markov_bound")->capture_default_str();
    gen->add_option("--workers", tbudget.workers, "threads (0 = all cores)");

    // simulate
    ModelFlags sim_model;
    SumExperiment sexp;
    std::string experiment_path;
    std::string centering = "theoretical_mean";
    std::string scaling = "Bn";
    std::string diag_out;
    std::string sums_out;
    auto* simulate = app.add_subcommand("simulate", "standardized row sums and limit-theorem diagnostics");
    sim_model.attach(simulate);
    simulate->add_option("--experiment", experiment_path, "JSON experiment definition (overrides model flags)");
    simulate->add_option("--n", sexp.n, "row length")->capture_default_str();
    simulate->add_option("--reps", sexp.reps, "replicates")->capture_default_str();
    simulate->add_option("--seed", sexp.seed, "seed")->capture_default_str();
    simulate->add_option("--centering", centering, "none | theoretical_mean | empirical_mean")
        ->capture_default_str();
    simulate->add_option("--scaling", scaling, "Bn | bn")->capture_default_str();
    simulate->add_option("--out", diag_out, "write diagnostics JSON here (default stdout)");
    simulate->add_option("--sums-csv", sums_out, "dump standardized sums as CSV");
    simulate->add_option("--workers", sexp.workers, "threads (0 = all cores)");

    // generate
    ModelFlags gen_model;
    std::size_t gen_n = 100000;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "write one truncated row as newline-delimited floats");
    gen_model.attach(generate);
    generate->add_option("--n", gen_n, "length")->capture_default_str();
    generate->add_option("--seed", gen_seed, "seed")->capture_default_str();
    generate->add_option("--out", gen_out, "output file")->required();

    // hill
    std::string hill_input;
    std::optional<std::string> hill_column;
    std::vector<double> betas = default_hill_levels();
    std::vector<double> gammas = default_hill_levels();
    double margin = 1.1;
    std::string hill_csv;
    auto* hill = app.add_subcommand("hill", "random-k Hill grid and conservative alpha bound");
    hill->add_option("input", hill_input, "input series")->required();
    hill->add_option("--column", hill_column, "CSV column name");
    hill->add_option("--betas", betas, "beta grid")->delimiter(',');
    hill->add_option("--gammas", gammas, "gamma grid")->delimiter(',');
    hill->add_option("--margin", margin, "bound margin")->capture_default_str();
    hill->add_option("--csv", hill_csv, "write beta,gamma,k,h here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (*analyze_cmd) {
        if (!segments.empty()) {
            acfg.segments = parse_segments(segments);
        }
        if (!levels.empty()) {
            acfg.levels = levels;
        }
        acfg.policy = parse_policy(policy);
        acfg.budget.seed = acfg.seed;
        (void)gen_tables;  // on-demand computation is the default without --tables
        const Report report = analyze(acfg);
        if (!report_path.empty()) {
            write_text(report_path, serialize_report(report) + "\n");
        }
        if (!csv_path.empty()) {
            write_text(csv_path, report_csv(report));
        }
        if (format == "text") {
            std::cout << report_text(report);
        } else if (report_path.empty()) {
            std::cout << serialize_report(report) << '\n';
        }
        for (const auto& seg : report.segments) {
            for (const auto& e : seg.errors) {
                std::cerr << "segment " << seg.segment.begin << ":" << seg.segment.end << ": " << e << '\n';
            }
        }
        return report.has_errors() ? kData : kOk;
    }

    if (*gen) {
        const auto table = generate_table(thetas, table_levels, parse_policy(tpolicy), tbudget);
        table.save(table_out);
        for (const auto& q : table.entries()) {
            if (q.truncation_suspect()) {
                std::cerr << "warning: theta=" << q.theta << " p=" << q.p
                          << ": expected series remainder exceeds 1% of the quantile\n";
            }
        }
        return kOk;
    }

    if (*simulate) {
        if (!experiment_path.empty()) {
            std::ifstream is(experiment_path);
            if (!is) {
                throw DataError("cannot open '" + experiment_path + "'");
            }
            const unsigned workers = sexp.workers;
            try {
                sexp = json::parse(is).get<SumExperiment>();
            } catch (const json::exception& e) {
                throw DataError("malformed experiment '" + experiment_path + "': " + e.what());
            }
            sexp.workers = workers;
        } else {
            sexp.config = sim_model.config();
            sexp.centering = parse_centering(centering);
            sexp.scaling = parse_scaling(scaling);
        }
        Points sums;
        const auto diag = run_experiment(sexp, sums_out.empty() ? nullptr : &sums);
        const json out = {{"experiment", sexp}, {"diagnostics", diag}};
        if (diag_out.empty()) {
            std::cout << out.dump(2) << '\n';
        } else {
            write_text(diag_out, out.dump(2) + "\n");
        }
        if (!sums_out.empty()) {
            write_text(sums_out, sums_csv(sums));
        }
        return kOk;
    }

    if (*generate) {
        const auto series = generate_series(gen_model.config(), gen_n, gen_seed);
        std::ostringstream os;
        os.precision(17);
        for (double v : series) {
            os << v << '\n';
        }
        write_text(gen_out, os.str());
        return kOk;
    }

    if (*hill) {
        auto data = ingest(hill_input, IngestOptions{hill_column});
        for (double& v : data) {
            v = std::abs(v);
        }
        const auto grid = hill_grid(data, betas, gammas);
        if (!hill_csv.empty()) {
            write_text(hill_csv, hill_grid_csv(grid));
        }
        std::cout << json(alpha_upper_bound(grid, margin)).dump(2) << '\n';
        return kOk;
    }
    return kUsage;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    } catch (const DegenerateSampleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    }
}
