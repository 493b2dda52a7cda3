// Command-line surface. Subcommands compose the pipeline stages over one
// run configuration:
//
//   project        projections (generated or fixture) to CSV
//   benefits       annual benefit table
//   costs          annual cost schedule
//   appraise       headline NPV/BCR/payback
//   scenario       configured what-if suite
//   tornado        one-way sensitivity, sorted by range
//   montecarlo     seeded trial set and summary statistics
//   report         everything above into one output directory
//   check-fixtures fixture pack verification (checksums, anomalies, fidelity)
//
// Exit codes: 0 success, 2 validation failure, 3 fixture discrepancy beyond
// tolerance, 4 runtime error.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "odpcba/odpcba.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitFixture = 3;
constexpr int kExitRuntime = 4;

struct CliOptions {
    std::string config = std::string(ODPCBA_REPO_ROOT) + "/config/default.json";
    std::string fixtures = std::string(ODPCBA_REPO_ROOT) + "/fixtures";
    std::string out = "out";
    std::string format = "csv";
    std::string mode;  // optional override: fixture|formula
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t trials = 0;
    bool trials_set = false;
    bool dump_trials = false;
};

odpcba::ReportFormat parse_format(const std::string& f) {
    if (f == "csv") return odpcba::ReportFormat::Csv;
    if (f == "json") return odpcba::ReportFormat::Json;
    if (f == "plotdata") return odpcba::ReportFormat::PlotData;
    throw odpcba::SchemaViolation("unknown format: " + f);
}

odpcba::RunConfig load_with_overrides(const CliOptions& opt) {
    odpcba::RunConfig cfg = odpcba::load_config(opt.config);
    if (opt.mode == "fixture") cfg.value_mode = odpcba::ValueMode::Fixture;
    else if (opt.mode == "formula") cfg.value_mode = odpcba::ValueMode::Formula;
    else if (!opt.mode.empty()) throw odpcba::SchemaViolation("unknown mode: " + opt.mode);
    if (opt.seed_set) cfg.monte_carlo.master_seed = opt.seed;
    if (opt.trials_set) cfg.monte_carlo.n_trials = opt.trials;
    return cfg;
}

std::string out_dir(const CliOptions& opt) {
    if (const char* env = std::getenv("ODPCBA_OUT"); env && *env) return env;
    return opt.out;
}

void print_headline(const odpcba::EngineRun& run) {
    const auto& a = run.appraisal;
    std::cout << "pv_benefits " << a.pv_benefits.str(1) << "  pv_costs " << a.pv_costs.str(1) << "  npv "
              << a.npv.str(1);
    if (a.bcr) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f", *a.bcr);
        std::cout << "  bcr " << buf;
    }
    if (a.payback_eoy) std::cout << "  payback_eoy " << *a.payback_eoy;
    if (a.payback_interp) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f", *a.payback_interp);
        std::cout << "  payback_interp " << buf;
    }
    std::cout << "\n";
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Cost-benefit appraisal engine for an EV/RES/grid operational platform"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config, "Run configuration JSON");
    app.add_option("--fixtures", opt.fixtures, "Fixture pack directory");
    app.add_option("--out", opt.out, "Output directory (env ODPCBA_OUT overrides)");
    app.add_option("--format", opt.format, "Output format: csv|json|plotdata");
    app.add_option("--mode", opt.mode, "Value mode override: fixture|formula");
    auto* seed_opt = app.add_option("--seed", opt.seed, "Monte Carlo master seed");
    auto* trials_opt = app.add_option("--trials", opt.trials, "Monte Carlo trial count");
    app.add_flag("--dump-trials", opt.dump_trials, "montecarlo: write per-trial CSV");

    auto* c_project = app.add_subcommand("project", "Write projection tables");
    auto* c_benefits = app.add_subcommand("benefits", "Write the annual benefit table");
    auto* c_costs = app.add_subcommand("costs", "Write the annual cost schedule");
    auto* c_appraise = app.add_subcommand("appraise", "Headline appraisal");
    auto* c_scenario = app.add_subcommand("scenario", "Run the configured scenario suite");
    auto* c_tornado = app.add_subcommand("tornado", "One-way sensitivity sweep");
    auto* c_mc = app.add_subcommand("montecarlo", "Seeded Monte Carlo run");
    auto* c_report = app.add_subcommand("report", "Full report bundle");
    auto* c_check = app.add_subcommand("check-fixtures", "Verify the fixture pack");

    CLI11_PARSE(app, argc, argv);
    opt.seed_set = seed_opt->count() > 0;
    opt.trials_set = trials_opt->count() > 0;

    odpcba::RunConfig cfg = load_with_overrides(opt);
    const std::string out = out_dir(opt);

    if (c_check->parsed()) {
        odpcba::FixturePack pack = odpcba::load_fixtures(opt.fixtures, cfg.axis);
        odpcba::FixtureCheck chk = odpcba::check_fixtures(pack);
        for (const auto& f : chk.findings)
            std::cout << (f.kind == odpcba::FindingKind::Anomaly ? "anomaly  " : "note     ") << f.id << ": "
                      << f.message << "\n";
        std::cout << "fidelity " << (chk.fidelity_ok ? "ok" : "FAILED") << "\n";

        odpcba::Model model = cfg.validated_model();
        odpcba::ProjectionSet gen = odpcba::ProjectionSet::generate(model);
        odpcba::ProjectionFidelity fid = odpcba::check_projection_fidelity(gen, pack);
        std::cout << "projection fidelity " << (fid.ok ? "ok" : "FAILED") << " (worst rel dev "
                  << fid.worst_rel * 100 << "% at " << fid.worst_cell << ")\n";
        return (chk.fidelity_ok && fid.ok) ? kExitOk : kExitFixture;
    }

    odpcba::EngineRun run = odpcba::build_run(cfg, opt.fixtures);
    odpcba::ReportBundle bundle;
    bundle.run = &run;

    if (c_project->parsed()) {
        std::filesystem::create_directories(out);
        odpcba::csv::Writer w(out + "/projections.csv");
        std::vector<std::string> header{"year"};
        for (const auto& [id, s] : run.projections.ev_stock) header.push_back("ev_" + id);
        for (const auto& [id, s] : run.projections.et_stock) header.push_back("et_" + id);
        for (const auto& [id, s] : run.projections.res_capacity) header.push_back("res_" + id);
        w.row(header);
        char buf[32];
        for (int k = 0; k < cfg.axis.n_years(); ++k) {
            std::vector<std::string> row{std::to_string(cfg.axis.year_at(k))};
            auto fmt = [&](double v) {
                std::snprintf(buf, sizeof buf, "%.3f", v);
                return std::string(buf);
            };
            for (const auto& [id, s] : run.projections.ev_stock) row.push_back(fmt(s.values[static_cast<std::size_t>(k)]));
            for (const auto& [id, s] : run.projections.et_stock) row.push_back(fmt(s.values[static_cast<std::size_t>(k)]));
            for (const auto& [id, s] : run.projections.res_capacity)
                row.push_back(fmt(s.values[static_cast<std::size_t>(k)]));
            w.row(row);
        }
        std::cout << "wrote " << out << "/projections.csv\n";
        return kExitOk;
    }
    if (c_benefits->parsed() || c_costs->parsed()) {
        emit_report(bundle, out, odpcba::ReportFormat::Csv);
        std::cout << "wrote annual tables under " << out << "\n";
        return kExitOk;
    }
    if (c_appraise->parsed()) {
        print_headline(run);
        emit_report(bundle, out, parse_format(opt.format));
        return kExitOk;
    }
    if (c_scenario->parsed()) {
        for (const auto& spec : cfg.scenarios)
            bundle.scenarios.push_back(odpcba::apply_scenario(run.base, spec, cfg.impact_matrix));
        emit_report(bundle, out, odpcba::ReportFormat::Csv);
        for (const auto& s : bundle.scenarios)
            std::cout << s.spec.name << ": npv " << s.npv.str(1) << " bcr "
                      << (s.bcr ? odpcba::MoneyM::from_meur(*s.bcr).str(2) : "-") << "\n";
        return kExitOk;
    }
    if (c_tornado->parsed()) {
        bundle.tornado_entries = odpcba::tornado(run.base, cfg.impact_matrix, cfg.tornado_ranges);
        emit_report(bundle, out, opt.format == "plotdata" ? odpcba::ReportFormat::PlotData : odpcba::ReportFormat::Csv);
        for (const auto& e : bundle.tornado_entries)
            std::cout << e.parameter << ": range " << e.range().str(1) << " (low " << e.npv_low.str(1) << ", high "
                      << e.npv_high.str(1) << ")\n";
        return kExitOk;
    }
    if (c_mc->parsed()) {
        odpcba::McResult res = odpcba::run_trials(run.base, cfg.impact_matrix, cfg.monte_carlo, opt.dump_trials);
        bundle.mc = res.summary;
        for (const auto& c : run.countries) {
            odpcba::McConfig ccfg = cfg.monte_carlo;
            ccfg.n_trials = cfg.per_country_trials;
            odpcba::McResult cres = odpcba::run_trials(odpcba::country_base(run, c), cfg.impact_matrix, ccfg);
            bundle.mc_by_country.emplace_back(c.id, cres.summary);
        }
        emit_report(bundle, out, odpcba::ReportFormat::Json);
        if (opt.dump_trials) {
            std::filesystem::create_directories(out);
            odpcba::csv::Writer w(out + "/trials.csv");
            std::vector<std::string> header{"trial", "npv", "bcr"};
            if (!res.trials.empty())
                for (const auto& [param, v] : res.trials.front().sampled) header.push_back(param);
            w.row(header);
            char buf[32];
            for (std::size_t i = 0; i < res.trials.size(); ++i) {
                std::vector<std::string> row{std::to_string(i), res.trials[i].npv.str(3)};
                std::snprintf(buf, sizeof buf, "%.4f", res.trials[i].bcr);
                row.push_back(buf);
                for (const auto& [param, v] : res.trials[i].sampled) {
                    std::snprintf(buf, sizeof buf, "%.6f", v);
                    row.push_back(buf);
                }
                w.row(row);
            }
        }
        std::cout << "trials " << res.summary.n_trials << "  mean_npv "
                  << odpcba::MoneyM::from_meur(res.summary.mean_npv).str(1) << "  p5 " << res.summary.p5_npv.str(1)
                  << "  p95 " << res.summary.p95_npv.str(1) << "  P(npv>0) " << res.summary.prob_npv_pos << "\n";
        return kExitOk;
    }
    if (c_report->parsed()) {
        for (const auto& spec : cfg.scenarios)
            bundle.scenarios.push_back(odpcba::apply_scenario(run.base, spec, cfg.impact_matrix));
        bundle.tornado_entries = odpcba::tornado(run.base, cfg.impact_matrix, cfg.tornado_ranges);
        odpcba::McResult res = odpcba::run_trials(run.base, cfg.impact_matrix, cfg.monte_carlo);
        bundle.mc = res.summary;
        for (const auto& c : run.countries) {
            odpcba::McConfig ccfg = cfg.monte_carlo;
            ccfg.n_trials = cfg.per_country_trials;
            odpcba::McResult cres = odpcba::run_trials(odpcba::country_base(run, c), cfg.impact_matrix, ccfg);
            bundle.mc_by_country.emplace_back(c.id, cres.summary);
        }
        emit_report(bundle, out, odpcba::ReportFormat::Csv);
        emit_report(bundle, out, odpcba::ReportFormat::Json);
        emit_report(bundle, out, odpcba::ReportFormat::PlotData);
        print_headline(run);
        std::cout << "report written to " << out << "\n";
        return kExitOk;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const odpcba::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const odpcba::SchemaViolation& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const odpcba::UnknownKey& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const odpcba::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const odpcba::ChecksumMismatch& e) {
        std::cerr << "fixture error: " << e.what() << "\n";
        return kExitFixture;
    } catch (const odpcba::MissingFixture& e) {
        std::cerr << "fixture error: " << e.what() << "\n";
        return kExitFixture;
    } catch (const odpcba::MalformedRow& e) {
        std::cerr << "fixture error: " << e.what() << "\n";
        return kExitFixture;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
