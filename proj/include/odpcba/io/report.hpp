#pragma once

// Report generation. Every figure in a report is copied from a module
// output; nothing is recomputed here. Output is byte-stable for identical
// inputs: fixed key ordering, money to 0.1 MEUR, ratios to 0.01.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "odpcba/engine.hpp"
#include "odpcba/io/csv.hpp"
#include "odpcba/monte_carlo.hpp"
#include "odpcba/scenario.hpp"

#include "json.hpp"

namespace odpcba {

struct ReportBundle {
    const EngineRun* run = nullptr;
    std::vector<ScenarioOutcome> scenarios;
    std::vector<TornadoEntry> tornado_entries;
    std::optional<McSummary> mc;
    std::vector<std::pair<std::string, McSummary>> mc_by_country;
};

enum class ReportFormat { Csv, Json, PlotData };

namespace report_detail {

inline std::string ratio_str(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r);
    return buf;
}

inline std::string ratio4_str(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", r);
    return buf;
}

inline nlohmann::ordered_json headline_json(const ReportBundle& b) {
    const EngineRun& run = *b.run;
    nlohmann::ordered_json j;
    j["pv_benefits"] = run.appraisal.pv_benefits.str(1);
    j["pv_costs"] = run.appraisal.pv_costs.str(1);
    j["npv"] = run.appraisal.npv.str(1);
    if (run.appraisal.bcr) j["bcr"] = ratio_str(*run.appraisal.bcr);
    if (run.appraisal.payback_eoy) j["payback_eoy"] = *run.appraisal.payback_eoy;
    if (run.appraisal.payback_interp) j["payback_interp"] = ratio_str(*run.appraisal.payback_interp);
    nlohmann::ordered_json streams;
    for (Stream s : kAllStreams)
        if (run.stream_pvs.count(s)) streams[to_string(s)] = run.stream_pvs.at(s).str(2);
    j["stream_pv"] = streams;
    nlohmann::ordered_json countries = nlohmann::ordered_json::array();
    for (const auto& c : run.countries) {
        nlohmann::ordered_json cj;
        cj["country"] = c.id;
        cj["pv_benefits"] = c.pv_benefits.str(1);
        cj["pv_costs"] = c.pv_costs.str(1);
        cj["npv"] = c.npv.str(1);
        if (c.bcr) cj["bcr"] = ratio_str(*c.bcr);
        countries.push_back(cj);
    }
    j["countries"] = countries;
    nlohmann::ordered_json notes = nlohmann::ordered_json::array();
    for (const auto& f : run.annotations) {
        nlohmann::ordered_json nj;
        nj["kind"] = f.kind == FindingKind::Anomaly ? "anomaly" : "note";
        nj["id"] = f.id;
        nj["message"] = f.message;
        notes.push_back(nj);
    }
    j["annotations"] = notes;
    return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write " + path.string());
    out << text;
}

}  // namespace report_detail

// Writes the bundle into `out_dir`. Returns the list of files written.
inline std::vector<std::string> emit_report(const ReportBundle& bundle, const std::string& out_dir,
                                            ReportFormat format) {
    namespace fs = std::filesystem;
    const EngineRun& run = *bundle.run;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    auto track = [&](const fs::path& p) { written.push_back(p.string()); };

    if (format == ReportFormat::Json || format == ReportFormat::Csv) {
        fs::path p = fs::path(out_dir) / "headline.json";
        report_detail::write_text(p, report_detail::headline_json(bundle).dump(2) + "\n");
        track(p);
    }

    if (format == ReportFormat::Csv) {
        {
            fs::path p = fs::path(out_dir) / "annual_benefits.csv";
            csv::Writer w(p.string());
            std::vector<std::string> header{"year"};
            for (Stream s : kAllStreams) header.push_back(to_string(s));
            header.push_back("total");
            w.row(header);
            for (int k = 0; k < run.cfg.axis.n_years(); ++k) {
                int year = run.cfg.axis.year_at(k);
                std::vector<std::string> row{std::to_string(year)};
                MoneyM total;
                for (Stream s : kAllStreams) {
                    MoneyM v;
                    if (run.fixtures)
                        v = run.fixtures->annual_benefits.at(s).at_year(year);
                    else if (run.stream_table)
                        v = run.stream_table->stream_year_total(s, year);
                    row.push_back(v.str(1));
                    total += v;
                }
                row.push_back(total.str(1));
                w.row(row);
            }
            track(p);
        }
        {
            fs::path p = fs::path(out_dir) / "annual_costs.csv";
            csv::Writer w(p.string());
            w.row({"year", "capex", "opex", "one_time", "total"});
            for (int k = 0; k < run.cfg.axis.n_years(); ++k) {
                int year = run.cfg.axis.year_at(k);
                MoneyM one = year == run.cfg.axis.first_year ? run.costs.one_time : MoneyM{};
                MoneyM total = run.costs.capex.at_year(year) + run.costs.opex.at_year(year) + one;
                w.row({std::to_string(year), run.costs.capex.at_year(year).str(1), run.costs.opex.at_year(year).str(1),
                       one.str(1), total.str(1)});
            }
            track(p);
        }
        {
            fs::path p = fs::path(out_dir) / "cumulative_net.csv";
            csv::Writer w(p.string());
            w.row({"year", "net", "cumulative"});
            for (int k = 0; k < run.cfg.axis.n_years(); ++k) {
                int year = run.cfg.axis.year_at(k);
                w.row({std::to_string(year), run.appraisal.annual_net.at_year(year).str(1),
                       run.appraisal.cumulative_net.at_year(year).str(1)});
            }
            track(p);
        }
        if (!bundle.scenarios.empty()) {
            fs::path p = fs::path(out_dir) / "scenarios.csv";
            csv::Writer w(p.string());
            w.row({"scenario", "pv_benefits", "pv_costs", "npv", "bcr"});
            for (const auto& s : bundle.scenarios)
                w.row({s.spec.name, s.pv_benefits.str(1), s.pv_costs.str(1), s.npv.str(1),
                       s.bcr ? report_detail::ratio_str(*s.bcr) : ""});
            track(p);
        }
        if (!bundle.tornado_entries.empty()) {
            fs::path p = fs::path(out_dir) / "tornado.csv";
            csv::Writer w(p.string());
            w.row({"parameter", "low_setting", "high_setting", "npv_low", "npv_high", "range"});
            for (const auto& e : bundle.tornado_entries)
                w.row({e.parameter, report_detail::ratio4_str(e.low_setting), report_detail::ratio4_str(e.high_setting),
                       e.npv_low.str(1), e.npv_high.str(1), e.range().str(1)});
            track(p);
        }
        {
            fs::path p = fs::path(out_dir) / "annotations.csv";
            csv::Writer w(p.string());
            w.row({"kind", "id", "message"});
            for (const auto& f : run.annotations)
                w.row({f.kind == FindingKind::Anomaly ? "anomaly" : "note", f.id, f.message});
            track(p);
        }
    }

    if (bundle.mc && (format == ReportFormat::Json || format == ReportFormat::Csv)) {
        nlohmann::ordered_json j;
        auto fill = [&](nlohmann::ordered_json& out, const McSummary& s) {
            out["n_trials"] = s.n_trials;
            out["mean_npv"] = MoneyM::from_meur(s.mean_npv).str(1);
            out["sd_npv"] = MoneyM::from_meur(s.sd_npv).str(1);
            out["p5_npv"] = s.p5_npv.str(1);
            out["p50_npv"] = s.p50_npv.str(1);
            out["p95_npv"] = s.p95_npv.str(1);
            out["mean_bcr"] = report_detail::ratio_str(s.mean_bcr);
            out["p5_bcr"] = report_detail::ratio_str(s.p5_bcr);
            out["p95_bcr"] = report_detail::ratio_str(s.p95_bcr);
            out["prob_npv_pos"] = report_detail::ratio4_str(s.prob_npv_pos);
            out["prob_bcr_gt1"] = report_detail::ratio4_str(s.prob_bcr_gt1);
        };
        nlohmann::ordered_json agg;
        fill(agg, *bundle.mc);
        nlohmann::ordered_json hist;
        hist["lo"] = bundle.mc->npv_hist.lo;
        hist["hi"] = bundle.mc->npv_hist.hi;
        hist["counts"] = bundle.mc->npv_hist.counts;
        agg["npv_histogram"] = hist;
        j["aggregate"] = agg;
        if (!bundle.mc_by_country.empty()) {
            nlohmann::ordered_json per;
            for (const auto& [id, summary] : bundle.mc_by_country) {
                nlohmann::ordered_json cj;
                fill(cj, summary);
                per[id] = cj;
            }
            j["by_country"] = per;
        }
        std::filesystem::path p = std::filesystem::path(out_dir) / "mc_summary.json";
        report_detail::write_text(p, j.dump(2) + "\n");
        track(p);
    }

    if (format == ReportFormat::PlotData) {
        namespace fsp = std::filesystem;
        fsp::path dir = fsp::path(out_dir) / "plotdata";
        fsp::create_directories(dir);
        {
            nlohmann::ordered_json j;
            j["years"] = nlohmann::ordered_json::array();
            j["cumulative_net"] = nlohmann::ordered_json::array();
            for (int k = 0; k < run.cfg.axis.n_years(); ++k) {
                j["years"].push_back(run.cfg.axis.year_at(k));
                j["cumulative_net"].push_back(run.appraisal.cumulative_net.values[static_cast<std::size_t>(k)].str(1));
            }
            fsp::path p = dir / "payback_curve.json";
            report_detail::write_text(p, j.dump(2) + "\n");
            track(p);
        }
        if (!bundle.tornado_entries.empty()) {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& e : bundle.tornado_entries) {
                nlohmann::ordered_json ej;
                ej["parameter"] = e.parameter;
                ej["npv_low"] = e.npv_low.str(1);
                ej["npv_high"] = e.npv_high.str(1);
                ej["range"] = e.range().str(1);
                arr.push_back(ej);
            }
            fsp::path p = dir / "tornado.json";
            report_detail::write_text(p, arr.dump(2) + "\n");
            track(p);
        }
        if (bundle.mc) {
            nlohmann::ordered_json j;
            j["lo"] = bundle.mc->npv_hist.lo;
            j["hi"] = bundle.mc->npv_hist.hi;
            j["counts"] = bundle.mc->npv_hist.counts;
            fsp::path p = dir / "npv_histogram.json";
            report_detail::write_text(p, j.dump(2) + "\n");
            track(p);
        }
    }
    return written;
}

}  // namespace odpcba
