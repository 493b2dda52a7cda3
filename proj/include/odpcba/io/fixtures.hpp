#pragma once

// Fixture pack: the reference dataset for the bundled three-country case
// study. CSVs mirror the source tables cell-for-cell (including two known
// internal inconsistencies, which check_fixtures flags rather than repairs).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "odpcba/appraisal.hpp"
#include "odpcba/benefit_streams.hpp"
#include "odpcba/errors.hpp"
#include "odpcba/io/csv.hpp"
#include "odpcba/io/sha256.hpp"
#include "odpcba/model.hpp"
#include "odpcba/money.hpp"
#include "odpcba/scenario.hpp"

#include "json.hpp"

namespace odpcba {

struct CountryPv {
    std::string country;
    MoneyM benefits_pv;
    MoneyM costs_pv;
};

struct FixturePack {
    TimeAxis axis;
    std::map<std::string, YearSeries<>> ev_stock;      // thousands
    std::map<std::string, YearSeries<>> et_stock;      // thousands
    std::map<std::string, YearSeries<>> res_capacity;  // GW

    std::map<Stream, YearSeries<MoneyM>> annual_benefits;  // aggregated over countries
    YearSeries<MoneyM> benefit_row_totals;                 // 'total' column as printed
    YearSeries<MoneyM> capex;
    YearSeries<MoneyM> opex;
    YearSeries<MoneyM> cost_row_totals;

    std::map<Stream, MoneyM> stream_pv;
    std::vector<CountryPv> country_pv;

    MoneyM total_benefits_pv() const {  // headline: exact sum of country PVs
        MoneyM t;
        for (const auto& c : country_pv) t += c.benefits_pv;
        return t;
    }
    MoneyM total_costs_pv(MoneyM one_time) const { return capex.sum() + opex.sum() + one_time; }

    YearSeries<MoneyM> benefit_component_totals() const {  // recomputed row sums
        std::vector<MoneyM> v(static_cast<std::size_t>(axis.n_years()));
        for (const auto& [s, series] : annual_benefits)
            for (std::size_t k = 0; k < series.values.size(); ++k) v[k] += series.values[k];
        return YearSeries<MoneyM>(axis, std::move(v));
    }

    // Pre-discounted cashflow table for payback and scenario work.
    CashflowTable cashflows(MoneyM one_time) const {
        CashflowTable cf;
        cf.benefits = benefit_component_totals();
        cf.capex = capex;
        cf.opex = opex;
        cf.one_time = one_time;
        cf.already_discounted = true;
        return cf;
    }

    AppraisalBase appraisal_base(MoneyM one_time, double discount_rate) const {
        AppraisalBase b;
        b.pv_benefits = total_benefits_pv();
        b.pv_capex = capex.sum();
        b.pv_opex = opex.sum();
        b.pv_one_time = one_time;
        b.stream_pv = stream_pv;
        b.discount_rate = discount_rate;
        b.flows = cashflows(one_time);
        return b;
    }
};

namespace fixture_detail {

inline std::string read_all(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw MissingFixture("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::map<std::string, YearSeries<>> country_series(const csv::Table& t, const TimeAxis& axis,
                                                          const std::string& origin) {
    std::map<std::string, YearSeries<>> out;
    if (static_cast<int>(t.rows.size()) != axis.n_years())
        throw MalformedRow(origin + ": expected " + std::to_string(axis.n_years()) + " year rows");
    for (std::size_t col = 1; col < t.header.size(); ++col) {
        std::vector<double> v;
        v.reserve(t.rows.size());
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            int year = csv::to_int(t.rows[r][0], origin);
            if (year != axis.year_at(static_cast<int>(r)))
                throw MalformedRow(origin + ": year " + std::to_string(year) + " out of order");
            v.push_back(csv::to_double(t.rows[r][col], origin));
        }
        out.emplace(t.header[col], YearSeries<>(axis, std::move(v)));
    }
    return out;
}

}  // namespace fixture_detail

// Loads the CSV pack; when manifest.json is present every file's SHA-256 is
// verified against it.
inline FixturePack load_fixtures(const std::string& dir, TimeAxis axis = {}) {
    namespace fs = std::filesystem;
    fs::path root(dir);
    if (!fs::is_directory(root)) throw MissingFixture("fixture directory not found: " + dir);

    fs::path manifest = root / "manifest.json";
    if (fs::exists(manifest)) {
        nlohmann::json m = nlohmann::json::parse(fixture_detail::read_all(manifest));
        for (auto it = m.begin(); it != m.end(); ++it) {
            fs::path f = root / it.key();
            if (!fs::exists(f)) throw MissingFixture("manifest names missing file " + it.key());
            std::string digest = Sha256::of(fixture_detail::read_all(f));
            if (digest != it.value().get<std::string>())
                throw ChecksumMismatch(it.key() + ": sha256 " + digest + " != manifest " +
                                       it.value().get<std::string>());
        }
    }

    FixturePack pack;
    pack.axis = axis;

    pack.ev_stock = fixture_detail::country_series(csv::read_file((root / "ev_stock.csv").string()), axis, "ev_stock.csv");
    pack.et_stock = fixture_detail::country_series(csv::read_file((root / "et_stock.csv").string()), axis, "et_stock.csv");
    pack.res_capacity =
        fixture_detail::country_series(csv::read_file((root / "res_capacity.csv").string()), axis, "res_capacity.csv");

    {
        const std::string origin = "annual_benefits.csv";
        csv::Table t = csv::read_file((root / origin).string());
        if (static_cast<int>(t.rows.size()) != axis.n_years())
            throw MalformedRow(origin + ": expected " + std::to_string(axis.n_years()) + " year rows, got " +
                               std::to_string(t.rows.size()));
        std::vector<MoneyM> row_totals(t.rows.size());
        for (std::size_t col = 1; col < t.header.size(); ++col) {
            const std::string& name = t.header[col];
            std::vector<MoneyM> v(t.rows.size());
            for (std::size_t r = 0; r < t.rows.size(); ++r) v[r] = MoneyM::parse(t.rows[r][col]);
            if (name == "total") {
                row_totals = std::move(v);
            } else {
                auto s = stream_from_string(name);
                if (!s) throw MalformedRow(origin + ": unknown stream column '" + name + "'");
                pack.annual_benefits.emplace(*s, YearSeries<MoneyM>(axis, std::move(v)));
            }
        }
        pack.benefit_row_totals = YearSeries<MoneyM>(axis, std::move(row_totals));
        if (pack.annual_benefits.size() != kAllStreams.size())
            throw MalformedRow(origin + ": expected all 8 stream columns");
    }
    {
        const std::string origin = "annual_costs.csv";
        csv::Table t = csv::read_file((root / origin).string());
        if (static_cast<int>(t.rows.size()) != axis.n_years())
            throw MalformedRow(origin + ": expected " + std::to_string(axis.n_years()) + " year rows");
        std::vector<MoneyM> capex(t.rows.size()), opex(t.rows.size()), total(t.rows.size());
        std::size_t ci = t.column("capex"), oi = t.column("opex"), ti = t.column("total");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            capex[r] = MoneyM::parse(t.rows[r][ci]);
            opex[r] = MoneyM::parse(t.rows[r][oi]);
            total[r] = MoneyM::parse(t.rows[r][ti]);
        }
        pack.capex = YearSeries<MoneyM>(axis, std::move(capex));
        pack.opex = YearSeries<MoneyM>(axis, std::move(opex));
        pack.cost_row_totals = YearSeries<MoneyM>(axis, std::move(total));
    }
    {
        const std::string origin = "stream_pv.csv";
        csv::Table t = csv::read_file((root / origin).string());
        std::size_t si = t.column("stream"), pi = t.column("pv");
        for (const auto& row : t.rows) {
            auto s = stream_from_string(row[si]);
            if (!s) throw MalformedRow(origin + ": unknown stream '" + row[si] + "'");
            pack.stream_pv[*s] = MoneyM::parse(row[pi]);
        }
        if (pack.stream_pv.size() != kAllStreams.size()) throw MalformedRow(origin + ": expected all 8 streams");
    }
    {
        const std::string origin = "country_pv.csv";
        csv::Table t = csv::read_file((root / origin).string());
        std::size_t ci = t.column("country"), bi = t.column("benefits_pv"), oi = t.column("costs_pv");
        for (const auto& row : t.rows)
            pack.country_pv.push_back({row[ci], MoneyM::parse(row[bi]), MoneyM::parse(row[oi])});
        if (pack.country_pv.empty()) throw MalformedRow(origin + ": no countries");
    }
    return pack;
}

// --- consistency checks --------------------------------------------------------

enum class FindingKind { Anomaly, Note };

struct Finding {
    FindingKind kind;
    std::string id;       // stable identifier, e.g. "row-total-2034"
    std::string message;
};

struct FixtureCheck {
    std::vector<Finding> findings;
    bool fidelity_ok = true;                    // stream PV fidelity within tolerance
    std::map<Stream, double> fidelity_rel_err;  // |masked column sum - pv| / pv

    std::vector<Finding> anomalies() const {
        std::vector<Finding> out;
        for (const auto& f : findings)
            if (f.kind == FindingKind::Anomaly) out.push_back(f);
        return out;
    }
};

// Flags internal inconsistencies and checks column sums against the stream
// PVs. A cell that dips below both neighbors in an otherwise nondecreasing
// column is anomalous; it is masked (neighbor mean) for the fidelity sum so
// a single bad cell does not fail the whole stream.
inline FixtureCheck check_fixtures(const FixturePack& pack, double fidelity_tol = 0.05) {
    FixtureCheck chk;
    const TimeAxis& axis = pack.axis;

    // printed row totals vs component sums
    YearSeries<MoneyM> comp = pack.benefit_component_totals();
    for (int k = 0; k < axis.n_years(); ++k) {
        MoneyM printed = pack.benefit_row_totals.values[static_cast<std::size_t>(k)];
        MoneyM sum = comp.values[static_cast<std::size_t>(k)];
        if (std::llabs((printed - sum).units()) > 50'000) {  // 0.05 MEUR
            int year = axis.year_at(k);
            chk.findings.push_back({FindingKind::Anomaly, "row-total-" + std::to_string(year),
                                    "annual_benefits " + std::to_string(year) + " printed total " + printed.str(1) +
                                        " != component sum " + sum.str(1)});
        }
    }

    // trend dips inside stream columns
    std::map<Stream, std::vector<std::size_t>> dips;
    for (const auto& [s, series] : pack.annual_benefits) {
        for (std::size_t k = 1; k + 1 < series.values.size(); ++k) {
            if (series.values[k] < series.values[k - 1] && series.values[k] < series.values[k + 1]) {
                dips[s].push_back(k);
                int year = axis.year_at(static_cast<int>(k));
                chk.findings.push_back(
                    {FindingKind::Anomaly, std::string("cell-dip-") + to_string(s) + "-" + std::to_string(year),
                     std::string("annual_benefits ") + to_string(s) + " " + std::to_string(year) + " value " +
                         series.values[k].str(1) + " dips below neighbors " + series.values[k - 1].str(1) + "/" +
                         series.values[k + 1].str(1)});
            }
        }
    }

    // column-sum fidelity vs stream PVs (dip cells masked by neighbor mean)
    for (const auto& [s, series] : pack.annual_benefits) {
        MoneyM sum;
        for (std::size_t k = 0; k < series.values.size(); ++k) {
            bool masked = false;
            if (dips.count(s))
                for (std::size_t d : dips.at(s))
                    if (d == k) masked = true;
            if (masked)
                sum += MoneyM::from_units((series.values[k - 1] + series.values[k + 1]).units() / 2);
            else
                sum += series.values[k];
        }
        MoneyM pv = pack.stream_pv.at(s);
        double rel = pv.units() != 0 ? std::abs((sum - pv).meur()) / pv.meur() : 0.0;
        chk.fidelity_rel_err[s] = rel;
        if (rel > fidelity_tol) {
            chk.fidelity_ok = false;
            chk.findings.push_back({FindingKind::Anomaly, std::string("fidelity-") + to_string(s),
                                    std::string("annual_benefits ") + to_string(s) + " column sum " + sum.str(2) +
                                        " deviates from stream PV " + pv.str(2) + " beyond tolerance"});
        }
    }

    // informational cross-checks
    MoneyM spv_sum;
    for (const auto& [s, pv] : pack.stream_pv) spv_sum += pv;
    MoneyM cpv_sum = pack.total_benefits_pv();
    if (spv_sum != cpv_sum)
        chk.findings.push_back({FindingKind::Note, "pv-rounding",
                                "stream PV sum " + spv_sum.str(2) + " vs country PV sum " + cpv_sum.str(2) +
                                    " (print rounding)"});
    MoneyM cell_total = comp.sum();
    if (std::llabs((cell_total - cpv_sum).units()) > 50'000)
        chk.findings.push_back({FindingKind::Note, "cells-vs-headline",
                                "annual benefit cells sum to " + cell_total.str(1) + " vs headline PV " +
                                    cpv_sum.str(1) + " (rounding accumulation across printed cells)"});
    return chk;
}

// Generated-vs-fixture projection fidelity. Tolerance per cell is
// max(rel * |fixture|, abs_floor); the floor covers one ULP of the fixture's
// printed single-decimal precision.
struct ProjectionFidelity {
    bool ok = true;
    double worst_rel = 0;
    std::string worst_cell;
    std::vector<std::string> violations;
};

inline ProjectionFidelity check_projection_fidelity(const ProjectionSet& generated, const FixturePack& pack,
                                                    double rel = 0.015, double abs_floor = 0.055) {
    ProjectionFidelity out;
    auto compare = [&](const std::map<std::string, YearSeries<>>& gen, const std::map<std::string, YearSeries<>>& fix,
                       const char* label) {
        for (const auto& [id, fseries] : fix) {
            auto it = gen.find(id);
            if (it == gen.end()) continue;
            for (int k = 0; k < pack.axis.n_years(); ++k) {
                double g = it->second.values[static_cast<std::size_t>(k)];
                double f = fseries.values[static_cast<std::size_t>(k)];
                double tol = std::max(rel * std::abs(f), abs_floor);
                double err = std::abs(g - f);
                double rel_err = f != 0 ? err / std::abs(f) : 0.0;
                if (rel_err > out.worst_rel) {
                    out.worst_rel = rel_err;
                    out.worst_cell = std::string(label) + " " + id + " " + std::to_string(pack.axis.year_at(k));
                }
                if (err > tol) {
                    out.ok = false;
                    out.violations.push_back(std::string(label) + " " + id + " " + std::to_string(pack.axis.year_at(k)) +
                                             ": generated " + std::to_string(g) + " vs fixture " + std::to_string(f));
                }
            }
        }
    };
    compare(generated.ev_stock, pack.ev_stock, "ev");
    compare(generated.et_stock, pack.et_stock, "et");
    compare(generated.res_capacity, pack.res_capacity, "res");
    return out;
}

}  // namespace odpcba
