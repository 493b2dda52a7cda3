#pragma once

// Run configuration: one JSON document referencing the assumption set,
// valuation parameters, cost plan, driver map, scenario suite, impact
// matrix, tornado ranges, and Monte Carlo bindings. Parsing is strict:
// unknown keys are rejected, omitted optional fields take documented
// defaults.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "odpcba/benefit_streams.hpp"
#include "odpcba/cost_model.hpp"
#include "odpcba/errors.hpp"
#include "odpcba/model.hpp"
#include "odpcba/monte_carlo.hpp"
#include "odpcba/scenario.hpp"

#include "json.hpp"

namespace odpcba {

enum class ValueMode { Fixture, Formula };

struct RunConfig {
    TimeAxis axis;
    DiscountSpec discount;
    ValueMode value_mode = ValueMode::Fixture;

    std::vector<CountryAssumptions> countries;
    BenefitParams benefit_params;
    ChargingCapacity charging;
    PollutantConfig pollutants;
    StreamOptions stream_options;

    CapexPlan capex_plan;
    bool calibrate_unit_costs = false;
    double unit_cost_target_ev = 0, unit_cost_target_et = 0, unit_cost_target_res = 0;
    OpexPlan opex_plan;

    std::vector<ScenarioSpec> scenarios;
    ImpactMatrix impact_matrix;
    std::map<std::string, ParamRange> tornado_ranges;
    McConfig monte_carlo;
    std::uint64_t per_country_trials = 10'000;

    Model validated_model() const { return validate_or_throw(countries, axis); }
};

namespace config_detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw SchemaViolation(where + ": expected object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw UnknownKey(where + ": unknown key '" + it.key() + "'");
}

inline double num(const json& obj, const std::string& key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw SchemaViolation(where + "." + key + ": expected number");
    return obj.at(key).get<double>();
}

inline double req_num(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw SchemaViolation(where + ": missing required key '" + key + "'");
    if (!obj.at(key).is_number()) throw SchemaViolation(where + "." + key + ": expected number");
    return obj.at(key).get<double>();
}

inline std::string req_str(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw SchemaViolation(where + ": missing required key '" + key + "'");
    if (!obj.at(key).is_string()) throw SchemaViolation(where + "." + key + ": expected string");
    return obj.at(key).get<std::string>();
}

inline bool flag(const json& obj, const std::string& key, bool fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) throw SchemaViolation(where + "." + key + ": expected bool");
    return obj.at(key).get<bool>();
}

inline DriverKind driver_kind(const std::string& name, const std::string& where) {
    if (name == "fleet") return DriverKind::Fleet;
    if (name == "res") return DriverKind::Res;
    if (name == "composite") return DriverKind::Composite;
    if (name == "flat") return DriverKind::Flat;
    throw SchemaViolation(where + ": unknown driver '" + name + "'");
}

inline Stream stream_key(const std::string& name, const std::string& where) {
    auto s = stream_from_string(name);
    if (!s) throw SchemaViolation(where + ": unknown stream '" + name + "'");
    return *s;
}

inline Distribution distribution(const json& obj, const std::string& where) {
    require_keys(obj, {"normal", "triangular", "uniform", "degenerate", "truncate"}, where);
    Distribution d;
    int kinds = 0;
    if (obj.contains("normal")) {
        ++kinds;
        const json& n = obj.at("normal");
        require_keys(n, {"mean", "sd"}, where + ".normal");
        d.dist = NormalDist{req_num(n, "mean", where), req_num(n, "sd", where)};
    }
    if (obj.contains("triangular")) {
        ++kinds;
        const json& t = obj.at("triangular");
        require_keys(t, {"min", "mode", "max"}, where + ".triangular");
        d.dist = TriangularDist{req_num(t, "min", where), req_num(t, "mode", where), req_num(t, "max", where)};
    }
    if (obj.contains("uniform")) {
        ++kinds;
        const json& u = obj.at("uniform");
        require_keys(u, {"lo", "hi"}, where + ".uniform");
        d.dist = UniformDist{req_num(u, "lo", where), req_num(u, "hi", where)};
    }
    if (obj.contains("degenerate")) {
        ++kinds;
        const json& g = obj.at("degenerate");
        require_keys(g, {"value"}, where + ".degenerate");
        d.dist = DegenerateDist{req_num(g, "value", where)};
    }
    if (kinds != 1) throw SchemaViolation(where + ": exactly one distribution family required");
    if (obj.contains("truncate")) {
        const json& tr = obj.at("truncate");
        if (!tr.is_array() || tr.size() != 2) throw SchemaViolation(where + ".truncate: expected [lower, upper]");
        d.lower = tr[0].get<double>();
        d.upper = tr[1].get<double>();
    }
    auto issues = d.validate();
    if (!issues.empty()) throw SchemaViolation(where + ": " + issues.front().message());
    return d;
}

}  // namespace config_detail

inline RunConfig parse_config(const nlohmann::json& root) {
    using namespace config_detail;
    using nlohmann::json;

    require_keys(root,
                 {"axis", "discount_rate", "mode", "countries", "benefit_params", "charging_capacity", "pollutants",
                  "drivers", "composite_weights", "ledger", "costs", "scenarios", "impact_matrix", "tornado_ranges",
                  "monte_carlo"},
                 "config");

    RunConfig cfg;

    if (root.contains("axis")) {
        const json& a = root.at("axis");
        require_keys(a, {"base_year", "first_year", "last_year"}, "axis");
        cfg.axis.base_year = static_cast<int>(num(a, "base_year", 2025, "axis"));
        cfg.axis.first_year = static_cast<int>(num(a, "first_year", 2026, "axis"));
        cfg.axis.last_year = static_cast<int>(num(a, "last_year", 2035, "axis"));
    }
    cfg.discount.rate = num(root, "discount_rate", 0.04, "config");
    cfg.discount.base_year = cfg.axis.base_year;
    if (!(cfg.discount.rate > -0.5 && cfg.discount.rate < 0.5)) throw SchemaViolation("discount_rate out of (-0.5, 0.5)");

    if (root.contains("mode")) {
        const json& m = root.at("mode");
        require_keys(m, {"values", "ledger", "aec"}, "mode");
        std::string v = m.contains("values") ? m.at("values").get<std::string>() : "fixture";
        if (v == "fixture")
            cfg.value_mode = ValueMode::Fixture;
        else if (v == "formula")
            cfg.value_mode = ValueMode::Formula;
        else
            throw SchemaViolation("mode.values: expected 'fixture' or 'formula'");
        cfg.stream_options.ledger.enabled = flag(m, "ledger", false, "mode");
        if (m.contains("aec")) {
            std::string aec = m.at("aec").get<std::string>();
            if (aec == "parametric")
                cfg.stream_options.aec_mode = AecMode::Parametric;
            else if (aec == "kpi_delta")
                cfg.stream_options.aec_mode = AecMode::KpiDelta;
            else
                throw SchemaViolation("mode.aec: expected 'parametric' or 'kpi_delta'");
        }
    }

    if (!root.contains("countries") || !root.at("countries").is_array() || root.at("countries").empty())
        throw SchemaViolation("countries: non-empty array required");
    for (const json& c : root.at("countries")) {
        require_keys(c,
                     {"id", "name", "ev_stock_0", "ev_cagr", "et_stock_0", "et_cagr", "res_capacity_0", "res_addition",
                      "retail_price_ev", "grid_co2_intensity_0", "voll", "scc_start", "scc_end", "cost_share"},
                     "countries[]");
        CountryAssumptions a;
        a.country.id = req_str(c, "id", "countries[]");
        a.country.name = c.contains("name") ? c.at("name").get<std::string>() : a.country.id;
        a.ev_stock_0 = req_num(c, "ev_stock_0", "countries[]");
        a.ev_cagr = req_num(c, "ev_cagr", "countries[]");
        a.et_stock_0 = req_num(c, "et_stock_0", "countries[]");
        a.et_cagr = req_num(c, "et_cagr", "countries[]");
        a.res_capacity_0 = req_num(c, "res_capacity_0", "countries[]");
        a.res_addition = req_num(c, "res_addition", "countries[]");
        a.retail_price_ev = num(c, "retail_price_ev", 0.0, "countries[]");
        a.grid_co2_intensity_0 = num(c, "grid_co2_intensity_0", 0.0, "countries[]");
        a.voll = num(c, "voll", 0.0, "countries[]");
        a.scc_start = num(c, "scc_start", 85.0, "countries[]");
        a.scc_end = num(c, "scc_end", 120.0, "countries[]");
        a.cost_share = req_num(c, "cost_share", "countries[]");
        cfg.countries.push_back(std::move(a));
    }

    if (root.contains("benefit_params")) {
        const json& p = root.at("benefit_params");
        require_keys(p, {"c_od_base", "delta_eff", "r_odp", "p_avg", "f_arb", "flh_res", "eta_cycle", "c_dr", "r_res",
                         "r_ev", "r_et", "r_peak", "r_pl", "res_curt", "c_curt", "loss_factor", "r_fes", "eta_ev",
                         "eta_et", "s_ev", "s_et", "r_gsms", "c_fuel", "r_gsstab", "p_market", "e_ev_yr", "e_et_yr",
                         "unit_bridge", "r_co2", "mef_co2", "alpha_ev", "alpha_et", "d_ev", "d_et", "r_dec", "h_yr"},
                     "benefit_params");
        BenefitParams& b = cfg.benefit_params;
        b.c_od_base = num(p, "c_od_base", b.c_od_base, "benefit_params");
        b.delta_eff = num(p, "delta_eff", b.delta_eff, "benefit_params");
        b.r_odp = num(p, "r_odp", b.r_odp, "benefit_params");
        b.p_avg = num(p, "p_avg", b.p_avg, "benefit_params");
        b.f_arb = num(p, "f_arb", b.f_arb, "benefit_params");
        b.flh_res = num(p, "flh_res", b.flh_res, "benefit_params");
        b.eta_cycle = num(p, "eta_cycle", b.eta_cycle, "benefit_params");
        b.c_dr = num(p, "c_dr", b.c_dr, "benefit_params");
        b.r_res = num(p, "r_res", b.r_res, "benefit_params");
        b.r_ev = num(p, "r_ev", b.r_ev, "benefit_params");
        b.r_et = num(p, "r_et", b.r_et, "benefit_params");
        b.r_peak = num(p, "r_peak", b.r_peak, "benefit_params");
        b.r_pl = num(p, "r_pl", b.r_pl, "benefit_params");
        b.res_curt = num(p, "res_curt", b.res_curt, "benefit_params");
        b.c_curt = num(p, "c_curt", b.c_curt, "benefit_params");
        b.loss_factor = num(p, "loss_factor", b.loss_factor, "benefit_params");
        b.r_fes = num(p, "r_fes", b.r_fes, "benefit_params");
        b.eta_ev = num(p, "eta_ev", b.eta_ev, "benefit_params");
        b.eta_et = num(p, "eta_et", b.eta_et, "benefit_params");
        b.s_ev = num(p, "s_ev", b.s_ev, "benefit_params");
        b.s_et = num(p, "s_et", b.s_et, "benefit_params");
        b.r_gsms = num(p, "r_gsms", b.r_gsms, "benefit_params");
        b.c_fuel = num(p, "c_fuel", b.c_fuel, "benefit_params");
        b.r_gsstab = num(p, "r_gsstab", b.r_gsstab, "benefit_params");
        b.p_market = num(p, "p_market", b.p_market, "benefit_params");
        b.e_ev_yr = num(p, "e_ev_yr", b.e_ev_yr, "benefit_params");
        b.e_et_yr = num(p, "e_et_yr", b.e_et_yr, "benefit_params");
        b.unit_bridge = num(p, "unit_bridge", b.unit_bridge, "benefit_params");
        b.r_co2 = num(p, "r_co2", b.r_co2, "benefit_params");
        b.mef_co2 = num(p, "mef_co2", b.mef_co2, "benefit_params");
        b.alpha_ev = num(p, "alpha_ev", b.alpha_ev, "benefit_params");
        b.alpha_et = num(p, "alpha_et", b.alpha_et, "benefit_params");
        b.d_ev = num(p, "d_ev", b.d_ev, "benefit_params");
        b.d_et = num(p, "d_et", b.d_et, "benefit_params");
        b.r_dec = num(p, "r_dec", b.r_dec, "benefit_params");
        b.h_yr = num(p, "h_yr", b.h_yr, "benefit_params");
        auto issues = validate_params(b);
        if (!issues.empty()) throw ValidationError(std::move(issues));
    }

    if (root.contains("charging_capacity")) {
        const json& c = root.at("charging_capacity");
        require_keys(c, {"kw_per_ev", "kw_per_et"}, "charging_capacity");
        cfg.charging.kw_per_ev = num(c, "kw_per_ev", cfg.charging.kw_per_ev, "charging_capacity");
        cfg.charging.kw_per_et = num(c, "kw_per_et", cfg.charging.kw_per_et, "charging_capacity");
    }

    if (root.contains("pollutants")) {
        const json& p = root.at("pollutants");
        require_keys(p, {"set", "factors"}, "pollutants");
        if (p.contains("set")) {
            cfg.pollutants.pollutants.clear();
            for (const json& name : p.at("set")) cfg.pollutants.pollutants.push_back(name.get<std::string>());
        }
        if (p.contains("factors")) {
            for (auto cit = p.at("factors").begin(); cit != p.at("factors").end(); ++cit) {
                for (auto pit = cit.value().begin(); pit != cit.value().end(); ++pit) {
                    require_keys(pit.value(), {"ef_poll", "damage_cost"}, "pollutants.factors");
                    PollutantFactor f;
                    f.ef_poll = num(pit.value(), "ef_poll", 0.0, "pollutants.factors");
                    f.damage_cost = num(pit.value(), "damage_cost", 0.0, "pollutants.factors");
                    cfg.pollutants.factors[cit.key()][pit.key()] = f;
                }
            }
        }
    }

    if (root.contains("drivers")) {
        for (auto it = root.at("drivers").begin(); it != root.at("drivers").end(); ++it) {
            Stream s = stream_key(it.key(), "drivers");
            cfg.stream_options.drivers[s] = driver_kind(it.value().get<std::string>(), "drivers." + it.key());
        }
    }
    if (root.contains("composite_weights")) {
        const json& w = root.at("composite_weights");
        require_keys(w, {"fleet", "res"}, "composite_weights");
        cfg.stream_options.composite.fleet = num(w, "fleet", 0.5, "composite_weights");
        cfg.stream_options.composite.res = num(w, "res", 0.5, "composite_weights");
    }
    if (root.contains("ledger")) {
        const json& l = root.at("ledger");
        require_keys(l, {"enabled", "budget_fraction"}, "ledger");
        cfg.stream_options.ledger.enabled = flag(l, "enabled", cfg.stream_options.ledger.enabled, "ledger");
        cfg.stream_options.ledger.budget_fraction = num(l, "budget_fraction", 0.15, "ledger");
    }

    if (!root.contains("costs")) throw SchemaViolation("costs: required section missing");
    {
        const json& c = root.at("costs");
        require_keys(c, {"one_time_items", "one_time_stated_total", "unit_costs", "opex"}, "costs");
        if (!c.contains("one_time_items")) throw SchemaViolation("costs.one_time_items required");
        for (const json& item : c.at("one_time_items")) {
            require_keys(item, {"name", "amount", "ai_related"}, "costs.one_time_items[]");
            CostLine line;
            line.name = req_str(item, "name", "costs.one_time_items[]");
            line.amount = MoneyM::from_meur(req_num(item, "amount", "costs.one_time_items[]"));
            line.ai_related = flag(item, "ai_related", false, "costs.one_time_items[]");
            cfg.capex_plan.one_time_items.push_back(std::move(line));
        }
        cfg.capex_plan.one_time_stated_total =
            MoneyM::from_meur(req_num(c, "one_time_stated_total", "costs"));
        const json& u = c.at("unit_costs");
        require_keys(u, {"calibrate", "targets", "per_new_ev", "per_new_et", "per_new_res_mw"}, "costs.unit_costs");
        cfg.calibrate_unit_costs = flag(u, "calibrate", false, "costs.unit_costs");
        if (cfg.calibrate_unit_costs) {
            const json& t = u.at("targets");
            require_keys(t, {"ev", "et", "res"}, "costs.unit_costs.targets");
            cfg.unit_cost_target_ev = req_num(t, "ev", "costs.unit_costs.targets");
            cfg.unit_cost_target_et = req_num(t, "et", "costs.unit_costs.targets");
            cfg.unit_cost_target_res = req_num(t, "res", "costs.unit_costs.targets");
        } else {
            cfg.capex_plan.unit_costs.per_new_ev = num(u, "per_new_ev", 0.0, "costs.unit_costs");
            cfg.capex_plan.unit_costs.per_new_et = num(u, "per_new_et", 0.0, "costs.unit_costs");
            cfg.capex_plan.unit_costs.per_new_res_mw = num(u, "per_new_res_mw", 0.0, "costs.unit_costs");
        }
        const json& o = c.at("opex");
        require_keys(o, {"base_year_total", "annual_decay", "categories"}, "costs.opex");
        cfg.opex_plan.base_year_total = MoneyM::from_meur(req_num(o, "base_year_total", "costs.opex"));
        cfg.opex_plan.annual_decay = num(o, "annual_decay", 0.0, "costs.opex");
        if (o.contains("categories")) {
            for (const json& cat : o.at("categories")) {
                require_keys(cat, {"name", "share", "ai_related"}, "costs.opex.categories[]");
                OpexCategory oc;
                oc.name = req_str(cat, "name", "costs.opex.categories[]");
                oc.share = req_num(cat, "share", "costs.opex.categories[]");
                oc.ai_related = flag(cat, "ai_related", false, "costs.opex.categories[]");
                cfg.opex_plan.categories.push_back(std::move(oc));
            }
        }
        auto issues = validate_cost_plan(cfg.capex_plan, cfg.opex_plan);
        if (!issues.empty()) throw ValidationError(std::move(issues));
    }

    if (root.contains("scenarios")) {
        for (const json& s : root.at("scenarios")) {
            require_keys(s, {"name", "benefit_multiplier", "cost_multiplier", "stream_multipliers", "discount_override"},
                         "scenarios[]");
            ScenarioSpec spec;
            spec.name = req_str(s, "name", "scenarios[]");
            spec.benefit_multiplier = num(s, "benefit_multiplier", 1.0, "scenarios[]");
            spec.cost_multiplier = num(s, "cost_multiplier", 1.0, "scenarios[]");
            if (!(spec.benefit_multiplier > 0) || !(spec.cost_multiplier > 0))
                throw SchemaViolation("scenarios[" + spec.name + "]: multipliers must be > 0");
            if (s.contains("stream_multipliers"))
                for (auto it = s.at("stream_multipliers").begin(); it != s.at("stream_multipliers").end(); ++it)
                    spec.stream_multipliers[stream_key(it.key(), "scenarios[].stream_multipliers")] =
                        it.value().get<double>();
            if (s.contains("discount_override")) spec.discount_override = s.at("discount_override").get<double>();
            cfg.scenarios.push_back(std::move(spec));
        }
    }

    if (root.contains("impact_matrix")) {
        for (auto pit = root.at("impact_matrix").begin(); pit != root.at("impact_matrix").end(); ++pit) {
            const json& row = pit.value();
            require_keys(row, {"benefits", "costs"}, "impact_matrix." + pit.key());
            if (row.contains("benefits"))
                for (auto bit = row.at("benefits").begin(); bit != row.at("benefits").end(); ++bit)
                    cfg.impact_matrix.benefit_slopes[pit.key()][stream_key(bit.key(), "impact_matrix")] =
                        bit.value().get<double>();
            if (row.contains("costs"))
                for (auto cit = row.at("costs").begin(); cit != row.at("costs").end(); ++cit) {
                    CostComponent cc;
                    if (cit.key() == "capex")
                        cc = CostComponent::Capex;
                    else if (cit.key() == "opex")
                        cc = CostComponent::Opex;
                    else if (cit.key() == "one_time")
                        cc = CostComponent::OneTime;
                    else
                        throw SchemaViolation("impact_matrix." + pit.key() + ".costs: unknown component " + cit.key());
                    cfg.impact_matrix.cost_slopes[pit.key()][cc] = cit.value().get<double>();
                }
        }
    }

    if (root.contains("tornado_ranges")) {
        for (auto it = root.at("tornado_ranges").begin(); it != root.at("tornado_ranges").end(); ++it) {
            const json& r = it.value();
            if (!r.is_array() || r.size() != 2) throw SchemaViolation("tornado_ranges." + it.key() + ": expected [low, high]");
            ParamRange pr{r[0].get<double>(), r[1].get<double>()};
            if (!(pr.low < pr.high)) throw SchemaViolation("tornado_ranges." + it.key() + ": low must be < high");
            cfg.tornado_ranges[it.key()] = pr;
        }
    }

    if (root.contains("monte_carlo")) {
        const json& m = root.at("monte_carlo");
        require_keys(m, {"n_trials", "per_country_trials", "master_seed", "bindings"}, "monte_carlo");
        double nt = num(m, "n_trials", 50'000, "monte_carlo");
        if (nt < 1) throw SchemaViolation("monte_carlo.n_trials: must be >= 1");
        cfg.monte_carlo.n_trials = static_cast<std::uint64_t>(nt);
        double pct = num(m, "per_country_trials", 10'000, "monte_carlo");
        if (pct < 1) throw SchemaViolation("monte_carlo.per_country_trials: must be >= 1");
        cfg.per_country_trials = static_cast<std::uint64_t>(pct);
        if (m.contains("master_seed")) {
            if (!m.at("master_seed").is_number_unsigned() && !m.at("master_seed").is_number_integer())
                throw SchemaViolation("monte_carlo.master_seed: expected integer");
            cfg.monte_carlo.master_seed = m.at("master_seed").get<std::uint64_t>();
        }
        if (m.contains("bindings"))
            for (auto it = m.at("bindings").begin(); it != m.at("bindings").end(); ++it)
                cfg.monte_carlo.bindings[it.key()] =
                    config_detail::distribution(it.value(), "monte_carlo.bindings." + it.key());
    }

    // cross-checks after the full document is assembled
    Model m;
    auto issues = validate_assumptions(cfg.countries, cfg.axis, m);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    auto mc_issues = cfg.monte_carlo.validate(cfg.impact_matrix);
    if (!mc_issues.empty()) throw ValidationError(std::move(mc_issues));
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open config " + path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());  // includes byte position
    }
    return parse_config(root);
}

}  // namespace odpcba
