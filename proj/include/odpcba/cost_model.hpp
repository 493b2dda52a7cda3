#pragma once

// CAPEX/OPEX schedules: a one-time core-platform cost at first_year,
// incremental hardware that scales with newly integrated assets, and a
// geometric-decay OPEX profile split over 13 categories.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "odpcba/errors.hpp"
#include "odpcba/model.hpp"
#include "odpcba/money.hpp"
#include "odpcba/projections.hpp"

namespace odpcba {

struct CostLine {
    std::string name;
    MoneyM amount;
    bool ai_related = false;
};

struct UnitCosts {
    double per_new_ev = 0;      // EUR per newly integrated EV
    double per_new_et = 0;      // EUR per newly integrated ET
    double per_new_res_mw = 0;  // EUR per newly integrated RES MW
};

struct CapexPlan {
    std::vector<CostLine> one_time_items;  // core platform, spent at first_year
    MoneyM one_time_stated_total;          // declared subtotal the items must match
    UnitCosts unit_costs;

    MoneyM one_time_total() const {
        MoneyM t;
        for (const auto& l : one_time_items) t += l.amount;
        return t;
    }
    MoneyM one_time_ai_total() const {
        MoneyM t;
        for (const auto& l : one_time_items)
            if (l.ai_related) t += l.amount;
        return t;
    }
};

struct OpexCategory {
    std::string name;
    double share = 0;  // fraction of the annual total
    bool ai_related = false;
};

struct OpexPlan {
    std::vector<OpexCategory> categories;
    MoneyM base_year_total;      // first_year OPEX
    double annual_decay = 0.0;   // fraction/yr, in [0, 0.2]

    double share_sum() const {
        double s = 0;
        for (const auto& c : categories) s += c.share;
        return s;
    }
};

inline std::vector<ValidationIssue> validate_cost_plan(const CapexPlan& capex, const OpexPlan& opex) {
    std::vector<ValidationIssue> issues;
    MoneyM items = capex.one_time_total();
    MoneyM diff = items - capex.one_time_stated_total;
    if (std::llabs(diff.units()) > 50'000)  // 0.05 MEUR
        issues.push_back({ValidationCode::SharesNotUnit, "", "one_time_items",
                          "items sum " + items.str(2) + " vs stated " + capex.one_time_stated_total.str(2)});
    if (capex.unit_costs.per_new_ev < 0 || capex.unit_costs.per_new_et < 0 || capex.unit_costs.per_new_res_mw < 0)
        issues.push_back({ValidationCode::NegativeValue, "", "unit_costs", "negative unit cost"});
    if (!opex.categories.empty() && std::abs(opex.share_sum() - 1.0) > 1e-9)
        issues.push_back({ValidationCode::SharesNotUnit, "", "opex.categories", "shares sum " + std::to_string(opex.share_sum())});
    if (!(opex.annual_decay >= 0.0 && opex.annual_decay <= 0.2))
        issues.push_back({ValidationCode::BadFraction, "", "opex.annual_decay", std::to_string(opex.annual_decay)});
    return issues;
}

// Aggregate annual schedule plus the per-country split weights.
struct CostSchedule {
    YearSeries<MoneyM> capex;
    YearSeries<MoneyM> opex;
    MoneyM one_time;  // spent at first_year

    MoneyM total() const { return capex.sum() + opex.sum() + one_time; }
    MoneyM total_at(int year) const {
        MoneyM t = capex.at_year(year) + opex.at_year(year);
        if (year == capex.axis.first_year) t += one_time;
        return t;
    }
};

// New units integrated per year; the first year counts the initial managed
// stock as new.
inline YearSeries<> new_units(const YearSeries<>& stock) {
    std::vector<double> v(stock.values.size());
    for (std::size_t k = 0; k < stock.values.size(); ++k)
        v[k] = k == 0 ? stock.values[0] : std::max(0.0, stock.values[k] - stock.values[k - 1]);
    return YearSeries<>(stock.axis, std::move(v));
}

// capex(year) = sum over assets of new_units(year) * unit_cost; excludes the
// one-time core platform (reported separately).
inline YearSeries<MoneyM> capex_schedule(const CapexPlan& plan, const ProjectionSet& proj) {
    const TimeAxis& axis = proj.axis;
    std::vector<MoneyM> v(static_cast<std::size_t>(axis.n_years()));
    for (const auto& [id, series] : proj.ev_stock) {
        auto nu = new_units(series);
        for (int k = 0; k < axis.n_years(); ++k)
            v[static_cast<std::size_t>(k)] += MoneyM::from_meur(nu.values[static_cast<std::size_t>(k)] * 1000.0 *
                                                                plan.unit_costs.per_new_ev / 1e6);
    }
    for (const auto& [id, series] : proj.et_stock) {
        auto nu = new_units(series);
        for (int k = 0; k < axis.n_years(); ++k)
            v[static_cast<std::size_t>(k)] += MoneyM::from_meur(nu.values[static_cast<std::size_t>(k)] * 1000.0 *
                                                                plan.unit_costs.per_new_et / 1e6);
    }
    for (const auto& [id, series] : proj.res_capacity) {
        auto nu = new_units(series);  // GW
        for (int k = 0; k < axis.n_years(); ++k)
            v[static_cast<std::size_t>(k)] += MoneyM::from_meur(nu.values[static_cast<std::size_t>(k)] * 1000.0 *
                                                                plan.unit_costs.per_new_res_mw / 1e6);
    }
    return YearSeries<MoneyM>(axis, std::move(v));
}

// opex(year) = base_year_total * (1 - annual_decay)^(year - first_year)
inline YearSeries<MoneyM> opex_schedule(const OpexPlan& plan, const TimeAxis& axis) {
    std::vector<MoneyM> v(static_cast<std::size_t>(axis.n_years()));
    for (int k = 0; k < axis.n_years(); ++k)
        v[static_cast<std::size_t>(k)] = plan.base_year_total.scaled(std::pow(1.0 - plan.annual_decay, k));
    return YearSeries<MoneyM>(axis, std::move(v));
}

// Category breakdown for one year; sums to the annual total exactly.
inline std::vector<MoneyM> opex_breakdown(const OpexPlan& plan, MoneyM annual_total) {
    std::vector<double> w;
    w.reserve(plan.categories.size());
    for (const auto& c : plan.categories) w.push_back(c.share);
    return split_exact(annual_total, w);
}

// Fits the three unit costs so discounted incremental totals hit the given
// targets (MEUR). Each asset class enters one target, so the least-squares
// fit reduces to an exact ratio.
inline UnitCosts calibrate_unit_costs(const ProjectionSet& proj, double rate, int base_year, double target_ev_meur,
                                      double target_et_meur, double target_res_meur) {
    auto discounted_units = [&](const std::map<std::string, YearSeries<>>& stocks, double unit_scale) {
        double total = 0;
        for (const auto& [id, series] : stocks) {
            auto nu = new_units(series);
            for (int k = 0; k < proj.axis.n_years(); ++k) {
                int year = proj.axis.year_at(k);
                double disc = std::pow(1.0 + rate, year - base_year);
                total += nu.values[static_cast<std::size_t>(k)] * unit_scale / disc;
            }
        }
        return total;
    };
    double ev_units = discounted_units(proj.ev_stock, 1000.0);     // vehicles
    double et_units = discounted_units(proj.et_stock, 1000.0);     // vehicles
    double res_units = discounted_units(proj.res_capacity, 1000.0);  // MW
    UnitCosts u;
    u.per_new_ev = ev_units > 0 ? target_ev_meur * 1e6 / ev_units : 0;
    u.per_new_et = et_units > 0 ? target_et_meur * 1e6 / et_units : 0;
    u.per_new_res_mw = res_units > 0 ? target_res_meur * 1e6 / res_units : 0;
    return u;
}

// Per-country schedules scaled by cost share; re-aggregation is exact.
inline std::map<std::string, CostSchedule> allocate_costs_by_country(const CostSchedule& sched, const Model& model) {
    std::vector<double> shares;
    for (const auto& a : model.countries()) shares.push_back(a.cost_share);

    std::map<std::string, CostSchedule> out;
    const std::size_t n = model.n_countries();
    std::vector<std::vector<MoneyM>> capex_split(n), opex_split(n);
    for (std::size_t i = 0; i < n; ++i) {
        capex_split[i].resize(sched.capex.values.size());
        opex_split[i].resize(sched.opex.values.size());
    }
    for (std::size_t k = 0; k < sched.capex.values.size(); ++k) {
        auto parts = split_exact(sched.capex.values[k], shares);
        for (std::size_t i = 0; i < n; ++i) capex_split[i][k] = parts[i];
    }
    for (std::size_t k = 0; k < sched.opex.values.size(); ++k) {
        auto parts = split_exact(sched.opex.values[k], shares);
        for (std::size_t i = 0; i < n; ++i) opex_split[i][k] = parts[i];
    }
    auto one_time_parts = split_exact(sched.one_time, shares);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = model.countries()[i];
        CostSchedule cs;
        cs.capex = YearSeries<MoneyM>(sched.capex.axis, capex_split[i]);
        cs.opex = YearSeries<MoneyM>(sched.opex.axis, opex_split[i]);
        cs.one_time = one_time_parts[i];
        out.emplace(a.country.id, std::move(cs));
    }
    return out;
}

}  // namespace odpcba
