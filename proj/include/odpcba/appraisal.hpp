#pragma once

// Discounting, NPV/BCR, payback, and the full deterministic pipeline:
// projections -> KPI deltas -> monetization -> aggregation -> discounting.

#include <cmath>
#include <optional>
#include <vector>

#include "odpcba/benefit_streams.hpp"
#include "odpcba/cost_model.hpp"
#include "odpcba/errors.hpp"
#include "odpcba/model.hpp"
#include "odpcba/money.hpp"

namespace odpcba {

struct DiscountSpec {
    double rate = 0.04;
    int base_year = 2025;
    // end-of-year convention: a flow in year t is divided by (1+rate)^(t - base_year)

    double factor(int year) const { return std::pow(1.0 + rate, year - base_year); }
};

// Present value of a series. `already_discounted` short-circuits to a plain
// sum for fixture tables that are stored as present values.
inline MoneyM discount_series(const YearSeries<MoneyM>& s, const DiscountSpec& d, bool already_discounted = false) {
    if (!(d.rate > -0.5 && d.rate < 0.5)) throw RateOutOfRange("discount_series: rate out of (-0.5, 0.5)");
    if (already_discounted) return s.sum();
    MoneyM pv;
    for (int k = 0; k < s.axis.n_years(); ++k) {
        int year = s.axis.year_at(k);
        if (year <= d.base_year) throw RateOutOfRange("discount_series: axis year not after base_year");
        pv += s.values[static_cast<std::size_t>(k)].scaled(1.0 / d.factor(year));
    }
    return pv;
}

struct CashflowTable {
    YearSeries<MoneyM> benefits;  // annual totals
    YearSeries<MoneyM> capex;
    YearSeries<MoneyM> opex;
    MoneyM one_time;                  // at first_year
    bool already_discounted = false;  // fixture tables are pre-discounted

    MoneyM net_at(int year) const {
        MoneyM n = benefits.at_year(year) - capex.at_year(year) - opex.at_year(year);
        if (year == benefits.axis.first_year) n -= one_time;
        return n;
    }
    YearSeries<MoneyM> net_series() const {
        std::vector<MoneyM> v(static_cast<std::size_t>(benefits.axis.n_years()));
        for (int k = 0; k < benefits.axis.n_years(); ++k)
            v[static_cast<std::size_t>(k)] = net_at(benefits.axis.year_at(k));
        return YearSeries<MoneyM>(benefits.axis, std::move(v));
    }
};

struct AppraisalResult {
    MoneyM pv_benefits;
    MoneyM pv_costs;
    MoneyM npv;  // pv_benefits - pv_costs, exact
    std::optional<double> bcr;
    std::optional<int> payback_eoy;         // first year with cumulative net >= 0
    std::optional<double> payback_interp;   // linear interpolation within the crossing year
    YearSeries<MoneyM> annual_net;          // discounted annual net flows
    YearSeries<MoneyM> cumulative_net;
};

// NPV, BCR and both payback conventions over a cashflow table.
inline AppraisalResult appraise(const CashflowTable& cf, const DiscountSpec& d) {
    const TimeAxis& axis = cf.benefits.axis;
    AppraisalResult r;
    r.pv_benefits = discount_series(cf.benefits, d, cf.already_discounted);
    MoneyM pv_capex = discount_series(cf.capex, d, cf.already_discounted);
    MoneyM pv_opex = discount_series(cf.opex, d, cf.already_discounted);
    MoneyM pv_one = cf.already_discounted ? cf.one_time : cf.one_time.scaled(1.0 / d.factor(axis.first_year));
    r.pv_costs = pv_capex + pv_opex + pv_one;
    r.npv = r.pv_benefits - r.pv_costs;
    if (r.pv_costs.units() != 0)
        r.bcr = r.pv_benefits.ratio(r.pv_costs);

    std::vector<MoneyM> net(static_cast<std::size_t>(axis.n_years()));
    std::vector<MoneyM> cum(static_cast<std::size_t>(axis.n_years()));
    MoneyM running;
    for (int k = 0; k < axis.n_years(); ++k) {
        int year = axis.year_at(k);
        MoneyM n = cf.net_at(year);
        if (!cf.already_discounted) n = n.scaled(1.0 / d.factor(year));
        net[static_cast<std::size_t>(k)] = n;
        running += n;
        cum[static_cast<std::size_t>(k)] = running;
    }
    r.annual_net = YearSeries<MoneyM>(axis, net);
    r.cumulative_net = YearSeries<MoneyM>(axis, cum);

    for (int k = 0; k < axis.n_years(); ++k) {
        if (cum[static_cast<std::size_t>(k)].units() >= 0) {
            int year = axis.year_at(k);
            r.payback_eoy = year;
            if (k == 0) {
                r.payback_interp = static_cast<double>(year);
            } else {
                MoneyM before = cum[static_cast<std::size_t>(k - 1)];
                MoneyM flow = net[static_cast<std::size_t>(k)];
                double frac = flow.units() != 0
                                  ? static_cast<double>(-before.units()) / static_cast<double>(flow.units())
                                  : 0.0;
                r.payback_interp = static_cast<double>(year - 1) + frac;
            }
            break;
        }
    }
    return r;
}

// Deterministic full pass over the formula pipeline. Intermediate tables are
// returned for audit.
struct DeterministicRun {
    ProjectionSet projections;
    StreamTable benefits;
    CostSchedule costs;
    CashflowTable cashflows;
    AppraisalResult result;
};

inline DeterministicRun run_deterministic(const Model& model, const BenefitParams& params, const StreamOptions& opts,
                                          const PollutantConfig& poll, const CapexPlan& capex_plan,
                                          const OpexPlan& opex_plan, const DiscountSpec& d,
                                          ChargingCapacity cap = {}) {
    DeterministicRun run;
    run.projections = ProjectionSet::generate(model);
    run.benefits = benefits_table(model, run.projections, params, opts, poll, cap);
    run.costs.capex = capex_schedule(capex_plan, run.projections);
    run.costs.opex = opex_schedule(opex_plan, model.axis());
    run.costs.one_time = capex_plan.one_time_total();
    run.cashflows.benefits = run.benefits.totals_by_year();
    run.cashflows.capex = run.costs.capex;
    run.cashflows.opex = run.costs.opex;
    run.cashflows.one_time = run.costs.one_time;
    run.cashflows.already_discounted = false;
    run.result = appraise(run.cashflows, d);
    return run;
}

}  // namespace odpcba
