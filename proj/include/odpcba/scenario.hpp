#pragma once

// Deterministic what-if perturbations and one-way tornado sensitivity.
// Both run over a shared impact-mapping layer: each uncertain parameter maps
// to elasticity-style slopes per benefit stream and cost line, and
// perturbations are anchored at the base appraisal so an identity scenario
// reproduces the base result exactly.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odpcba/appraisal.hpp"
#include "odpcba/benefit_streams.hpp"
#include "odpcba/errors.hpp"
#include "odpcba/money.hpp"

namespace odpcba {

enum class CostComponent { Capex, Opex, OneTime };

inline const char* to_string(CostComponent c) {
    switch (c) {
        case CostComponent::Capex: return "capex";
        case CostComponent::Opex: return "opex";
        case CostComponent::OneTime: return "one_time";
    }
    return "?";
}

// The aggregates a perturbation acts on. Stream PVs are exposure anchors;
// their sum may differ from the headline by source-data rounding, so deltas
// are applied additively against the headline.
struct AppraisalBase {
    MoneyM pv_benefits;
    MoneyM pv_capex;
    MoneyM pv_opex;
    MoneyM pv_one_time;
    std::map<Stream, MoneyM> stream_pv;
    double discount_rate = 0.04;
    // annual flows for payback recomputation; pre-discounted in fixture mode
    std::optional<CashflowTable> flows;

    MoneyM pv_costs() const { return pv_capex + pv_opex + pv_one_time; }
    MoneyM npv() const { return pv_benefits - pv_costs(); }
};

// Parameter deviation: multiplier-style parameters use (multiplier - 1);
// discount_rate uses (rate - base_rate).
// The `discount_rate` parameter is special-cased by name.
inline constexpr const char* kDiscountParam = "discount_rate";

struct ImpactMatrix {
    // parameter -> stream -> slope (d multiplier / d deviation)
    std::map<std::string, std::map<Stream, double>> benefit_slopes;
    // parameter -> cost component -> slope
    std::map<std::string, std::map<CostComponent, double>> cost_slopes;

    std::vector<std::string> parameters() const {
        std::vector<std::string> out;
        for (const auto& [p, _] : benefit_slopes) out.push_back(p);
        for (const auto& [p, _] : cost_slopes)
            if (!benefit_slopes.count(p)) out.push_back(p);
        std::sort(out.begin(), out.end());
        return out;
    }
    bool has(const std::string& p) const { return benefit_slopes.count(p) || cost_slopes.count(p); }
};

// Applies a set of parameter deviations through the matrix. Columns compose
// multiplicatively across parameters; the result is anchored at the base.
struct PerturbedAggregates {
    MoneyM pv_benefits;
    MoneyM pv_costs;
    MoneyM npv;
    std::optional<double> bcr;
};

inline PerturbedAggregates apply_deviations(const AppraisalBase& base, const ImpactMatrix& m,
                                            const std::map<std::string, double>& deviations) {
    MoneyM benefit_delta;
    for (const auto& [s, pv] : base.stream_pv) {
        double mult = 1.0;
        for (const auto& [param, dv] : deviations) {
            auto row = m.benefit_slopes.find(param);
            if (row == m.benefit_slopes.end()) continue;
            auto cell = row->second.find(s);
            if (cell == row->second.end()) continue;
            mult *= 1.0 + cell->second * dv;
        }
        benefit_delta += pv.scaled(mult - 1.0);
    }
    MoneyM cost_delta;
    auto cost_pv = [&](CostComponent c) {
        switch (c) {
            case CostComponent::Capex: return base.pv_capex;
            case CostComponent::Opex: return base.pv_opex;
            case CostComponent::OneTime: return base.pv_one_time;
        }
        return MoneyM{};
    };
    for (CostComponent c : {CostComponent::Capex, CostComponent::Opex, CostComponent::OneTime}) {
        double mult = 1.0;
        for (const auto& [param, dv] : deviations) {
            auto row = m.cost_slopes.find(param);
            if (row == m.cost_slopes.end()) continue;
            auto cell = row->second.find(c);
            if (cell == row->second.end()) continue;
            mult *= 1.0 + cell->second * dv;
        }
        cost_delta += cost_pv(c).scaled(mult - 1.0);
    }
    PerturbedAggregates out;
    out.pv_benefits = base.pv_benefits + benefit_delta;
    out.pv_costs = base.pv_costs() + cost_delta;
    out.npv = out.pv_benefits - out.pv_costs;
    if (out.pv_costs.units() != 0) out.bcr = out.pv_benefits.ratio(out.pv_costs);
    return out;
}

// --- scenarios ---------------------------------------------------------------

struct ScenarioSpec {
    std::string name;
    double benefit_multiplier = 1.0;
    double cost_multiplier = 1.0;
    std::map<Stream, double> stream_multipliers;  // optional, compose with global
    std::optional<double> discount_override;
};

struct ScenarioOutcome {
    ScenarioSpec spec;
    AppraisalBase next;  // perturbed base, usable as input to a follow-up scenario
    MoneyM pv_benefits;
    MoneyM pv_costs;
    MoneyM npv;
    std::optional<double> bcr;
    std::optional<int> payback_eoy;
    std::optional<double> payback_interp;
};

// Applies multipliers to the designated aggregates/streams, then re-appraises.
// A discount override re-discounts real flows when they are available
// undiscounted; on pre-discounted (fixture) bases it maps through the
// calibrated discount_rate row of the impact matrix.
inline ScenarioOutcome apply_scenario(const AppraisalBase& base, const ScenarioSpec& spec, const ImpactMatrix& matrix) {
    if (!(spec.benefit_multiplier > 0) || !(spec.cost_multiplier > 0))
        throw NonPositiveMultiplier("apply_scenario: " + spec.name);
    for (const auto& [s, mult] : spec.stream_multipliers)
        if (!(mult > 0)) throw NonPositiveMultiplier("apply_scenario: stream multiplier in " + spec.name);

    ScenarioOutcome out;
    out.spec = spec;
    out.next = base;

    // per-stream multipliers move their exposure anchors
    MoneyM stream_delta;
    for (const auto& [s, mult] : spec.stream_multipliers) {
        auto it = out.next.stream_pv.find(s);
        if (it == out.next.stream_pv.end()) continue;
        MoneyM scaled = it->second.scaled(mult);
        stream_delta += scaled - it->second;
        it->second = scaled;
    }
    out.next.pv_benefits = (base.pv_benefits + stream_delta).scaled(spec.benefit_multiplier);
    for (auto& [s, pv] : out.next.stream_pv) pv = pv.scaled(spec.benefit_multiplier);
    out.next.pv_capex = base.pv_capex.scaled(spec.cost_multiplier);
    out.next.pv_opex = base.pv_opex.scaled(spec.cost_multiplier);
    out.next.pv_one_time = base.pv_one_time.scaled(spec.cost_multiplier);

    bool discounted_flows = false;
    if (spec.discount_override) {
        double r = *spec.discount_override;
        if (!(r > -0.5 && r < 0.5)) throw RateOutOfRange("apply_scenario: discount override");
        if (base.flows && !base.flows->already_discounted) {
            discounted_flows = true;
            out.next.discount_rate = r;
        } else {
            double dv = r - base.discount_rate;
            std::map<std::string, double> dev{{kDiscountParam, dv}};
            PerturbedAggregates agg = apply_deviations(out.next, matrix, dev);
            MoneyM shift = agg.pv_benefits - out.next.pv_benefits;
            out.next.pv_benefits += shift;
            out.next.discount_rate = r;
        }
    }

    // re-appraise flows for payback when available
    if (base.flows) {
        CashflowTable cf = *base.flows;
        double bscale = out.next.pv_benefits.units() != 0 && base.pv_benefits.units() != 0
                            ? out.next.pv_benefits.ratio(base.pv_benefits)
                            : spec.benefit_multiplier;
        for (auto& v : cf.benefits.values) v = v.scaled(bscale);
        for (auto& v : cf.capex.values) v = v.scaled(spec.cost_multiplier);
        for (auto& v : cf.opex.values) v = v.scaled(spec.cost_multiplier);
        cf.one_time = cf.one_time.scaled(spec.cost_multiplier);
        DiscountSpec d;
        d.rate = discounted_flows ? out.next.discount_rate : base.discount_rate;
        AppraisalResult res = appraise(cf, d);
        out.payback_eoy = res.payback_eoy;
        out.payback_interp = res.payback_interp;
        if (discounted_flows) {
            // end-to-end re-discount: aggregates come from the re-appraisal
            out.next.pv_benefits = res.pv_benefits;
            out.next.pv_capex = discount_series(cf.capex, d, false);
            out.next.pv_opex = discount_series(cf.opex, d, false);
            out.next.pv_one_time = res.pv_costs - out.next.pv_capex - out.next.pv_opex;
        }
    }

    out.pv_benefits = out.next.pv_benefits;
    out.pv_costs = out.next.pv_costs();
    out.npv = out.next.npv();
    if (out.pv_costs.units() != 0) out.bcr = out.pv_benefits.ratio(out.pv_costs);
    return out;
}

// --- tornado -----------------------------------------------------------------

struct ParamRange {
    double low = 0;
    double high = 0;
};

struct TornadoEntry {
    std::string parameter;
    double low_setting = 0;
    double high_setting = 0;
    MoneyM npv_low;
    MoneyM npv_high;
    MoneyM range() const {
        MoneyM d = npv_high - npv_low;
        return d.units() >= 0 ? d : -d;
    }
};

// One-way sweep: each parameter is set to its low and high bound with all
// others at base; entries are sorted by descending range, ties by name.
inline std::vector<TornadoEntry> tornado(const AppraisalBase& base, const ImpactMatrix& matrix,
                                         const std::map<std::string, ParamRange>& ranges) {
    std::vector<TornadoEntry> out;
    for (const auto& [param, range] : ranges) {
        if (!(range.low < range.high)) throw std::invalid_argument("tornado: require low < high for " + param);
        double base_value = param == kDiscountParam ? base.discount_rate : 1.0;
        TornadoEntry e;
        e.parameter = param;
        e.low_setting = range.low;
        e.high_setting = range.high;
        e.npv_low = apply_deviations(base, matrix, {{param, range.low - base_value}}).npv;
        e.npv_high = apply_deviations(base, matrix, {{param, range.high - base_value}}).npv;
        out.push_back(e);
    }
    std::stable_sort(out.begin(), out.end(), [](const TornadoEntry& a, const TornadoEntry& b) {
        if (a.range() != b.range()) return a.range() > b.range();
        return a.parameter < b.parameter;
    });
    return out;
}

}  // namespace odpcba
