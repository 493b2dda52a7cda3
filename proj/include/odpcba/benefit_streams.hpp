#pragma once

// The eight monetized benefit streams, the hourly series helpers, and the
// anti-double-counting flexibility ledger. Stream calculators return the
// base-year magnitude in MEUR/yr; year-on-year growth is applied by
// benefits_table through a per-stream DriverIndex.
//
// All calculators are pure. EUR-scale arithmetic runs in full double
// precision; results enter StreamTable as fixed-point MoneyM.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odpcba/errors.hpp"
#include "odpcba/model.hpp"
#include "odpcba/money.hpp"
#include "odpcba/projections.hpp"

namespace odpcba {

enum class Stream { ROD, ROETAS, CSDR_PLR, FES, AEC, GSMS, CO2, RAP };

inline constexpr std::array<Stream, 8> kAllStreams = {Stream::ROD,  Stream::ROETAS, Stream::CSDR_PLR, Stream::FES,
                                                      Stream::AEC,  Stream::GSMS,   Stream::CO2,      Stream::RAP};

inline const char* to_string(Stream s) {
    switch (s) {
        case Stream::ROD: return "ROD";
        case Stream::ROETAS: return "ROETAS";
        case Stream::CSDR_PLR: return "CSDR_PLR";
        case Stream::FES: return "FES";
        case Stream::AEC: return "AEC";
        case Stream::GSMS: return "GSMS";
        case Stream::CO2: return "CO2";
        case Stream::RAP: return "RAP";
    }
    return "?";
}

inline std::optional<Stream> stream_from_string(const std::string& name) {
    for (Stream s : kAllStreams)
        if (name == to_string(s)) return s;
    return std::nullopt;
}

// Fixed-resolution intra-year profile (24 = diurnal, 8760 = hourly year).
struct HourlySeries {
    std::vector<double> values;
    std::string unit;  // "MW", "EUR/MWh", "tCO2/MWh", ...

    std::size_t resolution() const { return values.size(); }
    bool valid_resolution() const { return values.size() == 24 || values.size() == 8760; }

    double sum() const {
        double s = 0;
        for (double v : values) s += v;
        return s;
    }
    double mean() const {
        if (values.empty()) return 0;
        // constant profiles keep the exact value
        bool constant = true;
        for (double v : values)
            if (v != values.front()) {
                constant = false;
                break;
            }
        if (constant) return values.front();
        return sum() / static_cast<double>(values.size());
    }
};

struct KpiDelta {
    std::string kpi;
    double baseline = 0;
    double odp = 0;
    std::string unit;

    double delta() const { return odp - baseline; }
};

// All valuation parameters in one typed record. Fractions are plain ratios
// (0.15 = 15%), prices EUR/MWh, per-vehicle figures as annotated.
struct BenefitParams {
    // reliability / downtime
    double c_od_base = 24.2;  // MEUR/yr baseline downtime cost
    double delta_eff = 0.15;  // self-efficiency improvement fraction
    double r_odp = 0.13;      // ODP downtime savings rate

    // trading
    double p_avg = 25.0;      // EUR/MWh average electricity price
    double f_arb = 0.05;      // arbitrage uplift fraction
    double flh_res = 1200.0;  // RES full-load hours, h/yr
    double eta_cycle = 0.90;  // round-trip efficiency for hourly arbitrage

    // demand response / peak load
    double c_dr = 8.0;    // EUR/MWh unit saving per shifted MWh
    double r_res = 0.05;  // shiftable fraction of RES output
    double r_ev = 0.10;   // shiftable fraction of EV charging energy
    double r_et = 0.10;   // shiftable fraction of ET charging energy
    double r_peak = 0.15; // peak-shiftable share of annual energy
    double r_pl = 10.0;   // EUR/MWh peak-load reduction revenue

    // curtailment
    double res_curt = 0.01;    // avoided curtailment fraction of RES output
    double c_curt = 50.0;      // EUR/MWh curtailment valuation
    double loss_factor = 0.10; // delivery losses in the KPI-delta mode

    // fleet savings
    double r_fes = 0.01;  // overall fleet savings fraction
    double eta_ev = 1.0;  // efficiency factor (dimensionless)
    double eta_et = 1.0;
    double s_ev = 800.0;   // EUR/vehicle/yr
    double s_et = 1920.0;  // EUR/vehicle/yr

    // grid stability
    double r_gsms = 0.05;    // forecasting improvement fraction
    double c_fuel = 500.0;   // EUR/MWh avoided fuel value
    double r_gsstab = 0.01;  // grid-stability savings fraction
    double p_market = 30.0;  // EUR/MWh market price term
    double e_ev_yr = 1.2;    // MWh/vehicle/yr charging energy
    double e_et_yr = 30.0;   // MWh/vehicle/yr
    // Renders the downtime-deferral term of the stability formula in MEUR;
    // the raw product MEUR * MW * h is dimensionally irregular, so the bridge
    // is an explicit calibration scalar rather than a silent reinterpretation.
    double unit_bridge = 5.8e-8;

    // emissions
    double r_co2 = 0.12;    // ODP-enabled CO2 reduction fraction
    double mef_co2 = 0.19;  // tCO2/MWh annual marginal emission factor

    // pollutants
    double alpha_ev = 0.00005;  // kg/km pollutant reduction factor, EVs
    double alpha_et = 0.0004;   // kg/km, ETs
    double d_ev = 12000.0;      // km/yr per EV
    double d_et = 60000.0;      // km/yr per ET
    double r_dec = 0.05;        // decarbonized-RES share factor

    // capacities (aggregate MW; set per evaluation context)
    double p_ev = 0.0;
    double p_et = 0.0;
    double h_yr = 8760.0;

    // helpers
    double e_res_base(double c_res_mw) const { return c_res_mw * flh_res; }          // MWh/yr
    double e_ev_base() const { return p_ev * h_yr; }                                 // MWh/yr
    double e_et_base() const { return p_et * h_yr; }                                 // MWh/yr
};

inline std::vector<ValidationIssue> validate_params(const BenefitParams& p) {
    std::vector<ValidationIssue> issues;
    auto frac = [&](double v, const char* field) {
        if (!(v >= 0.0 && v <= 1.0)) issues.push_back({ValidationCode::BadFraction, "", field, std::to_string(v)});
    };
    auto nonneg = [&](double v, const char* field) {
        if (!(v >= 0.0)) issues.push_back({ValidationCode::NegativeValue, "", field, std::to_string(v)});
    };
    frac(p.delta_eff, "delta_eff");
    frac(p.r_odp, "r_odp");
    frac(p.f_arb, "f_arb");
    frac(p.eta_cycle, "eta_cycle");
    frac(p.r_res, "r_res");
    frac(p.r_ev, "r_ev");
    frac(p.r_et, "r_et");
    frac(p.r_peak, "r_peak");
    frac(p.res_curt, "res_curt");
    frac(p.loss_factor, "loss_factor");
    frac(p.r_fes, "r_fes");
    frac(p.r_gsms, "r_gsms");
    frac(p.r_gsstab, "r_gsstab");
    frac(p.r_co2, "r_co2");
    frac(p.r_dec, "r_dec");
    nonneg(p.c_od_base, "c_od_base");
    nonneg(p.p_avg, "p_avg");
    nonneg(p.flh_res, "flh_res");
    nonneg(p.c_dr, "c_dr");
    nonneg(p.r_pl, "r_pl");
    nonneg(p.c_curt, "c_curt");
    nonneg(p.s_ev, "s_ev");
    nonneg(p.s_et, "s_et");
    nonneg(p.c_fuel, "c_fuel");
    nonneg(p.p_market, "p_market");
    nonneg(p.e_ev_yr, "e_ev_yr");
    nonneg(p.e_et_yr, "e_et_yr");
    nonneg(p.mef_co2, "mef_co2");
    nonneg(p.p_ev, "p_ev");
    nonneg(p.p_et, "p_et");
    nonneg(p.h_yr, "h_yr");
    return issues;
}

constexpr double kEurPerMeur = 1e6;

// --- stream calculators (MEUR/yr, base-year magnitude) ----------------------

// Avoided unserved-energy cost from predictive maintenance.
inline double rod_annual(const BenefitParams& p) { return p.c_od_base * (1.0 + p.delta_eff) * p.r_odp; }

enum class RoetasMode { Hourly, Proxy };

struct RoetasHourlyInputs {
    // arbitrage: energy shifted per hour (MWh) and realized price spread
    HourlySeries q_flex_odp;       // MWh
    HourlySeries q_flex_base;      // MWh
    HourlySeries price_spread;     // EUR/MWh
    // per ancillary product: hourly net revenue (revenue - cost), EUR
    std::vector<HourlySeries> anc_net_odp;
    std::vector<HourlySeries> anc_net_base;
};

// Incremental trading value. Hourly mode takes explicit ODP/baseline flows;
// proxy mode applies the uplift fraction to baseline energy value.
inline double roetas_annual(const BenefitParams& p, RoetasMode mode, double c_res_mw,
                            const RoetasHourlyInputs* hourly = nullptr) {
    if (mode == RoetasMode::Proxy) {
        double energy = p.e_res_base(c_res_mw) + p.e_ev_base() + p.e_et_base();  // MWh
        return p.f_arb * energy * p.p_avg / kEurPerMeur;
    }
    if (!hourly) throw ModeInputMissing("roetas_annual: hourly inputs required");
    std::size_t res = hourly->q_flex_odp.resolution();
    auto check = [&](const HourlySeries& s, const char* what) {
        if (s.resolution() != res) throw MixedResolution(std::string("roetas_annual: ") + what);
    };
    check(hourly->q_flex_base, "q_flex_base");
    check(hourly->price_spread, "price_spread");
    for (const auto& s : hourly->anc_net_odp) check(s, "anc_net_odp");
    for (const auto& s : hourly->anc_net_base) check(s, "anc_net_base");
    if (hourly->anc_net_odp.size() != hourly->anc_net_base.size())
        throw MixedResolution("roetas_annual: ancillary product count mismatch");

    double eur = 0;
    for (std::size_t t = 0; t < res; ++t) {
        double arb_odp = hourly->q_flex_odp.values[t] * hourly->price_spread.values[t] * p.eta_cycle;
        double arb_base = hourly->q_flex_base.values[t] * hourly->price_spread.values[t] * p.eta_cycle;
        eur += arb_odp - arb_base;
    }
    for (std::size_t s = 0; s < hourly->anc_net_odp.size(); ++s)
        for (std::size_t t = 0; t < res; ++t) eur += hourly->anc_net_odp[s].values[t] - hourly->anc_net_base[s].values[t];
    return eur / kEurPerMeur;
}

// Demand-response savings plus peak-load reduction revenue.
inline double csdr_plr_annual(const BenefitParams& p, double c_res_mw) {
    double dr_mwh = c_res_mw * p.r_res * p.flh_res + p.p_ev * p.r_ev * p.h_yr + p.p_et * p.r_et * p.h_yr;
    double peak_mwh = p.r_peak * (p.e_res_base(c_res_mw) + p.e_ev_base() + p.e_et_base());
    return (p.c_dr * dr_mwh + p.r_pl * peak_mwh) / kEurPerMeur;
}

enum class AecMode { Parametric, KpiDelta };

// Avoided curtailment. Parametric mode prices a fixed avoided fraction of
// RES output; KPI-delta mode prices an observed generation delta.
inline double aec_annual(const BenefitParams& p, AecMode mode, double c_res_mw,
                         const KpiDelta* delta = nullptr, double wholesale_eur_mwh = 0) {
    if (mode == AecMode::Parametric) return p.res_curt * c_res_mw * p.flh_res * p.c_curt / kEurPerMeur;
    if (!delta) throw ModeInputMissing("aec_annual: KPI delta required");
    return delta->delta() * wholesale_eur_mwh * (1.0 - p.loss_factor) / kEurPerMeur;
}

// Vehicle-level operating and battery-degradation savings.
inline double fes_annual(const BenefitParams& p, double n_ev, double n_et) {
    if (n_ev < 0 || n_et < 0) throw std::invalid_argument("fes_annual: negative fleet count");
    return p.r_fes * (n_ev * p.eta_ev * p.s_ev + n_et * p.eta_et * p.s_et) / kEurPerMeur;
}

// DSO/TSO stability savings: fuel-timing savings, downtime deferral
// (bridged), and imbalance-charge reduction. The deferral term scales with
// r_odp so a null platform effect produces a null stream.
inline double gsms_annual(const BenefitParams& p, double n_ev, double n_et, double c_res_mw) {
    double fleet_mwh = n_ev * p.e_ev_yr + n_et * p.e_et_yr;
    double fuel = p.r_gsms * fleet_mwh * p.c_fuel / kEurPerMeur;
    double deferral = p.c_od_base * c_res_mw * p.flh_res * p.r_odp * p.unit_bridge;
    double stability = p.r_gsstab * fleet_mwh * p.p_market / kEurPerMeur;
    return fuel + deferral + stability;
}

// CO2 reduction priced at the social cost of carbon. The covered volume is
// RES output plus fleet charging energy; `mef` may be a scalar annual factor
// or an intra-year profile (hour-weighted mean).
inline double co2_annual(const BenefitParams& p, double c_res_mw, double n_ev, double n_et, double scc_eur_t,
                         const HourlySeries* mef_profile = nullptr) {
    if (scc_eur_t < 0) throw std::invalid_argument("co2_annual: negative SCC");
    double volume_mwh = c_res_mw * p.flh_res + n_ev * p.e_ev_yr + n_et * p.e_et_yr;
    double mef = p.mef_co2;
    if (mef_profile) {
        if (!mef_profile->valid_resolution()) throw MixedResolution("co2_annual: mef resolution");
        mef = mef_profile->mean();
    }
    if (mef < 0) throw std::invalid_argument("co2_annual: negative MEF");
    return p.r_co2 * volume_mwh * mef * scc_eur_t / kEurPerMeur;
}

struct PollutantFactor {
    double ef_poll = 0;      // kg/MWh marginal emission factor
    double damage_cost = 0;  // EUR/kg country-specific marginal damage
};

// Local air-pollutant reduction across the configured pollutant set. All
// three terms carry the platform effect rate; vehicle distances are km/yr.
inline double rap_annual(const BenefitParams& p, double n_ev, double n_et, double c_res_mw,
                         const std::vector<std::string>& pollutants,
                         const std::map<std::string, PollutantFactor>& factors) {
    double eur = 0;
    for (const auto& name : pollutants) {
        auto it = factors.find(name);
        if (it == factors.end()) throw MissingPollutantFactor("rap_annual: no factors for " + name);
        const PollutantFactor& f = it->second;
        double kg = p.alpha_ev * p.d_ev * n_ev * p.r_odp + p.alpha_et * p.d_et * n_et * p.r_odp +
                    f.ef_poll * c_res_mw * p.flh_res * p.r_dec * p.r_odp;
        eur += kg * f.damage_cost;
    }
    return eur / kEurPerMeur;
}

// --- flexibility ledger ------------------------------------------------------

// Ordered channels; a later channel receives energy only after earlier ones
// are satisfied.
enum class FlexChannel { ReliabilityCongestion = 0, ResAbsorption = 1, MarketArbitrage = 2, ResidualDR = 3 };

inline const char* to_string(FlexChannel c) {
    switch (c) {
        case FlexChannel::ReliabilityCongestion: return "ReliabilityCongestion";
        case FlexChannel::ResAbsorption: return "ResAbsorption";
        case FlexChannel::MarketArbitrage: return "MarketArbitrage";
        case FlexChannel::ResidualDR: return "ResidualDR";
    }
    return "?";
}

// Integer micro-MWh internally so conservation is exact.
struct FlexLedger {
    static constexpr std::int64_t kScale = 1'000'000;

    std::array<std::int64_t, 4> allocated_u{};  // micro-MWh per channel
    std::int64_t budget_u = 0;
    std::int64_t residual_u = 0;

    double allocated(FlexChannel c) const {
        return static_cast<double>(allocated_u[static_cast<std::size_t>(c)]) / kScale;
    }
    double budget() const { return static_cast<double>(budget_u) / kScale; }
    double residual() const { return static_cast<double>(residual_u) / kScale; }
};

// Greedy fill in the fixed channel order; residual = budget - sum(allocated),
// exactly.
inline FlexLedger allocate_flexibility(double budget_mwh, const std::array<double, 4>& demands_mwh) {
    if (budget_mwh < 0) throw std::invalid_argument("allocate_flexibility: negative budget");
    FlexLedger led;
    led.budget_u = std::llround(budget_mwh * FlexLedger::kScale);
    std::int64_t remaining = led.budget_u;
    for (std::size_t i = 0; i < 4; ++i) {
        if (demands_mwh[i] < 0) throw std::invalid_argument("allocate_flexibility: negative demand");
        std::int64_t want = std::llround(demands_mwh[i] * FlexLedger::kScale);
        std::int64_t take = want < remaining ? want : remaining;
        led.allocated_u[i] = take;
        remaining -= take;
    }
    led.residual_u = remaining;
    return led;
}

// Emission change from shifting load across an intra-year emission profile.
// Positive when the shift moves energy into lower-MEF hours.
inline double diurnal_emission_delta(const HourlySeries& baseline, const HourlySeries& shifted,
                                     const HourlySeries& mef) {
    if (baseline.resolution() != shifted.resolution() || baseline.resolution() != mef.resolution())
        throw MixedResolution("diurnal_emission_delta: resolutions differ");
    double e_base = baseline.sum(), e_shift = shifted.sum();
    if (std::abs(e_base - e_shift) > 1e-6)
        throw EnergyNotConserved("diurnal_emission_delta: shift changes total energy");
    double t = 0;
    for (std::size_t h = 0; h < baseline.resolution(); ++h)
        t += (baseline.values[h] - shifted.values[h]) * mef.values[h];
    return t;  // tCO2 per profile period
}

// --- stream table ------------------------------------------------------------

// Annual monetized benefits per stream x country x year.
struct StreamTable {
    TimeAxis axis;
    std::vector<std::string> country_ids;
    // values[stream][country][year_index]
    std::map<Stream, std::map<std::string, YearSeries<MoneyM>>> values;

    MoneyM at(Stream s, const std::string& country, int year) const {
        return values.at(s).at(country).at_year(year);
    }
    MoneyM stream_year_total(Stream s, int year) const {
        MoneyM t;
        for (const auto& [id, series] : values.at(s)) t += series.at_year(year);
        return t;
    }
    MoneyM year_total(int year) const {
        MoneyM t;
        for (Stream s : kAllStreams)
            if (values.count(s)) t += stream_year_total(s, year);
        return t;
    }
    MoneyM stream_total(Stream s) const {
        MoneyM t;
        for (const auto& [id, series] : values.at(s)) t += series.sum();
        return t;
    }
    MoneyM grand_total() const {
        MoneyM t;
        for (Stream s : kAllStreams)
            if (values.count(s)) t += stream_total(s);
        return t;
    }
    YearSeries<MoneyM> totals_by_year() const {
        std::vector<MoneyM> v(static_cast<std::size_t>(axis.n_years()));
        for (int k = 0; k < axis.n_years(); ++k) v[static_cast<std::size_t>(k)] = year_total(axis.year_at(k));
        return YearSeries<MoneyM>(axis, std::move(v));
    }
};

struct LedgerSettings {
    bool enabled = false;
    // flexible-energy budget as a fraction of total annual energy
    double budget_fraction = 0.15;
};

struct StreamOptions {
    AecMode aec_mode = AecMode::Parametric;
    LedgerSettings ledger;
    std::map<Stream, DriverKind> drivers = default_drivers();
    CompositeWeights composite{0.5, 0.5};

    static std::map<Stream, DriverKind> default_drivers() {
        return {
            {Stream::ROD, DriverKind::Fleet},     {Stream::ROETAS, DriverKind::Composite},
            {Stream::CSDR_PLR, DriverKind::Fleet},{Stream::FES, DriverKind::Fleet},
            {Stream::AEC, DriverKind::Res},       {Stream::GSMS, DriverKind::Fleet},
            {Stream::CO2, DriverKind::Fleet},     {Stream::RAP, DriverKind::Fleet},
        };
    }
};

// Per-country pollutant configuration.
struct PollutantConfig {
    std::vector<std::string> pollutants = {"NOx", "SOx", "PM2.5"};
    // country id -> pollutant -> factors
    std::map<std::string, std::map<std::string, PollutantFactor>> factors;
};

namespace detail {

// Ledger-capped scale factor for one stream in one country-year. Channel
// demands are the formula energy volumes; a capped channel scales its
// dependent stream proportionally. FES stays vehicle-level and is exempt.
struct LedgerScales {
    double reliability = 1.0;
    double res_absorption = 1.0;
    double arbitrage = 1.0;
    double residual_dr = 1.0;
};

inline LedgerScales ledger_scales(const BenefitParams& p, double c_res_mw, const LedgerSettings& settings) {
    LedgerScales s;
    if (!settings.enabled) return s;
    double e_total = p.e_res_base(c_res_mw) + p.e_ev_base() + p.e_et_base();
    double budget = settings.budget_fraction * e_total;
    std::array<double, 4> demands{};
    double reliability_mwh = p.r_gsms * (p.e_ev_base() + p.e_et_base());
    double res_mwh = p.res_curt * p.e_res_base(c_res_mw);
    double arb_mwh = p.f_arb * e_total;
    double dr_mwh = c_res_mw * p.r_res * p.flh_res + p.p_ev * p.r_ev * p.h_yr + p.p_et * p.r_et * p.h_yr;
    demands[0] = reliability_mwh;
    demands[1] = res_mwh;
    demands[2] = arb_mwh;
    demands[3] = dr_mwh;
    FlexLedger led = allocate_flexibility(budget, demands);
    auto scale = [&](FlexChannel c, double demand) {
        return demand > 0 ? led.allocated(c) / demand : 1.0;
    };
    s.reliability = scale(FlexChannel::ReliabilityCongestion, reliability_mwh);
    s.res_absorption = scale(FlexChannel::ResAbsorption, res_mwh);
    s.arbitrage = scale(FlexChannel::MarketArbitrage, arb_mwh);
    s.residual_dr = scale(FlexChannel::ResidualDR, dr_mwh);
    return s;
}

}  // namespace detail

// Charging-capacity derivation from stock (thousands of vehicles -> MW).
struct ChargingCapacity {
    double kw_per_ev = 7.0;
    double kw_per_et = 50.0;
};

// Full formula-mode table: base-year formula value per stream and country,
// scaled by the configured growth driver, with optional ledger capping.
inline StreamTable benefits_table(const Model& model, const ProjectionSet& proj, const BenefitParams& base_params,
                                  const StreamOptions& opts, const PollutantConfig& poll,
                                  ChargingCapacity cap = {}) {
    StreamTable table;
    table.axis = model.axis();
    for (const auto& a : model.countries()) table.country_ids.push_back(a.country.id);

    for (const auto& a : model.countries()) {
        const std::string& id = a.country.id;
        std::map<DriverKind, DriverIndex> driver_cache;
        auto driver_for = [&](Stream s) -> const DriverIndex& {
            DriverKind kind = opts.drivers.count(s) ? opts.drivers.at(s) : DriverKind::Flat;
            auto it = driver_cache.find(kind);
            if (it == driver_cache.end())
                it = driver_cache.emplace(kind, build_driver(kind, proj, id, opts.composite)).first;
            return it->second;
        };

        // base-year inputs
        BenefitParams p = base_params;
        double n_ev0 = proj.ev(id).at_year(table.axis.first_year) * 1000.0;
        double n_et0 = proj.et(id).at_year(table.axis.first_year) * 1000.0;
        double c_res0 = proj.res(id).at_year(table.axis.first_year) * 1000.0;  // GW -> MW
        p.p_ev = proj.ev(id).at_year(table.axis.first_year) * cap.kw_per_ev;   // thousands * kW = MW
        p.p_et = proj.et(id).at_year(table.axis.first_year) * cap.kw_per_et;
        p.mef_co2 = a.grid_co2_intensity_0 / 1000.0;  // g/kWh == kg/MWh -> tCO2/MWh

        auto scales = detail::ledger_scales(p, c_res0, opts.ledger);
        double scc0 = interpolate_scc(a, table.axis, table.axis.first_year);

        std::map<Stream, double> base_meur;
        base_meur[Stream::ROD] = rod_annual(p) * scales.reliability;
        base_meur[Stream::ROETAS] = roetas_annual(p, RoetasMode::Proxy, c_res0) * scales.arbitrage;
        base_meur[Stream::CSDR_PLR] = csdr_plr_annual(p, c_res0) * scales.residual_dr;
        base_meur[Stream::FES] = fes_annual(p, n_ev0, n_et0);  // vehicle-level, ledger-exempt
        base_meur[Stream::AEC] = aec_annual(p, opts.aec_mode, c_res0) * scales.res_absorption;
        base_meur[Stream::GSMS] = gsms_annual(p, n_ev0, n_et0, c_res0) * scales.reliability;
        base_meur[Stream::CO2] = co2_annual(p, c_res0, n_ev0, n_et0, scc0);
        base_meur[Stream::RAP] = rap_annual(p, n_ev0, n_et0, c_res0, poll.pollutants,
                                            poll.factors.count(id) ? poll.factors.at(id)
                                                                   : std::map<std::string, PollutantFactor>{});

        for (Stream s : kAllStreams) {
            const DriverIndex& drv = driver_for(s);
            std::vector<MoneyM> v(static_cast<std::size_t>(table.axis.n_years()));
            for (int k = 0; k < table.axis.n_years(); ++k) {
                int year = table.axis.year_at(k);
                double meur = base_meur[s] * drv.at_year(year);
                // the SCC trajectory applies on top of fleet growth
                if (s == Stream::CO2 && scc0 > 0)
                    meur *= interpolate_scc(a, table.axis, year) / scc0;
                v[static_cast<std::size_t>(k)] = MoneyM::from_meur(meur);
            }
            table.values[s][id] = YearSeries<MoneyM>(table.axis, std::move(v));
        }
    }
    return table;
}

}  // namespace odpcba
