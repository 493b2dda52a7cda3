#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "odpcba/benefit_streams.hpp"

using namespace odpcba;

namespace {

// a params record with every platform-effect fraction zeroed
BenefitParams zero_effect_params() {
    BenefitParams p;
    p.r_odp = 0;
    p.f_arb = 0;
    p.r_res = 0;
    p.r_ev = 0;
    p.r_et = 0;
    p.r_peak = 0;
    p.res_curt = 0;
    p.r_fes = 0;
    p.r_gsms = 0;
    p.r_gsstab = 0;
    p.r_co2 = 0;
    return p;
}

Model tiny_model() {
    CountryAssumptions a;
    a.country = {"AT", "Austria"};
    a.ev_stock_0 = 100.0;
    a.ev_cagr = 0.10;
    a.et_stock_0 = 10.0;
    a.et_cagr = 0.05;
    a.res_capacity_0 = 5.0;
    a.res_addition = 200.0;
    a.grid_co2_intensity_0 = 190.0;
    a.scc_start = 85.0;
    a.scc_end = 120.0;
    a.cost_share = 1.0;
    return validate_or_throw({a}, TimeAxis{});
}

PollutantConfig tiny_pollutants() {
    PollutantConfig poll;
    poll.pollutants = {"NOx"};
    poll.factors["AT"]["NOx"] = PollutantFactor{0.3, 10.0};
    return poll;
}

}  // namespace

TEST_CASE("rod_annual") {
    BenefitParams p;
    p.c_od_base = 24.2;
    p.delta_eff = 0.15;
    p.r_odp = 0.13;
    CHECK(rod_annual(p) == Catch::Approx(3.6179).margin(1e-12));

    SECTION("no efficiency uplift") {
        p.delta_eff = 0;
        CHECK(rod_annual(p) == Catch::Approx(24.2 * 0.13).margin(1e-12));
    }
    SECTION("no platform effect") {
        p.r_odp = 0;
        CHECK(rod_annual(p) == 0.0);
    }
}

TEST_CASE("roetas_annual") {
    SECTION("proxy mode prices the baseline energy uplift") {
        BenefitParams p;
        p.f_arb = 0.05;
        p.p_avg = 25.0;
        p.flh_res = 1000.0;
        p.p_ev = 0;
        p.p_et = 0;
        // 10 TWh baseline -> 0.05 * 1e7 MWh * 25 EUR = 12.5 MEUR
        CHECK(roetas_annual(p, RoetasMode::Proxy, 10'000.0) == Catch::Approx(12.5).margin(1e-9));
    }
    SECTION("proxy with zero uplift fraction") {
        BenefitParams p;
        p.f_arb = 0;
        CHECK(roetas_annual(p, RoetasMode::Proxy, 20'000.0) == 0.0);
    }
    SECTION("hourly mode with identical flows nets to zero") {
        BenefitParams p;
        RoetasHourlyInputs in;
        in.q_flex_odp.values.assign(24, 5.0);
        in.q_flex_base.values.assign(24, 5.0);
        in.price_spread.values.assign(24, 12.0);
        in.anc_net_odp.push_back({std::vector<double>(24, 100.0), "EUR"});
        in.anc_net_base.push_back({std::vector<double>(24, 100.0), "EUR"});
        CHECK(roetas_annual(p, RoetasMode::Hourly, 0, &in) == 0.0);
    }
    SECTION("hourly mode rejects mixed resolutions") {
        BenefitParams p;
        RoetasHourlyInputs in;
        in.q_flex_odp.values.assign(24, 1.0);
        in.q_flex_base.values.assign(8760, 1.0);
        in.price_spread.values.assign(24, 1.0);
        CHECK_THROWS_AS(roetas_annual(p, RoetasMode::Hourly, 0, &in), MixedResolution);
    }
}

TEST_CASE("csdr_plr_annual") {
    SECTION("peak-load term alone") {
        BenefitParams p;
        p.c_dr = 0;
        p.r_res = 0;
        p.r_ev = 0;
        p.r_et = 0;
        p.r_pl = 10.0;
        p.r_peak = 0.15;
        p.flh_res = 1000.0;
        p.p_ev = 0;
        p.p_et = 0;
        // 1 TWh total baseline -> 10 * 0.15 * 1e6 = 1.5 MEUR
        CHECK(csdr_plr_annual(p, 1000.0) == Catch::Approx(1.5).margin(1e-9));
    }
    SECTION("all shiftable fractions zero") {
        BenefitParams p;
        p.r_res = 0;
        p.r_ev = 0;
        p.r_et = 0;
        p.r_peak = 0;
        CHECK(csdr_plr_annual(p, 5000.0) == 0.0);
    }
    SECTION("doubling the DR unit saving doubles the DR term") {
        BenefitParams p;
        p.r_pl = 0;  // isolate the first term
        p.p_ev = 100;
        p.p_et = 10;
        double once = csdr_plr_annual(p, 2000.0);
        p.c_dr *= 2;
        CHECK(csdr_plr_annual(p, 2000.0) == Catch::Approx(2 * once).margin(1e-12));
    }
}

TEST_CASE("aec_annual") {
    SECTION("parametric: 1% of 20 GW at 1200 h and 50 EUR/MWh") {
        BenefitParams p;
        p.res_curt = 0.01;
        p.flh_res = 1200.0;
        p.c_curt = 50.0;
        CHECK(aec_annual(p, AecMode::Parametric, 20'000.0) == Catch::Approx(12.0).margin(1e-9));
    }
    SECTION("parametric with zero avoided fraction") {
        BenefitParams p;
        p.res_curt = 0;
        CHECK(aec_annual(p, AecMode::Parametric, 20'000.0) == 0.0);
    }
    SECTION("KPI-delta mode") {
        BenefitParams p;
        p.loss_factor = 0.10;
        KpiDelta d{"res_generation", 1000.0, 1000.0, "MWh"};
        CHECK(aec_annual(p, AecMode::KpiDelta, 0, &d, 60.0) == 0.0);
        d.odp = 101'000.0;
        d.baseline = 1000.0;
        // 1e5 MWh * 60 * 0.9 = 5.4 MEUR
        CHECK(aec_annual(p, AecMode::KpiDelta, 0, &d, 60.0) == Catch::Approx(5.4).margin(1e-9));
        CHECK_THROWS_AS(aec_annual(p, AecMode::KpiDelta, 0, nullptr, 60.0), ModeInputMissing);
    }
}

TEST_CASE("fes_annual") {
    BenefitParams p;
    p.r_fes = 0.01;
    p.eta_ev = 1.0;
    p.eta_et = 1.0;
    p.s_ev = 800.0;
    p.s_et = 1920.0;
    // 494.6k EVs + 5.1k ETs
    CHECK(fes_annual(p, 494'600, 5'100) == Catch::Approx(4.0547).margin(5e-4));

    SECTION("zero savings fraction") {
        p.r_fes = 0;
        CHECK(fes_annual(p, 1e6, 1e4) == 0.0);
    }
    SECTION("linear in fleet size") {
        double once = fes_annual(p, 100'000, 2'000);
        CHECK(fes_annual(p, 200'000, 4'000) == Catch::Approx(2 * once).margin(1e-12));
    }
    SECTION("negative counts rejected") { CHECK_THROWS_AS(fes_annual(p, -1, 0), std::invalid_argument); }
}

TEST_CASE("gsms_annual") {
    SECTION("fuel-timing term") {
        BenefitParams p;
        p.r_gsms = 0.05;
        p.e_ev_yr = 3.0;
        p.c_fuel = 500.0;
        p.r_gsstab = 0;
        p.unit_bridge = 0;
        // 5% * (100k * 3 MWh) * 500 EUR = 7.5 MEUR
        CHECK(gsms_annual(p, 100'000, 0, 0) == Catch::Approx(7.5).margin(1e-9));
    }
    SECTION("all rates and bridge zero") {
        BenefitParams p;
        p.r_gsms = 0;
        p.r_gsstab = 0;
        p.unit_bridge = 0;
        CHECK(gsms_annual(p, 1e6, 1e4, 20'000.0) == 0.0);
    }
    SECTION("stability term is linear in the market price") {
        BenefitParams p;
        p.r_gsms = 0;
        p.unit_bridge = 0;
        p.r_gsstab = 0.01;
        double once = gsms_annual(p, 50'000, 1'000, 0);
        p.p_market *= 3;
        CHECK(gsms_annual(p, 50'000, 1'000, 0) == Catch::Approx(3 * once).margin(1e-12));
    }
    SECTION("deferral term carries the platform effect rate") {
        BenefitParams p = zero_effect_params();
        p.unit_bridge = 1e-8;
        CHECK(gsms_annual(p, 1e5, 1e3, 20'000.0) == 0.0);
    }
}

TEST_CASE("co2_annual") {
    SECTION("scalar mode: 12% of 10 TWh at 0.19 tCO2/MWh and 85 EUR/t") {
        BenefitParams p;
        p.r_co2 = 0.12;
        p.mef_co2 = 0.19;
        p.e_ev_yr = 10.0;
        p.e_et_yr = 0.0;
        CHECK(co2_annual(p, 0, 1'000'000, 0, 85.0) == Catch::Approx(19.38).margin(1e-9));
    }
    SECTION("zero reduction fraction") {
        BenefitParams p;
        p.r_co2 = 0;
        CHECK(co2_annual(p, 10'000, 1e6, 1e4, 85.0) == 0.0);
    }
    SECTION("hourly mode with a flat profile equals scalar mode exactly") {
        BenefitParams p;
        p.r_co2 = 0.12;
        p.mef_co2 = 0.19;
        p.e_ev_yr = 10.0;
        double scalar = co2_annual(p, 5'000, 250'000, 0, 92.5);
        HourlySeries flat{std::vector<double>(8760, 0.19), "tCO2/MWh"};
        double hourly = co2_annual(p, 5'000, 250'000, 0, 92.5, &flat);
        CHECK(hourly == scalar);
    }
}

TEST_CASE("rap_annual") {
    std::map<std::string, PollutantFactor> factors{{"NOx", {0.0, 1.0}}};

    SECTION("vehicle term with unit effect rate") {
        BenefitParams p;
        p.r_odp = 1.0;
        p.alpha_ev = 0.01;
        p.d_ev = 10'000.0;
        p.alpha_et = 0;
        p.r_dec = 0;
        // 0.01 kg/km * 10,000 km * 100k veh * 1 EUR/kg = 10 MEUR
        CHECK(rap_annual(p, 100'000, 0, 0, {"NOx"}, factors) == Catch::Approx(10.0).margin(1e-9));
    }
    SECTION("empty pollutant set") {
        BenefitParams p;
        CHECK(rap_annual(p, 1e6, 1e4, 1e4, {}, factors) == 0.0);
    }
    SECTION("doubling the damage cost doubles the result") {
        BenefitParams p;
        p.r_odp = 0.5;
        double once = rap_annual(p, 1e5, 1e3, 1e4, {"NOx"}, {{"NOx", {0.3, 5.0}}});
        double twice = rap_annual(p, 1e5, 1e3, 1e4, {"NOx"}, {{"NOx", {0.3, 10.0}}});
        CHECK(twice == Catch::Approx(2 * once).margin(1e-12));
    }
    SECTION("missing factors raise") {
        BenefitParams p;
        CHECK_THROWS_AS(rap_annual(p, 1, 1, 1, {"PM2.5"}, factors), MissingPollutantFactor);
    }
}

TEST_CASE("streams are positively homogeneous in their valuation parameter") {
    BenefitParams p;
    p.p_ev = 300;
    p.p_et = 30;
    double c_res = 15'000;

    auto doubled = [&](auto&& f, double& price) {
        double once = f();
        price *= 2;
        double twice = f();
        price /= 2;
        CHECK(twice == Catch::Approx(2 * once).epsilon(1e-12));
    };
    doubled([&] { return aec_annual(p, AecMode::Parametric, c_res); }, p.c_curt);
    doubled([&] { return roetas_annual(p, RoetasMode::Proxy, c_res); }, p.p_avg);
    doubled([&] { return fes_annual(p, 1e5, 1e3); }, p.s_ev);
}

TEST_CASE("diurnal_emission_delta") {
    HourlySeries mef{std::vector<double>(24, 0.2), "tCO2/MWh"};
    HourlySeries base{std::vector<double>(24, 10.0), "MW"};

    SECTION("identical profiles give zero") {
        CHECK(diurnal_emission_delta(base, base, mef) == 0.0);
    }
    SECTION("flat factor gives zero for any conserving shift") {
        HourlySeries shifted = base;
        shifted.values[3] -= 4.0;
        shifted.values[21] += 4.0;
        CHECK(diurnal_emission_delta(base, shifted, mef) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("moving 10 MWh from a 0.28 hour to a 0.10 hour avoids 1.8 tCO2") {
        HourlySeries m{std::vector<double>(24, 0.15), "tCO2/MWh"};
        m.values[18] = 0.28;
        m.values[3] = 0.10;
        HourlySeries shifted = base;
        shifted.values[18] -= 10.0;
        shifted.values[3] += 10.0;
        CHECK(diurnal_emission_delta(base, shifted, m) == Catch::Approx(1.8).margin(1e-12));
    }
    SECTION("non-conserving shifts are rejected") {
        HourlySeries shifted = base;
        shifted.values[0] += 1.0;
        CHECK_THROWS_AS(diurnal_emission_delta(base, shifted, mef), EnergyNotConserved);
    }
}

TEST_CASE("benefits_table") {
    Model m = tiny_model();
    ProjectionSet proj = ProjectionSet::generate(m);
    PollutantConfig poll = tiny_pollutants();

    SECTION("flat drivers reproduce the per-formula base values every year") {
        StreamOptions opts;
        for (Stream s : kAllStreams) opts.drivers[s] = DriverKind::Flat;
        BenefitParams p;
        StreamTable t = benefits_table(m, proj, p, opts, poll);

        BenefitParams pc = p;
        pc.p_ev = 100.0 * 7.0;  // thousands * kW/veh = MW
        pc.p_et = 10.0 * 50.0;
        pc.mef_co2 = 0.19;
        double expected_rod = rod_annual(pc);
        for (int y = 2026; y <= 2035; ++y)
            CHECK(t.at(Stream::ROD, "AT", y).meur() == Catch::Approx(expected_rod).margin(1e-6));
        double expected_aec = aec_annual(pc, AecMode::Parametric, 5000.0);
        CHECK(t.at(Stream::AEC, "AT", 2026).meur() == Catch::Approx(expected_aec).margin(1e-6));
    }

    SECTION("zeroing every platform-effect fraction nulls the whole table") {
        StreamOptions opts;
        StreamTable t = benefits_table(m, proj, zero_effect_params(), opts, poll);
        for (Stream s : kAllStreams)
            for (int y = 2026; y <= 2035; ++y) CHECK(t.at(s, "AT", y).units() == 0);
    }

    SECTION("fleet-driven streams grow with the fleet index") {
        StreamOptions opts;
        BenefitParams p;
        StreamTable t = benefits_table(m, proj, p, opts, poll);
        DriverIndex fleet = build_driver(DriverKind::Fleet, proj, "AT");
        double base = t.at(Stream::FES, "AT", 2026).meur();
        CHECK(t.at(Stream::FES, "AT", 2030).meur() == Catch::Approx(base * fleet.at_year(2030)).margin(1e-5));
    }

    SECTION("ledger on never increases any stream") {
        StreamOptions off;
        StreamOptions on;
        on.ledger.enabled = true;
        on.ledger.budget_fraction = 0.02;
        BenefitParams p;
        StreamTable t_off = benefits_table(m, proj, p, off, poll);
        StreamTable t_on = benefits_table(m, proj, p, on, poll);
        for (Stream s : kAllStreams)
            for (int y = 2026; y <= 2035; ++y) CHECK(t_on.at(s, "AT", y) <= t_off.at(s, "AT", y));
        // FES is vehicle-level and exempt from the ledger
        for (int y = 2026; y <= 2035; ++y) CHECK(t_on.at(Stream::FES, "AT", y) == t_off.at(Stream::FES, "AT", y));
    }

    SECTION("table totals are consistent with per-cell sums") {
        StreamOptions opts;
        BenefitParams p;
        StreamTable t = benefits_table(m, proj, p, opts, poll);
        MoneyM by_stream;
        for (Stream s : kAllStreams) by_stream += t.stream_total(s);
        MoneyM by_year;
        for (int y = 2026; y <= 2035; ++y) by_year += t.year_total(y);
        CHECK(by_stream == t.grand_total());
        CHECK(by_year == t.grand_total());
    }
}
