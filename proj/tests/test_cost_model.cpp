#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "odpcba/cost_model.hpp"
#include "odpcba/io/fixtures.hpp"

using namespace odpcba;

static const std::string kFixtures = std::string(ODPCBA_REPO_ROOT) + "/fixtures";

namespace {

Model three_country_model() {
    std::vector<CountryAssumptions> doc(3);
    doc[0].country = {"AT", "Austria"};
    doc[0].ev_stock_0 = 343.8;
    doc[0].ev_cagr = 0.160;
    doc[0].et_stock_0 = 4.4;
    doc[0].et_cagr = 0.1260;
    doc[0].res_capacity_0 = 10.5;
    doc[0].res_addition = 664;
    doc[0].scc_end = 120;
    doc[0].cost_share = 0.45;
    doc[1].country = {"HU", "Hungary"};
    doc[1].ev_stock_0 = 100.8;
    doc[1].ev_cagr = 0.179;
    doc[1].et_stock_0 = 0.4;
    doc[1].et_cagr = 0.1399;
    doc[1].res_capacity_0 = 8.0;
    doc[1].res_addition = 2750;
    doc[1].scc_end = 120;
    doc[1].cost_share = 0.35;
    doc[2].country = {"SI", "Slovenia"};
    doc[2].ev_stock_0 = 50.0;
    doc[2].ev_cagr = 0.155;
    doc[2].et_stock_0 = 0.3;
    doc[2].et_cagr = 0.1431;
    doc[2].res_capacity_0 = 1.5;
    doc[2].res_addition = 150;
    doc[2].scc_end = 120;
    doc[2].cost_share = 0.20;
    return validate_or_throw(doc, TimeAxis{});
}

}  // namespace

TEST_CASE("opex_schedule decays geometrically") {
    TimeAxis axis;
    OpexPlan plan;
    plan.base_year_total = MoneyM::parse("37.4");
    plan.annual_decay = 0.0384;

    SECTION("zero decay is a constant series") {
        OpexPlan flat = plan;
        flat.annual_decay = 0;
        auto s = opex_schedule(flat, axis);
        for (auto v : s.values) CHECK(v == plan.base_year_total);
    }
    SECTION("fitted decay reproduces the published column within 0.2/yr") {
        auto s = opex_schedule(plan, axis);
        FixturePack pack = load_fixtures(kFixtures, axis);
        for (int y = 2026; y <= 2035; ++y)
            CHECK(std::abs(s.at_year(y).meur() - pack.opex.at_year(y).meur()) < 0.2);
        CHECK(s.sum().meur() == Catch::Approx(315.9).margin(1.0));
    }
}

TEST_CASE("opex category breakdown sums to the annual total exactly") {
    OpexPlan plan;
    plan.base_year_total = MoneyM::parse("37.4");
    // uneven shares
    plan.categories = {{"a", 0.21, true}, {"b", 0.33, false}, {"c", 0.17, false}, {"d", 0.29, true}};
    auto parts = opex_breakdown(plan, plan.base_year_total);
    MoneyM sum;
    for (auto p : parts) sum += p;
    CHECK(sum == plan.base_year_total);
}

TEST_CASE("capex_schedule prices newly integrated assets") {
    Model m = three_country_model();
    ProjectionSet proj = ProjectionSet::generate(m);

    SECTION("zero unit costs give a zero series") {
        CapexPlan plan;
        auto s = capex_schedule(plan, proj);
        for (auto v : s.values) CHECK(v.units() == 0);
    }
    SECTION("first year counts the initial stock as new") {
        CapexPlan plan;
        plan.unit_costs.per_new_ev = 100.0;
        auto s = capex_schedule(plan, proj);
        double stock0 = 343.8 + 100.8 + 50.0;  // thousands
        CHECK(s.at_year(2026).meur() == Catch::Approx(stock0 * 1000 * 100.0 / 1e6).margin(1e-3));
    }
    SECTION("calibration hits the discounted targets within 1%") {
        UnitCosts u = calibrate_unit_costs(proj, 0.04, 2025, 280.0, 120.0, 71.65);
        CapexPlan plan;
        plan.unit_costs = u;

        auto check_target = [&](const std::map<std::string, YearSeries<>>& stocks, double unit_cost, double scale,
                                double target) {
            double pv = 0;
            for (const auto& [id, series] : stocks) {
                auto nu = new_units(series);
                for (int k = 0; k < proj.axis.n_years(); ++k)
                    pv += nu.values[static_cast<std::size_t>(k)] * scale * unit_cost /
                          std::pow(1.04, proj.axis.year_at(k) - 2025) / 1e6;
            }
            CHECK(pv == Catch::Approx(target).epsilon(0.01));
        };
        check_target(proj.ev_stock, u.per_new_ev, 1000.0, 280.0);
        check_target(proj.et_stock, u.per_new_et, 1000.0, 120.0);
        check_target(proj.res_capacity, u.per_new_res_mw, 1000.0, 71.65);
    }
}

TEST_CASE("validate_cost_plan checks the one-time itemization") {
    CapexPlan capex;
    capex.one_time_items = {{"core", MoneyM::parse("50.0"), false}, {"models", MoneyM::parse("39.6"), true}};
    capex.one_time_stated_total = MoneyM::parse("89.6");
    OpexPlan opex;
    opex.base_year_total = MoneyM::parse("37.4");
    opex.annual_decay = 0.0384;

    CHECK(validate_cost_plan(capex, opex).empty());

    SECTION("itemization drift beyond 0.05 is flagged") {
        capex.one_time_items[0].amount = MoneyM::parse("53.0");
        auto issues = validate_cost_plan(capex, opex);
        REQUIRE_FALSE(issues.empty());
    }
    SECTION("opex shares must sum to one") {
        opex.categories = {{"a", 0.5, false}, {"b", 0.4, false}};
        auto issues = validate_cost_plan(capex, opex);
        REQUIRE_FALSE(issues.empty());
    }
}

TEST_CASE("allocate_costs_by_country") {
    Model m = three_country_model();
    FixturePack pack = load_fixtures(kFixtures, TimeAxis{});
    CostSchedule sched;
    sched.capex = pack.capex;
    sched.opex = pack.opex;
    sched.one_time = MoneyM::parse("89.6");

    auto split = allocate_costs_by_country(sched, m);
    REQUIRE(split.size() == 3);

    SECTION("re-aggregation is exact in every year") {
        for (int y = 2026; y <= 2035; ++y) {
            MoneyM capex_sum, opex_sum;
            for (const auto& [id, cs] : split) {
                capex_sum += cs.capex.at_year(y);
                opex_sum += cs.opex.at_year(y);
            }
            CHECK(capex_sum == sched.capex.at_year(y));
            CHECK(opex_sum == sched.opex.at_year(y));
        }
        MoneyM one_sum;
        for (const auto& [id, cs] : split) one_sum += cs.one_time;
        CHECK(one_sum == sched.one_time);
    }
    SECTION("totals land on the published country costs within 2%") {
        // exact 45/35/20 of 877.2 vs published 390.4/310.8/176.0
        CHECK(split.at("AT").total().meur() == Catch::Approx(394.74).margin(0.01));
        CHECK(split.at("AT").total().meur() == Catch::Approx(390.4).epsilon(0.02));
        CHECK(split.at("HU").total().meur() == Catch::Approx(310.8).epsilon(0.02));
        CHECK(split.at("SI").total().meur() == Catch::Approx(176.0).epsilon(0.02));
    }
    SECTION("fixture totals reproduce the published cost PV exactly") {
        CHECK(sched.total().str(1) == "877.2");
    }
}
