#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "odpcba/io/fixtures.hpp"
#include "odpcba/projections.hpp"

using namespace odpcba;

static const std::string kFixtures = std::string(ODPCBA_REPO_ROOT) + "/fixtures";

TEST_CASE("project_stock compounds at the configured CAGR") {
    TimeAxis axis;

    SECTION("AT fleet trajectory hits the published 2035 level") {
        auto s = project_stock(343.8, 0.160, axis);
        CHECK(s.at_year(2026) == 343.8);
        CHECK(s.at_year(2035) == Catch::Approx(1307.5).margin(1.0));
    }
    SECTION("HU fleet trajectory") {
        auto s = project_stock(100.8, 0.179, axis);
        CHECK(s.at_year(2035) == Catch::Approx(443.3).margin(1.0));
    }
    SECTION("zero growth is a constant series") {
        auto s = project_stock(50.0, 0.0, axis);
        for (double v : s.values) CHECK(v == 50.0);
    }
    SECTION("cagr bounds enforced") {
        CHECK_THROWS_AS(project_stock(10, -1.5, axis), RateOutOfRange);
        CHECK_THROWS_AS(project_stock(10, 1.0, axis), RateOutOfRange);
    }
    SECTION("log of the series is affine in year") {
        auto s = project_stock(343.8, 0.16, axis);
        double slope = std::log(1.16);
        for (int k = 1; k < axis.n_years(); ++k) {
            double d = std::log(s.values[static_cast<std::size_t>(k)]) -
                       std::log(s.values[static_cast<std::size_t>(k - 1)]);
            CHECK(d == Catch::Approx(slope).margin(1e-12));
        }
    }
    SECTION("positive growth is strictly increasing") {
        auto s = project_stock(1.0, 0.05, axis);
        for (int k = 1; k < axis.n_years(); ++k)
            CHECK(s.values[static_cast<std::size_t>(k)] > s.values[static_cast<std::size_t>(k - 1)]);
    }
}

TEST_CASE("project_res adds capacity linearly") {
    TimeAxis axis;
    SECTION("SI trajectory") {
        auto s = project_res(1.5, 150, axis);
        CHECK(s.at_year(2035) == Catch::Approx(2.85).margin(1e-12));
        // published table prints 2.8 (rounding)
        CHECK(s.at_year(2035) == Catch::Approx(2.8).margin(0.1));
    }
    SECTION("HU trajectory vs published 33.1 (known ~1.1% drift)") {
        auto s = project_res(8.0, 2750, axis);
        CHECK(s.at_year(2035) == Catch::Approx(32.75).margin(1e-12));
        CHECK(std::abs(s.at_year(2035) - 33.1) / 33.1 < 0.015);
    }
    SECTION("zero addition is constant") {
        auto s = project_res(4.0, 0, axis);
        for (double v : s.values) CHECK(v == 4.0);
    }
}

TEST_CASE("build_driver normalizes to 1.0 at first_year") {
    TimeAxis axis;
    FixturePack pack = load_fixtures(kFixtures, axis);
    ProjectionSet proj;
    proj.axis = axis;
    proj.ev_stock = pack.ev_stock;
    proj.et_stock = pack.et_stock;
    proj.res_capacity = pack.res_capacity;

    SECTION("flat driver is all ones") {
        auto d = build_driver(DriverKind::Flat, proj, "AT");
        for (double v : d.series.values) CHECK(v == 1.0);
    }
    SECTION("fleet index from fixture cells") {
        auto d = build_driver(DriverKind::Fleet, proj, "AT");
        CHECK(d.at_year(2026) == 1.0);
        // oracle: (398.8 + 4.9) / (343.8 + 4.4)
        CHECK(d.at_year(2027) == Catch::Approx(1.159).margin(5e-4));
    }
    SECTION("first-year value is exactly 1 for all kinds") {
        for (auto kind : {DriverKind::Fleet, DriverKind::Res, DriverKind::Composite, DriverKind::Flat}) {
            auto d = build_driver(kind, proj, "HU");
            CHECK(d.at_year(2026) == 1.0);
        }
    }
    SECTION("composite with full weight on fleet equals the fleet index") {
        auto fleet = build_driver(DriverKind::Fleet, proj, "SI");
        auto comp = build_driver(DriverKind::Composite, proj, "SI", CompositeWeights{1.0, 0.0});
        CHECK(comp.series.values == fleet.series.values);
    }
    SECTION("zero base stock is rejected") {
        ProjectionSet empty = proj;
        empty.ev_stock.at("AT").values[0] = 0.0;
        empty.et_stock.at("AT").values[0] = 0.0;
        CHECK_THROWS_AS(build_driver(DriverKind::Fleet, empty, "AT"), ZeroBaseStock);
    }
}

TEST_CASE("generated projections reproduce the fixture tables") {
    TimeAxis axis;
    FixturePack pack = load_fixtures(kFixtures, axis);

    // ET growth rates are fitted to the published trajectories; the stated
    // headline rates drift beyond print rounding (see README).
    Model m;
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
    REQUIRE(validate_assumptions(doc, axis, m).empty());

    ProjectionSet gen = ProjectionSet::generate(m);
    ProjectionFidelity fid = check_projection_fidelity(gen, pack);
    CAPTURE(fid.violations);
    CHECK(fid.ok);
}
