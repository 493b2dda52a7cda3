#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odpcba/engine.hpp"
#include "odpcba/io/config.hpp"
#include "odpcba/io/fixtures.hpp"
#include "odpcba/io/report.hpp"
#include "odpcba/io/sha256.hpp"

using namespace odpcba;
namespace fs = std::filesystem;

static const std::string kRoot = ODPCBA_REPO_ROOT;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json default_config_json() {
    return nlohmann::json::parse(slurp(kRoot + "/config/default.json"));
}

}  // namespace

TEST_CASE("sha256 known vectors") {
    CHECK(Sha256::of("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(Sha256::of("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(Sha256::of(std::string(1000, 'x')).size() == 64);
}

TEST_CASE("load_config") {
    SECTION("shipped default loads in fixture mode") {
        RunConfig cfg = load_config(kRoot + "/config/default.json");
        CHECK(cfg.value_mode == ValueMode::Fixture);
        CHECK(cfg.discount.rate == 0.04);
        CHECK(cfg.countries.size() == 3);
        CHECK(cfg.monte_carlo.n_trials == 50'000);
        CHECK(cfg.capex_plan.one_time_total().str(1) == "89.6");
    }
    SECTION("omitted discount rate takes the 4% default") {
        auto j = default_config_json();
        j.erase("discount_rate");
        RunConfig cfg = parse_config(j);
        CHECK(cfg.discount.rate == 0.04);
    }
    SECTION("zero trials is a schema violation") {
        auto j = default_config_json();
        j["monte_carlo"]["n_trials"] = 0;
        CHECK_THROWS_AS(parse_config(j), SchemaViolation);
    }
    SECTION("unknown keys are rejected") {
        auto j = default_config_json();
        j["no_such_section"] = 1;
        CHECK_THROWS_AS(parse_config(j), UnknownKey);

        auto j2 = default_config_json();
        j2["benefit_params"]["mystery"] = 2.0;
        CHECK_THROWS_AS(parse_config(j2), UnknownKey);
    }
    SECTION("parse errors carry position information") {
        fs::path tmp = fs::temp_directory_path() / "odpcba_bad.json";
        std::ofstream(tmp) << "{ \"axis\": ";
        try {
            load_config(tmp.string());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("parse error") != std::string::npos);
        }
        fs::remove(tmp);
    }
    SECTION("bad cost shares fail validation") {
        auto j = default_config_json();
        j["countries"][0]["cost_share"] = 0.5;
        CHECK_THROWS_AS(parse_config(j), ValidationError);
    }
}

TEST_CASE("assumption document round-trips through JSON") {
    RunConfig cfg = load_config(kRoot + "/config/default.json");
    // serialize the assumption set and reload it
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& a : cfg.countries) {
        nlohmann::json c;
        c["id"] = a.country.id;
        c["name"] = a.country.name;
        c["ev_stock_0"] = a.ev_stock_0;
        c["ev_cagr"] = a.ev_cagr;
        c["et_stock_0"] = a.et_stock_0;
        c["et_cagr"] = a.et_cagr;
        c["res_capacity_0"] = a.res_capacity_0;
        c["res_addition"] = a.res_addition;
        c["retail_price_ev"] = a.retail_price_ev;
        c["grid_co2_intensity_0"] = a.grid_co2_intensity_0;
        c["voll"] = a.voll;
        c["scc_start"] = a.scc_start;
        c["scc_end"] = a.scc_end;
        c["cost_share"] = a.cost_share;
        doc.push_back(c);
    }
    auto j = default_config_json();
    j["countries"] = nlohmann::json::parse(doc.dump());
    RunConfig cfg2 = parse_config(j);
    CHECK(cfg2.countries == cfg.countries);
}

TEST_CASE("load_fixtures") {
    SECTION("shipped pack loads and passes checksums") {
        FixturePack pack = load_fixtures(kRoot + "/fixtures", TimeAxis{});
        CHECK(pack.ev_stock.size() == 3);
        CHECK(pack.annual_benefits.size() == 8);
        CHECK(pack.total_benefits_pv().str(1) == "1233.9");
    }
    SECTION("truncated benefits table reports the malformed file") {
        fs::path tmp = fs::temp_directory_path() / "odpcba_fixtures_trunc";
        fs::create_directories(tmp);
        for (const auto& name : {"ev_stock.csv", "et_stock.csv", "res_capacity.csv", "annual_costs.csv",
                                 "stream_pv.csv", "country_pv.csv"})
            fs::copy_file(fs::path(kRoot) / "fixtures" / name, tmp / name, fs::copy_options::overwrite_existing);
        {
            std::ifstream in(fs::path(kRoot) / "fixtures" / "annual_benefits.csv");
            std::ofstream out(tmp / "annual_benefits.csv");
            std::string line;
            for (int i = 0; i < 6 && std::getline(in, line); ++i) out << line << "\n";
        }
        CHECK_THROWS_AS(load_fixtures(tmp.string(), TimeAxis{}), MalformedRow);
        fs::remove_all(tmp);
    }
    SECTION("checksum mismatches are detected") {
        fs::path tmp = fs::temp_directory_path() / "odpcba_fixtures_sum";
        fs::create_directories(tmp);
        for (const auto& entry : fs::directory_iterator(fs::path(kRoot) / "fixtures"))
            fs::copy_file(entry.path(), tmp / entry.path().filename(), fs::copy_options::overwrite_existing);
        std::ofstream(tmp / "stream_pv.csv", std::ios::app) << "# tampered\n";
        CHECK_THROWS_AS(load_fixtures(tmp.string(), TimeAxis{}), ChecksumMismatch);
        fs::remove_all(tmp);
    }
    SECTION("missing directory") {
        CHECK_THROWS_AS(load_fixtures(kRoot + "/no_such_dir", TimeAxis{}), MissingFixture);
    }
}

TEST_CASE("check_fixtures flags exactly the two known anomalies") {
    FixturePack pack = load_fixtures(kRoot + "/fixtures", TimeAxis{});
    FixtureCheck chk = check_fixtures(pack);

    auto anomalies = chk.anomalies();
    REQUIRE(anomalies.size() == 2);
    bool saw_row = false, saw_cell = false;
    for (const auto& a : anomalies) {
        if (a.id == "row-total-2034") saw_row = true;
        if (a.id == "cell-dip-CO2-2030") saw_cell = true;
    }
    CHECK(saw_row);
    CHECK(saw_cell);

    SECTION("stream PV fidelity holds within 5% per stream") {
        CHECK(chk.fidelity_ok);
        for (const auto& [s, rel] : chk.fidelity_rel_err) {
            CAPTURE(to_string(s), rel);
            CHECK(rel <= 0.05);
        }
    }
}

TEST_CASE("emit_report is byte-stable and mirrors module output") {
    RunConfig cfg = load_config(kRoot + "/config/default.json");
    EngineRun run = build_run(cfg, kRoot + "/fixtures");

    ReportBundle bundle;
    bundle.run = &run;
    bundle.tornado_entries = tornado(run.base, cfg.impact_matrix, cfg.tornado_ranges);
    for (const auto& spec : cfg.scenarios) bundle.scenarios.push_back(apply_scenario(run.base, spec, cfg.impact_matrix));

    fs::path out1 = fs::temp_directory_path() / "odpcba_report_1";
    fs::path out2 = fs::temp_directory_path() / "odpcba_report_2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    auto files1 = emit_report(bundle, out1.string(), ReportFormat::Csv);
    auto files2 = emit_report(bundle, out2.string(), ReportFormat::Csv);
    REQUIRE(files1.size() == files2.size());
    for (std::size_t i = 0; i < files1.size(); ++i)
        CHECK(slurp(files1[i]) == slurp(files2[i]));

    SECTION("headline carries the fixture-mode figures") {
        emit_report(bundle, out1.string(), ReportFormat::Json);
        auto j = nlohmann::json::parse(slurp(out1 / "headline.json"));
        CHECK(j["npv"] == "356.7");
        CHECK(j["bcr"] == "1.41");
        CHECK(j["pv_benefits"] == "1233.9");
        CHECK(j["pv_costs"] == "877.2");
    }
    SECTION("annotations are present and non-empty in fixture mode") {
        auto j = nlohmann::json::parse(slurp(out1 / "headline.json"));
        CHECK(j["annotations"].size() >= 4);
    }
    SECTION("tornado rows are sorted by descending range") {
        std::string csv = slurp(out1 / "tornado.csv");
        std::istringstream ss(csv);
        std::string line;
        std::getline(ss, line);  // header
        double prev = 1e18;
        while (std::getline(ss, line)) {
            auto fields = csv::split_line(line);
            double range = std::stod(fields.back());
            CHECK(range <= prev);
            prev = range;
        }
    }
    fs::remove_all(out1);
    fs::remove_all(out2);
}
