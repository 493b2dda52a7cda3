#include <catch2/catch_amalgamated.hpp>
#include <cstdint>

#include "odpcba/benefit_streams.hpp"

using namespace odpcba;

namespace {

// xorshift-style generator for the randomized cases; fixed seed
struct TestRng {
    std::uint64_t s = 0x9E3779B97F4A7C15ull;
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double mwh(double hi) { return static_cast<double>(next() % 1'000'000'000) / 1e9 * hi; }
};

}  // namespace

TEST_CASE("allocate_flexibility fills channels in the fixed order") {
    SECTION("zero budget allocates nothing") {
        auto led = allocate_flexibility(0, {10, 10, 10, 10});
        for (int c = 0; c < 4; ++c) CHECK(led.allocated_u[static_cast<std::size_t>(c)] == 0);
        CHECK(led.residual_u == 0);
    }
    SECTION("budget 100 across equal demands of 40") {
        auto led = allocate_flexibility(100, {40, 40, 40, 40});
        CHECK(led.allocated(FlexChannel::ReliabilityCongestion) == 40.0);
        CHECK(led.allocated(FlexChannel::ResAbsorption) == 40.0);
        CHECK(led.allocated(FlexChannel::MarketArbitrage) == 20.0);
        CHECK(led.allocated(FlexChannel::ResidualDR) == 0.0);
        CHECK(led.residual() == 0.0);
    }
    SECTION("surplus budget satisfies all demands and leaves the rest") {
        auto led = allocate_flexibility(200, {40, 40, 40, 40});
        for (int c = 0; c < 4; ++c) CHECK(led.allocated_u[static_cast<std::size_t>(c)] == 40 * FlexLedger::kScale);
        CHECK(led.residual() == 40.0);
    }
    SECTION("negative inputs rejected") {
        CHECK_THROWS_AS(allocate_flexibility(-1, {0, 0, 0, 0}), std::invalid_argument);
        CHECK_THROWS_AS(allocate_flexibility(1, {0, -2, 0, 0}), std::invalid_argument);
    }
}

TEST_CASE("ledger conservation and order-monotonicity over 10^4 random cases") {
    TestRng rng;
    int violations = 0;
    for (int iter = 0; iter < 10'000; ++iter) {
        double budget = rng.mwh(5e5);
        std::array<double, 4> demands{rng.mwh(2e5), rng.mwh(2e5), rng.mwh(2e5), rng.mwh(2e5)};
        FlexLedger led = allocate_flexibility(budget, demands);

        // conservation: integer-exact
        std::int64_t sum = led.residual_u;
        for (auto a : led.allocated_u) sum += a;
        if (sum != led.budget_u) ++violations;

        // order-monotonicity: raising an upstream demand never raises a
        // downstream allocation
        std::size_t up = rng.next() % 3;
        std::array<double, 4> bumped = demands;
        bumped[up] += rng.mwh(1e5);
        FlexLedger led2 = allocate_flexibility(budget, bumped);
        for (std::size_t down = up + 1; down < 4; ++down)
            if (led2.allocated_u[down] > led.allocated_u[down]) ++violations;

        // allocations never exceed demand or budget
        for (std::size_t c = 0; c < 4; ++c) {
            if (led.allocated(static_cast<FlexChannel>(c)) > demands[c] + 1e-6) ++violations;
        }
        if (led.residual_u < 0) ++violations;
    }
    CHECK(violations == 0);
}
