#include <doctest.h>

#include <cmath>

#include "hetnet/dual_solver.hpp"
#include "hetnet/iterative_solver.hpp"
#include "hetnet/powermodel.hpp"
#include "hetnet/rng.hpp"
#include "hetnet/scenario.hpp"

using namespace hetnet;

TEST_CASE("uniform budget split") {
    CHECK(uniform_init(2.0, 15) == doctest::Approx(2.0 / 15.0));
    CHECK(uniform_init(20.0, 30) == doctest::Approx(20.0 / 30.0));
    CHECK(uniform_init(0.0, 10) == 0.0);
    CHECK_THROWS_AS(uniform_init(1.0, 0), std::invalid_argument);
}

TEST_CASE("capped link power") {
    LinkBudget link{1e-10, 0.0, 1e-15, 0.2e6};
    const double a0 = rate_constant_a0(0.5e6, link);
    SUBCASE("boundary gain spends exactly the cap") {
        LinkBudget boundary = link;
        boundary.gain = a0 / 0.4;
        const auto p = link_power_capped(0.5e6, 0.4, boundary);
        REQUIRE(p.has_value());
        CHECK(*p == doctest::Approx(0.4));
    }
    SUBCASE("twice the boundary gain needs half the cap") {
        LinkBudget strong = link;
        strong.gain = 2.0 * a0 / 0.4;
        const auto p = link_power_capped(0.5e6, 0.4, strong);
        REQUIRE(p.has_value());
        CHECK(*p == doctest::Approx(0.2));
    }
    SUBCASE("zero cap serves nobody") {
        CHECK(!link_power_capped(0.5e6, 0.0, link).has_value());
    }
    SUBCASE("weak channel is excluded") {
        LinkBudget weak = link;
        weak.gain = a0 / 0.4 * 0.99;
        CHECK(!link_power_capped(0.5e6, 0.4, weak).has_value());
    }
}

namespace {

struct TwoRoundFixture {
    Scenario scenario;
    ChannelMatrix channel;
    double a0 = 0.0;
};

/// One macro with two carriers and two users: user 0 is cheap anywhere,
/// user 1 only fits once the budget is respread over the remaining carrier.
TwoRoundFixture make_two_round_fixture() {
    NetworkConfig config;
    config.num_outdoor_users = 2;
    config.num_small_cells = 1;
    config.num_faps_per_cell = 0;
    config.indoor_users_per_fap = 0;
    config.macro_carriers = 2;
    config.smallcell_carriers = 1;
    config.total_carriers = 3;
    config.total_bandwidth_hz = 0.6e6;
    config.rate_threshold_bps = 0.4e6;
    config.rng_seed = 1;
    TwoRoundFixture fx{generate(config, GeometrySpec{}), ChannelMatrix{}, 0.0};
    LinkBudget probe{1.0, 0.0, config.noise_power_w, config.carrier_bandwidth_hz()};
    fx.a0 = rate_constant_a0(config.rate_threshold_bps, probe);
    fx.channel = ChannelMatrix(2, fx.scenario.num_stations(), 3);
    for (int u = 0; u < 2; ++u)
        for (int st = 0; st < fx.scenario.num_stations(); ++st)
            for (int c = 0; c < 3; ++c)
                fx.channel.set_gain(u, st, c, 1e-30); // unusable by default
    // Macro budget 20 W; round-1 cap = 10 W per carrier.
    for (int c = 0; c < 2; ++c) {
        fx.channel.set_gain(0, 0, c, fx.a0 / 0.001); // needs 1 mW
        fx.channel.set_gain(1, 0, c, fx.a0 / 15.0);  // needs 15 W > 10 W cap
    }
    return fx;
}

} // namespace

TEST_CASE("power redistribution serves the expensive user in round two") {
    const TwoRoundFixture fx = make_two_round_fixture();
    const std::vector<std::uint8_t> active = {0}; // small cell off
    const AllocationOutcome out = allocate_for_active_set(fx.scenario, fx.channel, active);
    CHECK(out.all_served);
    CHECK(out.served == 2);
    double p_user1 = 0.0;
    for (const auto& e : out.alloc.entries)
        if (e.user == 1) p_user1 = e.power_w;
    // Served at ~15 W, above the 10 W first-round cap, below the respread
    // (20 - 0.001) / 1 residual cap.
    CHECK(p_user1 == doctest::Approx(15.0).epsilon(1e-6));
}

TEST_CASE("an unchanged budget terminates the round loop") {
    TwoRoundFixture fx = make_two_round_fixture();
    // Make user 1 unservable even with the whole budget on one carrier.
    for (int c = 0; c < 2; ++c) fx.channel.set_gain(1, 0, c, fx.a0 / 50.0);
    const std::vector<std::uint8_t> active = {0};
    const AllocationOutcome out = allocate_for_active_set(fx.scenario, fx.channel, active);
    CHECK(!out.all_served);
    CHECK(out.served == 1);
}

TEST_CASE("all users feasible in round one terminates immediately") {
    NetworkConfig config;
    config.num_outdoor_users = 8;
    config.rng_seed = 9;
    const Scenario s = generate(config, GeometrySpec{});
    ChannelParams params;
    params.fading = Fading::None;
    const ChannelMatrix channel = build_channel(s, params, 9);
    const std::vector<std::uint8_t> active(4, 1);
    const AllocationOutcome out = allocate_for_active_set(s, channel, active);
    CHECK(out.all_served);
}

TEST_CASE("light load eliminates every small cell") {
    NetworkConfig config;
    config.num_outdoor_users = 12;
    config.rng_seed = 4;
    const Scenario s = generate(config, GeometrySpec{});
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 4);
    const SolveReport report = solve_iterative(s, channel);
    REQUIRE(report.feasible);
    for (auto on : report.allocation.small_cell_on) CHECK(on == 0);
    // Sleeping cells and no macro offset: 4 * 4.3 plus the macro transmit part.
    CHECK(report.reported_objective_w >= 17.2);
    CHECK(report.reported_objective_w < 17.2 + 5.0);
}

TEST_CASE("elimination never increases total power and keeps QoS") {
    for (int trial = 0; trial < 8; ++trial) {
        NetworkConfig config;
        config.num_outdoor_users = 20 + 10 * (trial % 4);
        config.rng_seed = mix_seed(60, trial);
        const Scenario s = generate(config, GeometrySpec{});
        const ChannelMatrix channel = build_channel(s, ChannelParams{}, mix_seed(61, trial));
        IterativeOptions all_on;
        all_on.enable_elimination = false;
        const SolveReport base = solve_iterative(s, channel, all_on);
        const SolveReport elim = solve_iterative(s, channel);
        if (!base.feasible || !elim.feasible) continue;
        CHECK(elim.objective_w <= base.objective_w + 1e-9);
        CHECK(budgets_ok(elim.allocation, s, 1e-6));
        for (double r : elim.user_rate_bps)
            CHECK(r >= s.config.rate_threshold_bps * (1.0 - 1e-9));
    }
}

TEST_CASE("identical seeds produce identical elimination outcomes") {
    NetworkConfig config;
    config.num_outdoor_users = 40;
    config.rng_seed = 1234;
    const Scenario s = generate(config, GeometrySpec{});
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 1234);
    const SolveReport a = solve_iterative(s, channel);
    const SolveReport b = solve_iterative(s, channel);
    CHECK(a.objective_w == b.objective_w);
    CHECK(a.allocation.small_cell_on == b.allocation.small_cell_on);
    REQUIRE(a.allocation.entries.size() == b.allocation.entries.size());
    for (std::size_t i = 0; i < a.allocation.entries.size(); ++i) {
        CHECK(a.allocation.entries[i].user == b.allocation.entries[i].user);
        CHECK(a.allocation.entries[i].carrier == b.allocation.entries[i].carrier);
    }
}

TEST_CASE("round budgets are conserved per station") {
    NetworkConfig config;
    config.num_outdoor_users = 50;
    config.rng_seed = 31;
    const Scenario s = generate(config, GeometrySpec{});
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 31);
    const SolveReport report = solve_iterative(s, channel);
    REQUIRE(report.feasible);
    for (int si = 0; si < s.num_stations(); ++si)
        CHECK(report.allocation.station_tx_power(si) <=
              s.stations[si].power.max_tx_w * (1.0 + 1e-9));
}

TEST_CASE("iterative work stays below the dual solver's on a mid-size instance") {
    NetworkConfig config;
    config.num_outdoor_users = 60;
    config.rng_seed = 8;
    const Scenario s = generate(config, GeometrySpec{});
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 8);
    const SolveReport iter = solve_iterative(s, channel);
    const SolveReport dual = solve_dual(s, channel);
    CHECK(iter.operations < dual.operations);
}

TEST_CASE("hybrid cooperation check leaves eliminations intact when pricing is viable") {
    NetworkConfig config;
    config.scenario_kind = ScenarioKind::MsfHybrid;
    config.num_outdoor_users = 30;
    config.rng_seed = 51;
    Scenario s = generate(config, GeometrySpec{});
    assign_fap_load(s, FapLoadPolicy::UniformPower);
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 51);
    IterativeOptions with_check;
    with_check.hybrid_coop_check = true;
    IterativeOptions without_check;
    without_check.hybrid_coop_check = false;
    const SolveReport a = solve_iterative(s, channel, with_check);
    const SolveReport b = solve_iterative(s, channel, without_check);
    REQUIRE(a.feasible);
    REQUIRE(b.feasible);
    CHECK(a.objective_w == doctest::Approx(b.objective_w));
}
