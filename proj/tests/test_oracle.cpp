#include <doctest.h>

#include <cmath>

#include "hetnet/dual_solver.hpp"
#include "hetnet/iterative_solver.hpp"
#include "hetnet/oracle.hpp"
#include "hetnet/powermodel.hpp"
#include "hetnet/rng.hpp"
#include "hetnet/scenario.hpp"

using namespace hetnet;

TEST_CASE("tiny instances respect the enumeration bounds") {
    for (int i = 0; i < 20; ++i) {
        const auto kind = static_cast<ScenarioKind>(i % 3);
        const TinyInstance inst = make_tiny_instance(mix_seed(1, i), kind);
        CHECK(inst.scenario.config.num_outdoor_users <= 4);
        CHECK(inst.scenario.config.num_small_cells <= 2);
        CHECK(inst.scenario.config.total_carriers <= 8);
        // Frozen channel: rebuilding the instance reproduces it.
        const TinyInstance again = make_tiny_instance(mix_seed(1, i), kind);
        CHECK(channel_to_text(inst.channel) == channel_to_text(again.channel));
    }
}

TEST_CASE("single-user single-slot optimum is macro at minimal power") {
    // Hand-built: one user, one macro carrier, one small cell with one
    // carrier that the user cannot use cheaply.
    NetworkConfig config;
    config.num_outdoor_users = 1;
    config.num_small_cells = 1;
    config.num_faps_per_cell = 0;
    config.indoor_users_per_fap = 0;
    config.macro_carriers = 1;
    config.smallcell_carriers = 1;
    config.total_carriers = 2;
    config.total_bandwidth_hz = 0.4e6;
    config.rate_threshold_bps = 0.2e6;
    config.rng_seed = 3;
    TinyInstance inst;
    inst.scenario = generate(config, GeometrySpec{});
    inst.channel = ChannelMatrix(1, 2, 2);
    inst.channel.set_gain(0, 0, 0, 1e-9);  // strong macro link
    inst.channel.set_gain(0, 1, 1, 1e-9);  // equally strong cell link
    inst.channel.set_gain(0, 1, 0, 1e-30);
    inst.channel.set_gain(0, 0, 1, 1e-30);
    const SolveReport report = exhaustive_optimum(inst);
    REQUIRE(report.feasible);
    // Keeping the cell asleep beats paying its offset for the same power.
    CHECK(report.allocation.small_cell_on[0] == 0);
    REQUIRE(report.allocation.entries.size() == 1);
    CHECK(report.allocation.entries[0].station == 0);
    const LinkBudget link{1e-9, 0.0, config.noise_power_w, 0.2e6};
    const double expected_power = required_power(0.2e6, link);
    CHECK(report.allocation.entries[0].power_w == doctest::Approx(expected_power));
    CHECK(report.objective_w ==
          doctest::Approx(130.0 + 4.3 + 4.7 * expected_power));
}

TEST_CASE("solvers never beat the oracle and stay within their bands") {
    int checked = 0;
    for (int i = 0; i < 12; ++i) {
        const auto kind = static_cast<ScenarioKind>(i % 3);
        const TinyInstance inst = make_tiny_instance(mix_seed(7, i), kind);
        const SolveReport oracle = exhaustive_optimum(inst);
        const SolveReport dual = solve_dual(inst.scenario, inst.channel);
        const SolveReport iter = solve_iterative(inst.scenario, inst.channel);
        if (!oracle.feasible) {
            CHECK(!dual.feasible);
            CHECK(!iter.feasible);
            continue;
        }
        REQUIRE(dual.feasible);
        REQUIRE(iter.feasible);
        CHECK(dual.objective_w >= oracle.objective_w * (1.0 - 1e-9));
        CHECK(iter.objective_w >= oracle.objective_w * (1.0 - 1e-9));
        CHECK(dual.objective_w <= oracle.objective_w * 1.02);
        CHECK(iter.objective_w <= oracle.objective_w * 1.10);
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("oracle allocations are feasible solutions of the same problem") {
    for (int i = 0; i < 9; ++i) {
        const auto kind = static_cast<ScenarioKind>(i % 3);
        const TinyInstance inst = make_tiny_instance(mix_seed(21, i), kind);
        const SolveReport report = exhaustive_optimum(inst);
        if (!report.feasible) continue;
        CHECK(budgets_ok(report.allocation, inst.scenario, 1e-9));
        for (const auto& e : report.allocation.entries) {
            const LinkBudget link =
                make_link(inst.scenario, inst.channel, e.user, e.station, e.carrier);
            CHECK(rate_bps(e.power_w, link) >=
                  inst.scenario.config.rate_threshold_bps * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("grid minimizer of the per-link dual cost") {
    LinkBudget link{1e-10, 0.0, 1e-15, 0.2e6};
    SUBCASE("zero multiplier sits at zero power") {
        CHECK(grid_minimize_d(4.0, 0.0, 0.0, link, 2.0, 1e-3) == 0.0);
    }
    SUBCASE("matches the closed form within one step") {
        const double closed = optimal_carrier_power(8.0, 4.0, 0.5, link, 2.0, 1e6);
        const double grid = grid_minimize_d(4.0, 0.5, 8.0, link, 2.0, 2.0 / 1e5, 1e6);
        CHECK(std::abs(closed - grid) <= 2.0 / 1e5 + 1e-12);
    }
    SUBCASE("rejects nonpositive resolution") {
        CHECK_THROWS_AS(grid_minimize_d(4.0, 0.0, 1.0, link, 2.0, 0.0), std::invalid_argument);
    }
    SUBCASE("the sampled objective is convex in the power") {
        const double a = 4.0, lambda = 0.7, mu = 12.0;
        const double step = 2.0 / 2000;
        double prev = 0.0, prev2 = 0.0;
        int k = 0;
        for (double p = 0.0; p <= 2.0; p += step, ++k) {
            const double d = (a + lambda) * p - mu * rate_bps(p, link) / 1e6;
            if (k >= 2) CHECK(d - 2.0 * prev + prev2 >= -1e-9);
            prev2 = prev;
            prev = d;
        }
    }
}
