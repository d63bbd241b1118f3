#include <doctest.h>

#include <cmath>
#include <vector>

#include "hetnet/dual_solver.hpp"
#include "hetnet/oracle.hpp"
#include "hetnet/powermodel.hpp"
#include "hetnet/rng.hpp"
#include "hetnet/scenario.hpp"

using namespace hetnet;

TEST_CASE("closed-form per-carrier power") {
    LinkBudget link{1e-10, 0.0, 1e-13, 0.2e6};
    SUBCASE("zero multiplier means zero power") {
        CHECK(optimal_carrier_power(0.0, 4.0, 0.5, link, 2.0, 1e6) == 0.0);
    }
    SUBCASE("water level below the noise-to-gain ratio clamps at zero") {
        LinkBudget weak = link;
        weak.gain = 1e-16;
        CHECK(optimal_carrier_power(1.0, 4.0, 0.0, weak, 2.0, 1e6) == 0.0);
    }
    SUBCASE("interior optimum agrees with the grid oracle") {
        Rng rng(1);
        for (int i = 0; i < 50; ++i) {
            LinkBudget l;
            l.gain = std::pow(10.0, rng.uniform(-13.0, -9.0));
            l.noise_w = 1e-15;
            l.interference_w = 0.0;
            l.bandwidth_hz = 0.2e6;
            const double mu = rng.uniform(0.5, 20.0);
            const double lambda = rng.uniform(0.0, 3.0);
            const double p = optimal_carrier_power(mu, 4.0, lambda, l, 2.0, 1e6);
            const double g = grid_minimize_d(4.0, lambda, mu, l, 2.0, 2.0 / 1e5, 1e6);
            CHECK(std::abs(p - g) <= 2.0 / 1e5 + 1e-12);
        }
    }
    SUBCASE("zero-slope stations are clamped at the box") {
        CHECK(optimal_carrier_power(1.0, 0.0, 0.0, link, 0.8, 1e6) == doctest::Approx(0.8));
    }
}

namespace {

Scenario tiny_scenario(int users, std::uint64_t seed, ScenarioKind kind = ScenarioKind::MS) {
    NetworkConfig config;
    config.scenario_kind = kind;
    config.num_outdoor_users = users;
    config.num_small_cells = 1;
    config.num_faps_per_cell = 0;
    config.indoor_users_per_fap = 0;
    config.macro_carriers = 2;
    config.smallcell_carriers = 2;
    config.total_carriers = 4;
    config.total_bandwidth_hz = 0.2e6 * 4;
    config.rate_threshold_bps = 0.25e6;
    config.cell_radius_m = 400.0;
    config.rng_seed = seed;
    return generate(config, GeometrySpec{});
}

ChannelMatrix tiny_channel(const Scenario& s, std::uint64_t seed) {
    ChannelParams params;
    params.fading = Fading::None;
    return build_channel(s, params, seed);
}

/// Brute-force minimizer of the Lagrangian over every on/off choice and every
/// user-to-slot matching, with per-slot powers from the closed form.
double exhaustive_lagrangian(const Scenario& s, const ChannelMatrix& channel,
                             const Multipliers& mult, const DualOptions& opts) {
    const int users = s.config.num_outdoor_users;
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << s.config.num_small_cells); ++mask) {
        std::vector<std::uint8_t> active(s.config.num_small_cells, 0);
        for (int i = 0; i < s.config.num_small_cells; ++i) active[i] = (mask >> i) & 1u;
        const std::vector<Slot> slots = enumerate_slots(s, active);
        std::vector<std::vector<double>> cost(users, std::vector<double>(slots.size()));
        for (int u = 0; u < users; ++u)
            for (std::size_t k = 0; k < slots.size(); ++k) {
                const LinkBudget link = make_link(s, channel, u, slots[k].station, slots[k].carrier);
                const double a = s.is_fap(slots[k].station)
                                     ? 0.0
                                     : s.stations[slots[k].station].power.slope;
                const double p = optimal_carrier_power(mult.mu[u], a, mult.lambda[slots[k].station],
                                                       link, slots[k].p_box, opts.rate_unit_bps);
                cost[u][k] = (a + mult.lambda[slots[k].station]) * p -
                             mult.mu[u] * rate_bps(p, link) / opts.rate_unit_bps;
            }
        double fixed = s.stations[0].power.offset_w;
        for (int i = 0; i < s.config.num_small_cells; ++i)
            fixed += active[i] ? s.stations[s.small_cell_index(i)].power.offset_w
                               : s.stations[s.small_cell_index(i)].power.sleep_w;
        // Recursive enumeration: slot of each user or none, all distinct.
        std::vector<char> used(slots.size(), 0);
        double best_match = std::numeric_limits<double>::infinity();
        auto recurse = [&](auto&& self, int u, double acc) -> void {
            if (u == users) {
                best_match = std::min(best_match, acc);
                return;
            }
            self(self, u + 1, acc); // user unassigned
            for (std::size_t k = 0; k < slots.size(); ++k) {
                if (used[k]) continue;
                used[k] = 1;
                self(self, u + 1, acc + cost[u][k]);
                used[k] = 0;
            }
        };
        recurse(recurse, 0, 0.0);
        best = std::min(best, best_match + fixed);
    }
    double constants = 0.0;
    for (int si = 0; si < s.num_stations(); ++si)
        if (!s.is_fap(si)) constants -= mult.lambda[si] * s.stations[si].power.max_tx_w;
    for (double m : mult.mu) constants += m * s.config.rate_threshold_bps / opts.rate_unit_bps;
    return best + constants;
}

} // namespace

TEST_CASE("inner minimization matches the exhaustive Lagrangian oracle") {
    Rng rng(555);
    const DualOptions opts;
    for (int trial = 0; trial < 30; ++trial) {
        const Scenario s = tiny_scenario(3, mix_seed(9, trial));
        const ChannelMatrix channel = tiny_channel(s, mix_seed(10, trial));
        Multipliers mult = initial_multipliers(s);
        for (auto& l : mult.lambda) l = rng.uniform(0.0, 2.0);
        for (auto& m : mult.mu) m = rng.uniform(0.0, 20.0);
        const InnerSolution inner = inner_minimize(s, channel, mult, opts);
        const double brute = exhaustive_lagrangian(s, channel, mult, opts);
        CHECK(inner.dual_value_w == doctest::Approx(brute).epsilon(1e-9));
    }
}

TEST_CASE("inner minimization with no users keeps everything asleep") {
    Scenario s = tiny_scenario(1, 123);
    s.users.clear();
    s.config.num_outdoor_users = 0;
    const ChannelMatrix channel = tiny_channel(s, 5);
    const Multipliers mult = initial_multipliers(s);
    const InnerSolution inner = inner_minimize(s, channel, mult, DualOptions{});
    CHECK(inner.alloc.entries.empty());
    CHECK(inner.alloc.small_cell_on[0] == 0);
    CHECK(inner.dual_value_w == doctest::Approx(130.0 + 4.3));
}

TEST_CASE("an expensive station repels assignments") {
    const Scenario s = tiny_scenario(2, 17);
    const ChannelMatrix channel = tiny_channel(s, 17);
    Multipliers mult = initial_multipliers(s);
    for (auto& m : mult.mu) m = 10.0;
    mult.lambda[s.small_cell_index(0)] = 1e9;
    const InnerSolution inner = inner_minimize(s, channel, mult, DualOptions{});
    for (const auto& e : inner.alloc.entries) CHECK(e.station == s.macro_index());
}

TEST_CASE("subgradient updates project onto the nonnegative orthant") {
    const Scenario s = tiny_scenario(2, 31);
    const ChannelMatrix channel = tiny_channel(s, 31);
    Multipliers mult = initial_multipliers(s);
    const InnerSolution inner = inner_minimize(s, channel, mult, DualOptions{});
    SUBCASE("slack budget keeps lambda at zero") {
        // Zero multipliers produce zero powers, so every budget is slack.
        const Multipliers next = subgradient_step(mult, inner, s, DualOptions{});
        for (double l : next.lambda) CHECK(l == 0.0);
        CHECK(next.iteration == 1);
    }
    SUBCASE("an exactly met rate leaves mu unchanged") {
        InnerSolution met = inner;
        met.user_rate_scaled.assign(2, s.config.rate_threshold_bps / 1e6);
        Multipliers primed = mult;
        primed.mu.assign(2, 3.5);
        const Multipliers next = subgradient_step(primed, met, s, DualOptions{});
        for (double m : next.mu) CHECK(m == doctest::Approx(3.5));
    }
}

TEST_CASE("dual solve on a light instance turns every small cell off") {
    NetworkConfig config;
    config.num_outdoor_users = 10;
    config.rng_seed = 2;
    const Scenario s = generate(config, GeometrySpec{});
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 2);
    const SolveReport report = solve_dual(s, channel);
    REQUIRE(report.feasible);
    for (auto on : report.allocation.small_cell_on) CHECK(on == 0);
    CHECK(report.served_users == 10);
}

TEST_CASE("dual trace is the best value so far and respects weak duality") {
    const Scenario s = tiny_scenario(3, 77);
    const ChannelMatrix channel = tiny_channel(s, 77);
    const SolveReport report = solve_dual(s, channel);
    REQUIRE(report.feasible);
    for (std::size_t i = 1; i < report.dual_trace.size(); ++i)
        CHECK(report.dual_trace[i] >= report.dual_trace[i - 1]);
    CHECK(report.weak_duality_ok);
    CHECK(report.best_dual_w <= report.objective_w + 1e-6);
}

TEST_CASE("feasible dual reports satisfy budgets and the rate threshold") {
    for (int trial = 0; trial < 10; ++trial) {
        const Scenario s = tiny_scenario(4, mix_seed(40, trial));
        const ChannelMatrix channel = tiny_channel(s, mix_seed(41, trial));
        const SolveReport report = solve_dual(s, channel);
        if (!report.feasible) continue;
        CHECK(budgets_ok(report.allocation, s, 1e-6));
        for (double r : report.user_rate_bps)
            CHECK(r >= s.config.rate_threshold_bps * (1.0 - 1e-9));
    }
}

TEST_CASE("an overloaded instance is reported infeasible") {
    NetworkConfig config;
    config.num_outdoor_users = 6;
    config.num_small_cells = 1;
    config.num_faps_per_cell = 0;
    config.indoor_users_per_fap = 0;
    config.macro_carriers = 3;
    config.smallcell_carriers = 2;
    config.total_carriers = 5;
    config.total_bandwidth_hz = 1e6;
    config.rng_seed = 5;
    const Scenario s = generate(config, GeometrySpec{});
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 5);
    const SolveReport report = solve_dual(s, channel);
    CHECK(!report.feasible);
    CHECK(report.served_users == 0);
}

TEST_CASE("slack budgets keep the multipliers near zero through a run") {
    const Scenario s = tiny_scenario(2, 91);
    const ChannelMatrix channel = tiny_channel(s, 91);
    DualOptions opts;
    Multipliers mult = initial_multipliers(s);
    for (int tau = 0; tau < 100; ++tau) {
        const InnerSolution inner = inner_minimize(s, channel, mult, opts);
        mult = subgradient_step(mult, inner, s, opts);
    }
    // Two users on a 400 m disk need milliwatts; the 20 W macro budget never
    // binds, so its multiplier stays at the projection floor.
    CHECK(mult.lambda[0] <= 0.1);
}
