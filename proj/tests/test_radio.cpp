#include <doctest.h>

#include <cmath>

#include "hetnet/radio.hpp"
#include "hetnet/rng.hpp"
#include "hetnet/scenario.hpp"

using namespace hetnet;

TEST_CASE("per-carrier rate") {
    LinkBudget link{1e-10, 0.0, 1e-13, 0.2e6};
    CHECK(rate_bps(0.0, link) == doctest::Approx(0.0));
    // SNR of 3 on a 0.2 MHz carrier: log2(4) = 2.
    LinkBudget snr3{1.0, 0.0, 1.0 / 3.0, 0.2e6};
    CHECK(rate_bps(1.0, snr3) == doctest::Approx(0.4e6));
    double prev = -1.0;
    for (double p = 0.0; p < 2.0; p += 0.05) {
        const double r = rate_bps(p, link);
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("minimal rate-meeting power") {
    LinkBudget link{1e-10, 0.0, 1e-13, 0.2e6};
    CHECK(required_power(0.4e6, link) == doctest::Approx(3e-3));
    CHECK(required_power(0.0, link) == doctest::Approx(0.0));
    LinkBudget dead = link;
    dead.gain = 0.0;
    CHECK_THROWS_AS(required_power(0.4e6, dead), std::invalid_argument);
}

TEST_CASE("rate and required power invert each other on random links") {
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        LinkBudget link;
        link.gain = std::pow(10.0, rng.uniform(-14.0, -8.0));
        link.noise_w = std::pow(10.0, rng.uniform(-16.0, -12.0));
        link.interference_w = rng.uniform() < 0.3 ? 0.0 : std::pow(10.0, rng.uniform(-16.0, -12.0));
        link.bandwidth_hz = rng.uniform(0.05e6, 0.5e6);
        const double r0 = rng.uniform(0.05e6, 3e6);
        CHECK(rate_bps(required_power(r0, link), link) == doctest::Approx(r0).epsilon(1e-9));
    }
}

namespace {

Scenario occupied_scenario(ScenarioKind kind) {
    NetworkConfig config;
    config.scenario_kind = kind;
    config.rng_seed = 77;
    Scenario s = generate(config, GeometrySpec{});
    if (kind != ScenarioKind::MS) assign_fap_load(s, FapLoadPolicy::UniformPower);
    return s;
}

} // namespace

TEST_CASE("cross-tier interference vanishes without FAP activity") {
    const Scenario ms = occupied_scenario(ScenarioKind::MS);
    const ChannelMatrix channel = build_channel(ms, ChannelParams{}, 1);
    for (int c = 0; c < ms.config.total_carriers; ++c)
        CHECK(cross_tier_interference(ms, channel, 0, c) == 0.0);
}

TEST_CASE("cross-tier interference accumulates occupied FAP carriers only") {
    const Scenario s = occupied_scenario(ScenarioKind::MsfClosed);
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 2);

    // Occupied carriers carry one power*gain term per occupying FAP.
    const int fap = s.fap_station_index(0, 0);
    const auto& load = s.fap_load[s.fap_ordinal(fap)];
    REQUIRE(!load.empty());
    const int carrier = load[0].carrier;
    double expected = 0.0;
    for (int si = 0; si < s.num_stations(); ++si) {
        if (!s.is_fap(si)) continue;
        for (const auto& use : s.fap_load[s.fap_ordinal(si)])
            if (use.carrier == carrier)
                expected += use.power_w * channel.gain(3, si, carrier);
    }
    CHECK(cross_tier_interference(s, channel, 3, carrier) == doctest::Approx(expected));
    CHECK(expected > 0.0);

    // Macro-tier carriers are never occupied by FAPs.
    CHECK(cross_tier_interference(s, channel, 3, 0) == 0.0);
}

TEST_CASE("single occupied FAP carrier gives a one-term sum") {
    Scenario s = occupied_scenario(ScenarioKind::MsfClosed);
    for (auto& load : s.fap_load) load.clear();
    const int fap = s.fap_station_index(1, 1);
    const int carrier = s.stations[fap].carriers[0];
    s.fap_load[s.fap_ordinal(fap)].push_back(FapCarrierUse{carrier, 1.0 / 15.0, -1});
    ChannelMatrix channel(static_cast<int>(s.users.size()), s.num_stations(),
                          s.config.total_carriers);
    for (int u = 0; u < channel.num_users(); ++u)
        for (int st = 0; st < channel.num_stations(); ++st)
            for (int c = 0; c < channel.num_carriers(); ++c)
                channel.set_gain(u, st, c, 1e-10);
    CHECK(cross_tier_interference(s, channel, 0, carrier) ==
          doctest::Approx(1e-10 / 15.0)); // = 6.67e-12
}

TEST_CASE("closed rates equal MS rates when no carrier is occupied") {
    Scenario s = occupied_scenario(ScenarioKind::MsfClosed);
    for (auto& load : s.fap_load) load.clear();
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 3);
    const int cell = s.small_cell_index(0);
    const int carrier = s.stations[cell].carriers[0];
    const LinkBudget closed = make_link(s, channel, 0, cell, carrier);
    Scenario ms = s;
    ms.config.scenario_kind = ScenarioKind::MS;
    const LinkBudget plain = make_link(ms, channel, 0, cell, carrier);
    CHECK(rate_bps(0.5, closed) == doctest::Approx(rate_bps(0.5, plain)));
}

TEST_CASE("indoor users see interference from small cells reusing the carrier") {
    const Scenario s = occupied_scenario(ScenarioKind::MsfClosed);
    const ChannelMatrix channel = build_channel(s, ChannelParams{}, 4);
    const int indoor_user = s.config.num_outdoor_users; // first indoor user
    REQUIRE(s.users[indoor_user].indoor);
    const int cell = s.small_cell_index(0);
    const int carrier = s.stations[cell].carriers[2];
    AllocationState alloc;
    alloc.kind = s.config.scenario_kind;
    alloc.small_cell_on.assign(s.config.num_small_cells, 1);
    alloc.entries.push_back(Assignment{0, cell, carrier, 0.5});
    const double expected = 0.5 * channel.gain(indoor_user, cell, carrier);
    CHECK(interference_to_indoor(s, channel, alloc, indoor_user, carrier) ==
          doctest::Approx(expected));
    CHECK(interference_to_indoor(s, channel, alloc, indoor_user, carrier + 1) == 0.0);
}
