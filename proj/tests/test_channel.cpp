#include <doctest.h>

#include <cmath>

#include "hetnet/channel.hpp"
#include "hetnet/rng.hpp"
#include "hetnet/scenario.hpp"

using namespace hetnet;

TEST_CASE("indoor-indoor path loss") {
    CHECK(pathloss_indoor_indoor_db(1.0) == doctest::Approx(38.76));
    CHECK(pathloss_indoor_indoor_db(10.0) == doctest::Approx(61.46));
    CHECK(pathloss_indoor_indoor_db(100.0) == doctest::Approx(108.46));
    CHECK_THROWS_AS(pathloss_indoor_indoor_db(0.0), std::invalid_argument);
    CHECK_THROWS_AS(pathloss_indoor_indoor_db(-3.0), std::invalid_argument);
}

TEST_CASE("outdoor-indoor path loss") {
    CHECK(pathloss_outdoor_indoor_db(1.0, 0.0, 6.0) == doctest::Approx(21.3));
    CHECK(pathloss_outdoor_indoor_db(100.0, 10.0, 6.0) == doctest::Approx(99.5));
    const double base = pathloss_outdoor_indoor_db(40.0, 5.0, 6.0);
    CHECK(pathloss_outdoor_indoor_db(40.0, 15.0, 6.0) - base == doctest::Approx(3.0));
    CHECK_THROWS_AS(pathloss_outdoor_indoor_db(0.0, 1.0, 6.0), std::invalid_argument);
}

TEST_CASE("outdoor-outdoor path loss uses a decade slope of 10*nu") {
    CHECK(pathloss_outdoor_outdoor_db(1.0, 128.1, 3.76) == doctest::Approx(128.1));
    CHECK(pathloss_outdoor_outdoor_db(0.1, 128.1, 3.76) == doctest::Approx(90.5));
    const double d1 = pathloss_outdoor_outdoor_db(0.2, 128.1, 3.76);
    const double d2 = pathloss_outdoor_outdoor_db(0.4, 128.1, 3.76);
    CHECK(d2 - d1 == doctest::Approx(10.0 * 3.76 * std::log10(2.0)));
    CHECK_THROWS_AS(pathloss_outdoor_outdoor_db(0.0, 128.1, 3.76), std::invalid_argument);
}

TEST_CASE("path loss is strictly decreasing in distance on every branch") {
    double prev_ii = 1e9, prev_oi = 1e9, prev_oo = 1e9;
    for (double d = 2.0; d < 400.0; d += 7.0) {
        const double gain_ii = -pathloss_indoor_indoor_db(d);
        const double gain_oi = -pathloss_outdoor_indoor_db(d, 5.0, 6.0);
        const double gain_oo = -pathloss_outdoor_outdoor_db(d / 1000.0, 128.1, 3.76);
        CHECK(gain_ii < prev_ii);
        CHECK(gain_oi < prev_oi);
        CHECK(gain_oo < prev_oo);
        prev_ii = gain_ii;
        prev_oi = gain_oi;
        prev_oo = gain_oo;
    }
}

namespace {

Scenario closed_scenario(std::uint64_t seed) {
    NetworkConfig config;
    config.scenario_kind = ScenarioKind::MsfClosed;
    config.rng_seed = seed;
    return generate(config, GeometrySpec{});
}

} // namespace

TEST_CASE("degenerate randomness reduces the gain to pure path loss") {
    const Scenario s = closed_scenario(11);
    ChannelParams params;
    params.shadow_sigma_db = 0.0;
    params.fading = Fading::None;
    const ChannelMatrix m = build_channel(s, params, 5);

    // Outdoor user vs macro: the gain must equal the analytic branch value.
    const auto& user = s.users[0];
    const double d_km = distance(user.position, s.stations[0].position) / 1000.0;
    const double expected =
        std::pow(10.0, -pathloss_outdoor_outdoor_db(d_km, 128.1, 3.76) / 10.0);
    CHECK(m.gain(0, 0, 0) == doctest::Approx(expected).epsilon(1e-12));
    // And it is flat across carriers without fading.
    CHECK(m.gain(0, 0, 1) == doctest::Approx(m.gain(0, 0, 0)));
}

TEST_CASE("all gains are finite and strictly positive") {
    const Scenario s = closed_scenario(12);
    const ChannelMatrix m = build_channel(s, ChannelParams{}, 7);
    for (int u = 0; u < m.num_users(); ++u)
        for (int st = 0; st < m.num_stations(); ++st)
            for (int c = 0; c < m.num_carriers(); ++c) {
                CHECK(std::isfinite(m.gain(u, st, c)));
                CHECK(m.gain(u, st, c) > 0.0);
            }
}

TEST_CASE("fading power is unit mean over many draws") {
    Rng rng(123);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.exponential();
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("shadowing sample deviation tracks the configured sigma") {
    Rng rng(321);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(0.0, 8.0);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double stddev = std::sqrt(sum2 / n - mean * mean);
    CHECK(stddev == doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("channel build is reproducible for a fixed seed") {
    const Scenario s = closed_scenario(13);
    const ChannelMatrix a = build_channel(s, ChannelParams{}, 99);
    const ChannelMatrix b = build_channel(s, ChannelParams{}, 99);
    CHECK(channel_to_text(a) == channel_to_text(b));
    const ChannelMatrix c = build_channel(s, ChannelParams{}, 100);
    CHECK(channel_to_text(a) != channel_to_text(c));
}
