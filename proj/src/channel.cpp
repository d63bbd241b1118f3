#include "hetnet/channel.hpp"

#include <cmath>
#include <sstream>

#include "hetnet/rng.hpp"

namespace hetnet {

namespace {
constexpr std::uint64_t kChannelSalt = 0xC4A2;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
} // namespace

double pathloss_indoor_indoor_db(double d_m) {
    if (d_m <= 0.0) throw std::invalid_argument("indoor distance must be positive");
    return 38.46 + 20.0 * std::log10(d_m) + 0.3 * d_m;
}

double pathloss_outdoor_indoor_db(double d_out_m, double d_in_m, double l_ow_db) {
    if (d_out_m <= 0.0) throw std::invalid_argument("outdoor distance must be positive");
    if (d_in_m < 0.0) throw std::invalid_argument("indoor distance must be nonnegative");
    return 15.3 + 37.6 * std::log10(d_out_m) + 0.3 * d_in_m + l_ow_db;
}

double pathloss_outdoor_outdoor_db(double d_km, double kappa_db, double nu) {
    if (d_km <= 0.0) throw std::invalid_argument("distance must be positive");
    // The 3GPP constants behind kappa/nu put nu on a dB-per-decade scale.
    return kappa_db + 10.0 * nu * std::log10(d_km);
}

namespace {

double link_pathloss_db(const Scenario& s, const User& user, const Station& st,
                        const ChannelParams& params) {
    const double d = distance(user.position, st.position);
    const double min_d = s.geometry.min_link_distance_m;
    if (st.kind == StationKind::Fap) {
        if (user.indoor) {
            return pathloss_indoor_indoor_db(std::max(d, 0.1));
        }
        const double d_out = std::max(d - st.indoor_depth_m, min_d);
        return pathloss_outdoor_indoor_db(d_out, st.indoor_depth_m,
                                          params.penetration_loss_db);
    }
    if (user.indoor) {
        // Indoor user reached by an outdoor station: the building depth of
        // the user's own FAP stands in for the indoor leg.
        const double depth = s.stations[user.serving_fap].indoor_depth_m;
        const double d_out = std::max(d - depth, min_d);
        return pathloss_outdoor_indoor_db(d_out, depth, params.penetration_loss_db);
    }
    return pathloss_outdoor_outdoor_db(std::max(d, min_d) / 1000.0,
                                       params.pathloss_constant_db,
                                       params.pathloss_exponent);
}

} // namespace

ChannelMatrix build_channel(const Scenario& scenario, const ChannelParams& params,
                            std::uint64_t seed) {
    if (params.shadow_sigma_db < 0.0)
        throw std::invalid_argument("shadow sigma must be nonnegative");
    const int users = static_cast<int>(scenario.users.size());
    const int stations = scenario.num_stations();
    const int carriers = scenario.config.total_carriers;
    ChannelMatrix m(users, stations, carriers);

    Rng rng(mix_seed(seed, kChannelSalt));
    for (int t = 0; t < users; ++t) {
        for (int si = 0; si < stations; ++si) {
            const double pl = link_pathloss_db(scenario, scenario.users[t],
                                               scenario.stations[si], params);
            const double shadow = rng.normal(0.0, params.shadow_sigma_db);
            const double base = db_to_linear(-pl + shadow);
            for (int c = 0; c < carriers; ++c) {
                const double fade =
                    params.fading == Fading::Rayleigh ? rng.exponential() : 1.0;
                m.set_gain(t, si, c, base * fade);
            }
        }
    }
    return m;
}

ChannelMatrix build_channel(const Scenario& scenario, const ChannelParams& params) {
    return build_channel(scenario, params, scenario.config.rng_seed);
}

std::string channel_to_text(const ChannelMatrix& channel) {
    std::ostringstream out;
    out.precision(17);
    out << channel.num_users() << ' ' << channel.num_stations() << ' '
        << channel.num_carriers() << '\n';
    for (int u = 0; u < channel.num_users(); ++u)
        for (int s = 0; s < channel.num_stations(); ++s) {
            for (int c = 0; c < channel.num_carriers(); ++c)
                out << channel.gain(u, s, c) << (c + 1 == channel.num_carriers() ? '\n' : ' ');
        }
    return out.str();
}

} // namespace hetnet
