#pragma once

#include <cstdint>
#include <vector>

#include "hetnet/types.hpp"

namespace hetnet {

enum class Fading { None, Rayleigh };

struct ChannelParams {
    double pathloss_constant_db = 128.1; // kappa
    double pathloss_exponent = 3.76;     // nu (applied as 10*nu dB/decade)
    double penetration_loss_db = 6.0;    // L_ow
    double shadow_sigma_db = 8.0;        // sigma_xi
    Fading fading = Fading::Rayleigh;
};

/// Indoor-to-indoor loss: 38.46 + 20 log10(d) + 0.3 d, d in meters.
double pathloss_indoor_indoor_db(double d_m);

/// Outdoor-to-indoor loss: 15.3 + 37.6 log10(d_out) + 0.3 d_in + L_ow,
/// distances in meters.
double pathloss_outdoor_indoor_db(double d_out_m, double d_in_m, double l_ow_db);

/// Outdoor macro/small-cell loss: kappa + 10 nu log10(d), d in kilometers.
double pathloss_outdoor_outdoor_db(double d_km, double kappa_db, double nu);

/// Dense linear gains for every (user, station, carrier) triple.
class ChannelMatrix {
  public:
    ChannelMatrix() = default;
    ChannelMatrix(int users, int stations, int carriers)
        : users_(users), stations_(stations), carriers_(carriers),
          gains_(static_cast<std::size_t>(users) * stations * carriers, 0.0) {}

    double gain(int user, int station, int carrier) const {
        return gains_[index(user, station, carrier)];
    }
    void set_gain(int user, int station, int carrier, double gain) {
        gains_[index(user, station, carrier)] = gain;
    }

    int num_users() const { return users_; }
    int num_stations() const { return stations_; }
    int num_carriers() const { return carriers_; }

  private:
    std::size_t index(int user, int station, int carrier) const {
        return (static_cast<std::size_t>(user) * stations_ + station) * carriers_ + carrier;
    }
    int users_ = 0;
    int stations_ = 0;
    int carriers_ = 0;
    std::vector<double> gains_;
};

/// Path-loss branch selection per (user placement, station kind), dB-domain
/// shadowing per (user, station), per-carrier Rayleigh fading power.
ChannelMatrix build_channel(const Scenario& scenario, const ChannelParams& params,
                            std::uint64_t seed);

/// Seed derived from the scenario's own seed.
ChannelMatrix build_channel(const Scenario& scenario, const ChannelParams& params);

std::string channel_to_text(const ChannelMatrix& channel);

} // namespace hetnet
