#pragma once

#include "hetnet/channel.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

/// Everything needed to evaluate one (user, station, carrier) link.
struct LinkBudget {
    double gain = 0.0;            // h, linear
    double interference_w = 0.0;  // I = I_0 + I_{u,r}
    double noise_w = 0.0;         // N_0
    double bandwidth_hz = 0.0;    // B_C / N_C
};

/// Shannon rate per carrier: (B_C/N_C) log2(1 + P h / (I + N_0)).
double rate_bps(double p_w, const LinkBudget& link);

/// A_0 = (2^{R_0 N_C / B_C} - 1)(I + N_0); the received-power level that
/// meets the rate threshold.
double rate_constant_a0(double rate_threshold_bps, const LinkBudget& link);

/// Minimal transmit power achieving rate >= R_0 on the link (A_0 / h).
double required_power(double rate_threshold_bps, const LinkBudget& link);

/// Total FAP power landing on (user, carrier) given the fixed FAP
/// occupancy; zero in the MS scenario and on macro-tier carriers.
double cross_tier_interference(const Scenario& scenario, const ChannelMatrix& channel,
                               int user, int carrier);

/// Mirror direction: small-cell power landing on an indoor user whose FAP
/// reuses the carrier, under a given allocation.
double interference_to_indoor(const Scenario& scenario, const ChannelMatrix& channel,
                              const AllocationState& alloc, int user, int carrier);

/// Assembles the LinkBudget for one triple, including the cross-tier term.
LinkBudget make_link(const Scenario& scenario, const ChannelMatrix& channel,
                     int user, int station, int carrier);

} // namespace hetnet
