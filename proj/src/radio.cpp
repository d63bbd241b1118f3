#include "hetnet/radio.hpp"

#include <cmath>
#include <stdexcept>

namespace hetnet {

double rate_bps(double p_w, const LinkBudget& link) {
    if (p_w < 0.0) throw std::invalid_argument("power must be nonnegative");
    const double snr = p_w * link.gain / (link.interference_w + link.noise_w);
    return link.bandwidth_hz * std::log2(1.0 + snr);
}

double rate_constant_a0(double rate_threshold_bps, const LinkBudget& link) {
    const double exponent = rate_threshold_bps / link.bandwidth_hz;
    return (std::pow(2.0, exponent) - 1.0) * (link.interference_w + link.noise_w);
}

double required_power(double rate_threshold_bps, const LinkBudget& link) {
    if (link.gain <= 0.0) throw std::invalid_argument("link gain must be positive");
    return rate_constant_a0(rate_threshold_bps, link) / link.gain;
}

double cross_tier_interference(const Scenario& scenario, const ChannelMatrix& channel,
                               int user, int carrier) {
    if (scenario.config.scenario_kind == ScenarioKind::MS) return 0.0;
    double total = 0.0;
    for (int si = 0; si < scenario.num_stations(); ++si) {
        if (!scenario.is_fap(si)) continue;
        for (const auto& use : scenario.fap_load[scenario.fap_ordinal(si)]) {
            if (use.carrier != carrier) continue;
            total += use.power_w * channel.gain(user, si, carrier);
        }
    }
    return total;
}

double interference_to_indoor(const Scenario& scenario, const ChannelMatrix& channel,
                              const AllocationState& alloc, int user, int carrier) {
    if (scenario.config.scenario_kind == ScenarioKind::MS) return 0.0;
    double total = 0.0;
    for (const auto& e : alloc.entries) {
        if (e.carrier != carrier || e.power_w <= 0.0) continue;
        if (!scenario.is_small_cell(e.station)) continue;
        total += e.power_w * channel.gain(user, e.station, carrier);
    }
    return total;
}

LinkBudget make_link(const Scenario& scenario, const ChannelMatrix& channel,
                     int user, int station, int carrier) {
    LinkBudget link;
    link.gain = channel.gain(user, station, carrier);
    link.noise_w = scenario.config.noise_power_w;
    link.bandwidth_hz = scenario.config.carrier_bandwidth_hz();
    link.interference_w = scenario.config.neighbor_interference_w;
    if (!scenario.users[user].indoor)
        link.interference_w += cross_tier_interference(scenario, channel, user, carrier);
    return link;
}

} // namespace hetnet
