#pragma once

#include <string>

#include "hetnet/channel.hpp"
#include "hetnet/cooperation.hpp"
#include "hetnet/dual_solver.hpp"
#include "hetnet/scenario.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

/// Everything a run needs, mirroring the documented configuration schema.
struct SimConfig {
    NetworkConfig network;
    GeometrySpec geometry;
    ChannelParams channel;
    PowerTable power;
    DualOptions dual;
    CoopParams coop;
    FapLoadPolicy fap_load_policy = FapLoadPolicy::UniformPower;
};

SimConfig default_config();

std::string config_to_text(const SimConfig& config);
SimConfig config_from_text(const std::string& text);

SimConfig load_config(const std::string& path);
void save_config(const SimConfig& config, const std::string& path);

} // namespace hetnet
