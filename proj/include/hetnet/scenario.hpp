#pragma once

#include "hetnet/types.hpp"

namespace hetnet {

enum class FapLoadPolicy { UniformPower, PerFapSolve };

/// Power parameter table for the three station kinds (EARTH defaults).
struct PowerTable {
    PowerParams macro{4.7, 130.0, 75.0, 20.0};
    PowerParams small{4.0, 6.8, 4.3, 2.0};
    PowerParams fap{8.0, 4.8, 0.0, 1.0};
};

void validate_config(const NetworkConfig& config);

/// Builds a randomized-but-seeded topology: macro at the origin, small cells
/// evenly spaced on a ring, FAPs scattered inside their cell, outdoor users
/// uniform in the macro disk, indoor users inside their FAP's building, and
/// truncated-normal renewable budgets per small cell.
Scenario generate(const NetworkConfig& config, const GeometrySpec& geometry,
                  const PowerTable& power = PowerTable{});

class ChannelMatrix;

/// Fixes the (carrier, power) pairs used by each FAP for its registered
/// users.  UniformPower spreads P_F^max evenly over all small-cell-tier
/// carriers; PerFapSolve gives each FAP the minimum-power assignment that
/// meets the rate threshold for its own users (a channel is built from the
/// scenario seed when none is supplied).
void assign_fap_load(Scenario& scenario, FapLoadPolicy policy);
void assign_fap_load(Scenario& scenario, FapLoadPolicy policy,
                     const ChannelMatrix& channel);

/// Full invariant check (counts, carrier partition, occupancy exclusivity);
/// throws std::invalid_argument on violation.
void validate_scenario(const Scenario& scenario);

std::string scenario_to_text(const Scenario& scenario);
Scenario scenario_from_text(const std::string& text);
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

} // namespace hetnet
