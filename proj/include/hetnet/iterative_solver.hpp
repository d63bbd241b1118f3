#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hetnet/channel.hpp"
#include "hetnet/cooperation.hpp"
#include "hetnet/radio.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

struct IterativeOptions {
    bool enable_elimination = true; // false = "all active" baseline
    /// Hybrid eliminations must keep the pricing LP satisfied (profitability
    /// and price-cap checks).
    bool hybrid_coop_check = true;
    CoopParams coop;
};

/// Uniform split of a station budget over its carriers.
double uniform_init(double budget_w, int num_carriers);

/// A_0 / h when the channel is good enough for the per-carrier
/// cap, otherwise nothing.
std::optional<double> link_power_capped(double rate_threshold_bps, double cap_w,
                                        const LinkBudget& link);

/// Working state of the multi-round allocation for one active set.
struct RoundState {
    std::vector<int> unserved;                 // user ids
    std::vector<std::uint8_t> carrier_used;    // per (station, carrier) slot key
    std::vector<double> station_budget_w;      // residual P_bar per station
    std::vector<std::vector<int>> station_free; // free carriers per station
};

struct RoundOutcome {
    int newly_served = 0;
    double allocated_power_w = 0.0;
    std::int64_t operations = 0;
};

/// One Hungarian round: serve the maximum number of unserved users with
/// minimum power under the current per-carrier caps, then fold the spent
/// power out of the budgets and respread uniformly.
RoundOutcome allocate_round(const Scenario& scenario, const ChannelMatrix& channel,
                            const std::vector<std::uint8_t>& cell_active,
                            RoundState& state, AllocationState& alloc);

struct AllocationOutcome {
    AllocationState alloc;
    int served = 0;
    bool all_served = false;
    double total_power_w = 0.0; // objective, b_M included
    std::int64_t operations = 0;
};

/// Full repeat-until-stable allocation for a fixed active set.
AllocationOutcome allocate_for_active_set(const Scenario& scenario,
                                          const ChannelMatrix& channel,
                                          const std::vector<std::uint8_t>& cell_active);

/// Low-complexity switch-off search: start all-on, then greedily eliminate the
/// small cell whose removal lowers total power the most while every user
/// stays served (plus cooperation checks in the hybrid scenario).
SolveReport solve_iterative(const Scenario& scenario, const ChannelMatrix& channel,
                            const IterativeOptions& opts = IterativeOptions{});

} // namespace hetnet
