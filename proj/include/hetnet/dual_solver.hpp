#pragma once

#include <cstdint>
#include <vector>

#include "hetnet/channel.hpp"
#include "hetnet/radio.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

struct DualOptions {
    int max_iterations = 500;
    double accuracy_eps = 0.0;     // >0 caps iterations at 1/eps^2
    double step_constant = 1.0;    // c in delta^tau = c / sqrt(tau)
    double improvement_tol = 1e-4; // best-dual improvement (watts) ...
    int improvement_window = 25;   // ... over this many iterations stops
    double rate_unit_bps = 1e6;    // multipliers live in (watts, Mbps) units
    int exhaustive_onoff_limit = 6; // enumerate pi subsets up to this L_s
};

/// Lagrange multipliers: lambda per station (power budgets), mu per outdoor
/// user (rate constraints).  Projection keeps both nonnegative.
struct Multipliers {
    std::vector<double> lambda;
    std::vector<double> mu;
    int iteration = 0;
};

Multipliers initial_multipliers(const Scenario& scenario);

/// Closed-form per-carrier power: the box-constrained minimizer of
/// D(P) = (a + lambda) P - mu * R(P) on [0, p_box].
double optimal_carrier_power(double mu_u, double a_station, double lambda_station,
                             const LinkBudget& link, double p_box,
                             double rate_unit_bps);

/// One candidate slot of the assignment stage.
struct Slot {
    int station = -1;
    int carrier = -1;
    double p_box = 0.0; // per-slot power ceiling (budget or FAP residual)
};

/// Enumerates the slots offered to outdoor users: macro carriers, active
/// small-cell carriers, plus free FAP carriers in the hybrid scenario.
std::vector<Slot> enumerate_slots(const Scenario& scenario,
                                  const std::vector<std::uint8_t>& cell_active);

struct InnerSolution {
    AllocationState alloc;   // powers are the closed-form water levels
    std::vector<double> user_rate_scaled; // achieved rate per user at those powers
    double dual_value_w = 0.0;
    bool exact_onoff = true; // subset search was exhaustive
    std::int64_t operations = 0;
};

/// Minimizes the Lagrangian over (pi, epsilon, P): closed-form powers per
/// slot, a linear-assignment problem for the matching, and the on/off
/// comparison per small cell at the lower Lagrangian value.
InnerSolution inner_minimize(const Scenario& scenario, const ChannelMatrix& channel,
                             const Multipliers& multipliers, const DualOptions& opts);

/// Subgradient update with diminishing steps c/sqrt(tau), projected onto
/// the nonnegative orthant.
Multipliers subgradient_step(const Multipliers& multipliers, const InnerSolution& inner,
                             const Scenario& scenario, const DualOptions& opts);

/// Full dual-decomposition solve with primal recovery: keeps the best
/// budget-feasible rate-exact allocation seen across iterations.
SolveReport solve_dual(const Scenario& scenario, const ChannelMatrix& channel,
                       const DualOptions& opts = DualOptions{});

/// Recovers a primal allocation from a matching by setting each link's power
/// to required_power; returns false if any budget is violated or a user
/// cannot reach the threshold.
bool recover_primal(const Scenario& scenario, const ChannelMatrix& channel,
                    const AllocationState& inner_alloc, AllocationState& out);

} // namespace hetnet
