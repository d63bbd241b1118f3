#pragma once

#include <cstdint>

#include "hetnet/channel.hpp"
#include "hetnet/radio.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

/// Desk-scale instance small enough for exhaustive search: at most 4 users,
/// 2 small cells, 8 carriers, with a frozen channel matrix.
struct TinyInstance {
    Scenario scenario;
    ChannelMatrix channel;
};

/// Seeded families of tiny instances used by the verification suites.
TinyInstance make_tiny_instance(std::uint64_t seed, ScenarioKind kind);

/// Enumerates every on/off vector and every user-to-slot injection, prices
/// each link at its minimal rate-meeting power, filters by budgets, and
/// returns the best objective.  Independent of both solvers.
SolveReport exhaustive_optimum(const TinyInstance& instance);

/// Grid argmin of D(P) = (a + lambda) P - mu R(P) on [0, p_max]; the
/// brute-force counterpart of the closed-form per-carrier power.
double grid_minimize_d(double a_station, double lambda_station, double mu_u,
                       const LinkBudget& link, double p_max, double resolution,
                       double rate_unit_bps = 1e6);

} // namespace hetnet
