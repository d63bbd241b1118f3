#pragma once

#include <vector>

#include "hetnet/powermodel.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

struct CoopParams {
    double fixed_revenue_mu = 10.0;  // R, per FAP operator
    double fossil_price_mu = 0.5;    // c_f, per joule
    double delta_t_s = 1.0;
};

/// Per-small-cell inputs of the pricing problem.  Energies are reported for
/// both regimes: the closed allocation (registered users only) and the
/// cooperative one (registered + roamed).
struct CoopCellInputs {
    double excess_renewable_j = 0.0;   // q_i
    int offloaded_carriers = 0;        // sum_l carriers used by roamed users
    double fap_energy_closed_j = 0.0;  // sum_l P_F_il dt, registered load only
    double fap_energy_coop_j = 0.0;    // same with roamed users included
};

/// Closed-access profit: R - c_f * (FAP energy).
double profit_uncooperative(const CoopCellInputs& cell, const CoopParams& params);

/// Cooperative profit: R - c_RE q + p_r n - c_f max(0, FAP energy - q).
double profit_cooperative(const CoopCellInputs& cell, const CoopParams& params,
                          double p_r, double c_re);

struct CoopAgreement {
    double p_r = 0.0;  // offloading price per roamed user-carrier
    double c_re = 0.0; // preferential renewable price per joule
    double payout_mu = 0.0; // objective p_r * total offloaded carriers
    std::vector<double> profit_uncoop_mu;
    std::vector<double> profit_coop_mu;
    bool feasible = false;
};

/// Two-variable LP of the cooperation agreement: minimize the operator
/// payout p_r * sum n_i subject to per-cell profitability and c_RE <= c_f.
/// The optimal face is degenerate in c_RE; the returned vertex carries the
/// minimum payout with the largest admissible renewable price.
CoopAgreement solve_pricing(const std::vector<CoopCellInputs>& cells,
                            const CoopParams& params);

/// Derives the pricing inputs from a solved hybrid allocation.
std::vector<CoopCellInputs> derive_coop_inputs(const Scenario& scenario,
                                               const AllocationState& alloc,
                                               const EnergyLedger& ledger,
                                               double delta_t_s = 1.0);

} // namespace hetnet
