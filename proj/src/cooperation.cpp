#include "hetnet/cooperation.hpp"

#include <algorithm>
#include <cmath>

namespace hetnet {

double profit_uncooperative(const CoopCellInputs& cell, const CoopParams& params) {
    return params.fixed_revenue_mu - params.fossil_price_mu * cell.fap_energy_closed_j;
}

double profit_cooperative(const CoopCellInputs& cell, const CoopParams& params,
                          double p_r, double c_re) {
    return params.fixed_revenue_mu - c_re * cell.excess_renewable_j +
           p_r * cell.offloaded_carriers -
           params.fossil_price_mu *
               std::max(0.0, cell.fap_energy_coop_j - cell.excess_renewable_j);
}

CoopAgreement solve_pricing(const std::vector<CoopCellInputs>& cells,
                            const CoopParams& params) {
    CoopAgreement agreement;
    const double c_f = params.fossil_price_mu;

    // Constraint i reads  p_r n_i - c_RE q_i >= d_i  with the max term
    // resolved from the fixed q_i (the problem stays linear).
    std::vector<double> d(cells.size());
    double total_carriers = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        d[i] = c_f * (std::max(0.0, cells[i].fap_energy_coop_j - cells[i].excess_renewable_j) -
                      cells[i].fap_energy_closed_j);
        total_carriers += cells[i].offloaded_carriers;
    }

    // Stage 1: the printed objective.  Since every q_i >= 0, shrinking c_RE
    // only relaxes the profit constraints, so the optimal payout is attained
    // at c_RE = 0 and the binding cells fix p_r.
    double p_r = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].offloaded_carriers > 0)
            p_r = std::max(p_r, d[i] / cells[i].offloaded_carriers);

    // Stage 2: the payout is degenerate in c_RE; pick the vertex with the
    // largest renewable price still admissible at the optimal p_r.
    double c_re = c_f;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].excess_renewable_j <= 0.0) continue;
        const double bound =
            (p_r * cells[i].offloaded_carriers - d[i]) / cells[i].excess_renewable_j;
        c_re = std::min(c_re, bound);
    }
    c_re = std::clamp(c_re, 0.0, c_f);

    agreement.p_r = p_r;
    agreement.c_re = c_re;
    agreement.payout_mu = p_r * total_carriers;
    agreement.feasible = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double uncoop = profit_uncooperative(cells[i], params);
        const double coop = profit_cooperative(cells[i], params, p_r, c_re);
        agreement.profit_uncoop_mu.push_back(uncoop);
        agreement.profit_coop_mu.push_back(coop);
        if (coop < uncoop - 1e-9 * std::max(1.0, std::abs(uncoop)))
            agreement.feasible = false;
    }
    return agreement;
}

std::vector<CoopCellInputs> derive_coop_inputs(const Scenario& scenario,
                                               const AllocationState& alloc,
                                               const EnergyLedger& ledger,
                                               double delta_t_s) {
    std::vector<CoopCellInputs> cells(scenario.config.num_small_cells);
    for (int i = 0; i < scenario.config.num_small_cells; ++i)
        cells[i].excess_renewable_j = ledger.excess_j[i];

    for (int si = 0; si < scenario.num_stations(); ++si) {
        if (!scenario.is_fap(si)) continue;
        const int cell = scenario.stations[si].cell_index;
        const auto& p = scenario.stations[si].power;
        const double committed = scenario.fap_committed_power(si);
        double roamed = 0.0;
        int roamed_carriers = 0;
        for (const auto& e : alloc.entries) {
            if (e.station != si) continue;
            roamed += e.power_w;
            ++roamed_carriers;
        }
        // FAPs stay powered for their registered users in both regimes.
        cells[cell].fap_energy_closed_j += (p.slope * committed + p.offset_w) * delta_t_s;
        cells[cell].fap_energy_coop_j +=
            (p.slope * (committed + roamed) + p.offset_w) * delta_t_s;
        cells[cell].offloaded_carriers += roamed_carriers;
    }
    return cells;
}

} // namespace hetnet
