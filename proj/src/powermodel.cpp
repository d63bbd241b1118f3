#include "hetnet/powermodel.hpp"

#include <cmath>
#include <stdexcept>

namespace hetnet {

double consumption_linear(double p_tx_w, const PowerParams& params) {
    if (p_tx_w < 0.0) throw std::invalid_argument("transmit power must be nonnegative");
    if (p_tx_w > params.max_tx_w * (1.0 + 1e-12))
        throw std::invalid_argument("transmit power exceeds the station cap");
    if (p_tx_w == 0.0) return params.sleep_w;
    return params.slope * p_tx_w + params.offset_w;
}

double consumption_earth(double p_tx_w, const EarthDetail& d) {
    if (p_tx_w < 0.0) throw std::invalid_argument("transmit power must be nonnegative");
    if (d.feeder_loss >= 1.0 || d.dc_loss >= 1.0 || d.mains_loss >= 1.0 ||
        d.cooling_loss >= 1.0 || d.feeder_loss < 0.0 || d.dc_loss < 0.0 ||
        d.mains_loss < 0.0 || d.cooling_loss < 0.0)
        throw std::invalid_argument("loss fractions must lie in [0, 1)");
    if (d.pa_efficiency <= 0.0)
        throw std::invalid_argument("PA efficiency must be positive");
    const double numerator =
        p_tx_w / (d.pa_efficiency * (1.0 - d.feeder_loss)) + d.rf_power_w + d.baseband_power_w;
    return numerator / ((1.0 - d.dc_loss) * (1.0 - d.mains_loss) * (1.0 - d.cooling_loss));
}

std::pair<double, double> fit_linear_from_earth(const EarthDetail& detail,
                                                double p_tx_lo_w, double p_tx_hi_w) {
    if (p_tx_hi_w <= p_tx_lo_w)
        throw std::invalid_argument("need two distinct transmit powers");
    const double lo = consumption_earth(p_tx_lo_w, detail);
    const double hi = consumption_earth(p_tx_hi_w, detail);
    const double slope = (hi - lo) / (p_tx_hi_w - p_tx_lo_w);
    return {slope, lo - slope * p_tx_lo_w};
}

double network_power(const AllocationState& alloc, const Scenario& scenario,
                     bool include_macro_offset) {
    if (!budgets_ok(alloc, scenario))
        throw std::domain_error("allocation violates a station power budget");
    double total = 0.0;
    for (int i = 0; i < scenario.config.num_small_cells; ++i) {
        const int si = scenario.small_cell_index(i);
        const auto& p = scenario.stations[si].power;
        if (alloc.cell_on(i))
            total += p.slope * alloc.station_tx_power(si) + p.offset_w;
        else
            total += p.sleep_w;
    }
    const auto& mp = scenario.stations[scenario.macro_index()].power;
    total += mp.slope * alloc.station_tx_power(scenario.macro_index());
    if (include_macro_offset) total += mp.offset_w;
    return total;
}

bool budgets_ok(const AllocationState& alloc, const Scenario& scenario, double tolerance) {
    for (int si = 0; si < scenario.num_stations(); ++si) {
        const double tx = alloc.station_tx_power(si);
        double cap = scenario.stations[si].power.max_tx_w;
        if (scenario.is_fap(si)) cap = scenario.fap_residual_budget(si);
        if (tx > cap * (1.0 + tolerance) + tolerance) return false;
    }
    return true;
}

double small_cell_consumption(const AllocationState& alloc, const Scenario& scenario,
                              int cell) {
    const int si = scenario.small_cell_index(cell);
    const auto& p = scenario.stations[si].power;
    if (!alloc.cell_on(cell)) return p.sleep_w;
    return p.slope * alloc.station_tx_power(si) + p.offset_w;
}

EnergyLedger excess_renewable(const Scenario& scenario, const AllocationState& alloc,
                              double delta_t_s) {
    EnergyLedger ledger;
    ledger.delta_t_s = delta_t_s;
    for (int i = 0; i < scenario.config.num_small_cells; ++i) {
        const double consumption = small_cell_consumption(alloc, scenario, i) * delta_t_s;
        ledger.renewable_j.push_back(scenario.renewable_j[i]);
        ledger.consumption_j.push_back(consumption);
        ledger.excess_j.push_back(std::max(0.0, scenario.renewable_j[i] - consumption));
    }
    return ledger;
}

} // namespace hetnet
