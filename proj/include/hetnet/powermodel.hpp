#pragma once

#include <optional>
#include <vector>

#include "hetnet/types.hpp"

namespace hetnet {

/// Full EARTH consumption model component values.
struct EarthDetail {
    double pa_efficiency = 1.0;  // eta_PA
    double feeder_loss = 0.0;    // sigma_feed
    double rf_power_w = 0.0;     // P_RF
    double baseband_power_w = 0.0; // P_BB
    double dc_loss = 0.0;        // sigma_DC
    double mains_loss = 0.0;     // sigma_MS
    double cooling_loss = 0.0;   // sigma_cool
};

/// Linear model: a * P_tx + b for 0 < P_tx <= P_max, sleep floor at P_tx = 0.
double consumption_linear(double p_tx_w, const PowerParams& params);

/// [P_tx / (eta_PA (1 - feed)) + P_RF + P_BB] / [(1-DC)(1-MS)(1-cool)].
double consumption_earth(double p_tx_w, const EarthDetail& detail);

/// Fits (a, b) of the linear model from two EARTH evaluations.
std::pair<double, double> fit_linear_from_earth(const EarthDetail& detail,
                                                double p_tx_lo_w, double p_tx_hi_w);

/// Network objective: active small cells at a_S * P_tx + b_S, sleeping ones
/// at P_sleep, macro always active at a_M * P_tx + b_M.  FAP consumption is
/// excluded (not operator-controlled).  Set include_macro_offset=false for
/// the figure-reporting convention that drops b_M.
double network_power(const AllocationState& alloc, const Scenario& scenario,
                     bool include_macro_offset = true);

/// True when every station's transmit-power sum respects its cap (and the
/// FAP residual budgets in the hybrid scenario).
bool budgets_ok(const AllocationState& alloc, const Scenario& scenario,
                double tolerance = 1e-9);

/// Consumption of one small cell under an allocation (sleep power if off).
double small_cell_consumption(const AllocationState& alloc, const Scenario& scenario,
                              int cell);

struct EnergyLedger {
    double delta_t_s = 1.0;
    std::vector<double> renewable_j;   // Q_bar_i
    std::vector<double> consumption_j; // P_Si * dt
    std::vector<double> excess_j;      // q_i = max(0, Q_bar_i - P_Si dt)
};

EnergyLedger excess_renewable(const Scenario& scenario, const AllocationState& alloc,
                              double delta_t_s = 1.0);

} // namespace hetnet
