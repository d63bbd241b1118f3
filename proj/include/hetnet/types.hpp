#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetnet {

/// Thrown when a problem instance admits no solution (too many users for the
/// available carriers, no finite matching, ...).  Solver-level infeasibility
/// of a particular run is reported through SolveReport instead.
class InfeasibleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ScenarioKind { MS, MsfClosed, MsfHybrid };

enum class StationKind { Macro, SmallCell, Fap };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Linear base-station power model P = a * P_tx + b with a sleep floor,
/// plus the transmit cap.
struct PowerParams {
    double slope = 0.0;   // a_chi
    double offset_w = 0.0; // b_chi
    double sleep_w = 0.0;  // P_sleep
    double max_tx_w = 0.0; // P_max (transmit power cap)
};

struct NetworkConfig {
    double cell_radius_m = 500.0;
    int num_small_cells = 4;   // L_s
    int num_faps_per_cell = 3; // L_f
    int num_outdoor_users = 40; // U
    int indoor_users_per_fap = 3; // V
    double total_bandwidth_hz = 9e6; // B_C
    int total_carriers = 45;     // N_C
    int macro_carriers = 30;     // N_C^(M)
    int smallcell_carriers = 15; // N_C^(S)
    double rate_threshold_bps = 0.5e6; // R_0
    double noise_power_w = 1.0e-15;    // N_0 (~ -120 dBm over a 200 kHz carrier)
    double neighbor_interference_w = 0.0; // I_0
    ScenarioKind scenario_kind = ScenarioKind::MS;
    std::uint64_t rng_seed = 1;

    double carrier_bandwidth_hz() const {
        return total_bandwidth_hz / total_carriers;
    }
};

/// Placement rules with no canonical values; fixed deterministic
/// defaults keep regeneration reproducible.
struct GeometrySpec {
    double small_cell_radius_m = 100.0;
    double ring_fraction = 0.6;         // small cells at 0.6 * cell radius
    double fap_scatter_fraction = 0.5;  // FAPs within 0.5 * small cell radius
    double fap_indoor_depth_m = 5.0;    // d_in, wall-to-FAP distance
    double min_link_distance_m = 1.0;   // users re-drawn closer than this
    double renewable_mean_j = 50.0;     // mu_g
    double renewable_std_j = 15.0;      // sigma_g
};

struct Station {
    StationKind kind = StationKind::Macro;
    int cell_index = -1; // small cell ordinal; parent cell for FAPs
    int fap_index = -1;  // FAP ordinal within its cell
    Position position;
    double indoor_depth_m = 0.0; // FAPs only
    std::vector<int> carriers;   // global carrier indices, ordered
    PowerParams power;
};

struct User {
    int id = -1;
    Position position;
    bool indoor = false;
    int serving_fap = -1; // station index of the registered FAP; -1 outdoor
};

/// One occupied FAP carrier: which registered user holds it at what power.
struct FapCarrierUse {
    int carrier = -1;
    double power_w = 0.0;
    int user = -1;
};

struct Scenario {
    NetworkConfig config;
    GeometrySpec geometry;
    std::vector<Station> stations; // [0]=macro, [1..L_s]=small cells, then FAPs
    std::vector<User> users;       // outdoor first, then indoor
    std::vector<double> renewable_j;            // per small cell, Q_bar_i
    std::vector<std::vector<FapCarrierUse>> fap_load; // per FAP ordinal
    bool fap_load_assigned = false;

    int macro_index() const { return 0; }
    int small_cell_index(int i) const { return 1 + i; }
    int fap_station_index(int cell, int fap) const {
        return 1 + config.num_small_cells + cell * config.num_faps_per_cell + fap;
    }
    int num_stations() const { return static_cast<int>(stations.size()); }
    int num_faps() const { return config.num_small_cells * config.num_faps_per_cell; }
    int fap_ordinal(int station_index) const {
        return station_index - 1 - config.num_small_cells;
    }
    bool is_small_cell(int station_index) const {
        return stations[station_index].kind == StationKind::SmallCell;
    }
    bool is_fap(int station_index) const {
        return stations[station_index].kind == StationKind::Fap;
    }

    bool fap_carrier_occupied(int fap_station, int carrier) const;
    /// Registered-user transmit power already committed on a FAP.
    double fap_committed_power(int fap_station) const;
    /// Transmit budget left for roamed outdoor users (MSF-hybrid).
    double fap_residual_budget(int fap_station) const;
    std::vector<int> fap_free_carriers(int fap_station) const;
};

/// One user-station-carrier assignment with its transmit power.
struct Assignment {
    int user = -1;
    int station = -1;
    int carrier = -1;
    double power_w = 0.0;
};

/// Decision variables of the optimization problems: small-cell on/off flags,
/// the user matching, and per-carrier powers.
struct AllocationState {
    ScenarioKind kind = ScenarioKind::MS;
    std::vector<std::uint8_t> small_cell_on; // pi, indexed by cell ordinal
    std::vector<Assignment> entries;

    bool cell_on(int cell) const { return small_cell_on[cell] != 0; }
    double station_tx_power(int station_index) const {
        double sum = 0.0;
        for (const auto& e : entries)
            if (e.station == station_index) sum += e.power_w;
        return sum;
    }
    int users_on_station(int station_index) const {
        int n = 0;
        for (const auto& e : entries) n += (e.station == station_index) ? 1 : 0;
        return n;
    }
};

struct SolveReport {
    double objective_w = 0.0;          // network objective, b_M included
    double reported_objective_w = 0.0; // b_M excluded (figure convention)
    bool feasible = false;
    int served_users = 0;
    std::vector<double> user_rate_bps;
    std::vector<double> dual_trace; // best dual value per iteration (dual solver)
    double best_dual_w = 0.0;
    bool weak_duality_ok = true;
    int iterations = 0;
    std::int64_t operations = 0;
    double wall_seconds = 0.0;
    AllocationState allocation;
    std::string note;
};

} // namespace hetnet
