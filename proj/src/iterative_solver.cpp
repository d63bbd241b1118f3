#include "hetnet/iterative_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hetnet/assignment.hpp"
#include "hetnet/powermodel.hpp"

namespace hetnet {

double uniform_init(double budget_w, int num_carriers) {
    if (num_carriers <= 0) throw std::invalid_argument("station has no carriers");
    if (budget_w < 0.0) throw std::invalid_argument("budget must be nonnegative");
    return budget_w / num_carriers;
}

std::optional<double> link_power_capped(double rate_threshold_bps, double cap_w,
                                        const LinkBudget& link) {
    if (cap_w < 0.0) throw std::invalid_argument("cap must be nonnegative");
    if (cap_w == 0.0 || link.gain <= 0.0) return std::nullopt;
    const double a0 = rate_constant_a0(rate_threshold_bps, link);
    if (link.gain < a0 / cap_w) return std::nullopt;
    return a0 / link.gain;
}

namespace {

RoundState init_round_state(const Scenario& scenario,
                            const std::vector<std::uint8_t>& cell_active) {
    RoundState state;
    for (int u = 0; u < scenario.config.num_outdoor_users; ++u) state.unserved.push_back(u);
    state.station_budget_w.assign(scenario.num_stations(), 0.0);
    state.station_free.assign(scenario.num_stations(), {});

    const int macro = scenario.macro_index();
    state.station_budget_w[macro] = scenario.stations[macro].power.max_tx_w;
    state.station_free[macro] = scenario.stations[macro].carriers;
    for (int i = 0; i < scenario.config.num_small_cells; ++i) {
        if (!cell_active[i]) continue;
        const int si = scenario.small_cell_index(i);
        state.station_budget_w[si] = scenario.stations[si].power.max_tx_w;
        state.station_free[si] = scenario.stations[si].carriers;
    }
    if (scenario.config.scenario_kind == ScenarioKind::MsfHybrid) {
        for (int si = 0; si < scenario.num_stations(); ++si) {
            if (!scenario.is_fap(si)) continue;
            state.station_budget_w[si] = scenario.fap_residual_budget(si);
            state.station_free[si] = scenario.fap_free_carriers(si);
        }
    }
    return state;
}

} // namespace

RoundOutcome allocate_round(const Scenario& scenario, const ChannelMatrix& channel,
                            const std::vector<std::uint8_t>& cell_active,
                            RoundState& state, AllocationState& alloc) {
    (void)cell_active; // active set is already baked into the state
    RoundOutcome outcome;
    struct Col {
        int station;
        int carrier;
    };
    std::vector<Col> cols;
    std::vector<double> caps(scenario.num_stations(), 0.0);
    for (int si = 0; si < scenario.num_stations(); ++si) {
        const auto& free = state.station_free[si];
        if (free.empty()) continue;
        caps[si] = state.station_budget_w[si] / static_cast<double>(free.size());
        for (int c : free) cols.push_back(Col{si, c});
    }
    if (cols.empty() || state.unserved.empty()) return outcome;

    // Users with no admissible slot under the current caps sit this round
    // out; they may come back once the budgets are respread.
    std::vector<int> candidates;
    std::vector<std::vector<double>> link_power(state.unserved.size(),
                                                std::vector<double>(cols.size(), -1.0));
    for (std::size_t r = 0; r < state.unserved.size(); ++r) {
        const int user = state.unserved[r];
        bool any = false;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const LinkBudget link =
                make_link(scenario, channel, user, cols[j].station, cols[j].carrier);
            const auto p =
                link_power_capped(scenario.config.rate_threshold_bps, caps[cols[j].station], link);
            if (p) {
                link_power[r][j] = *p;
                any = true;
            }
        }
        if (any) candidates.push_back(static_cast<int>(r));
    }
    if (candidates.empty()) return outcome;

    const int rows = static_cast<int>(candidates.size());
    CostMatrix costs(rows, static_cast<int>(cols.size()));
    for (int r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const double p = link_power[candidates[r]][j];
            costs.at(r, static_cast<int>(j)) = p >= 0.0 ? p : kForbidden;
        }
    outcome.operations += static_cast<std::int64_t>(rows) * rows *
                          std::max<std::size_t>(cols.size(), 1);
    if (rows > static_cast<int>(cols.size()))
        costs.pad_columns(rows - static_cast<int>(cols.size()), kForbidden);

    const AssignmentResult res = solve_assignment(costs);

    std::vector<char> served_flag(state.unserved.size(), 0);
    for (int r = 0; r < rows; ++r) {
        const int ui = candidates[r];
        const int user = state.unserved[ui];
        const int j = res.col_of_row[r];
        if (j < 0 || j >= static_cast<int>(cols.size())) continue;
        const double p = costs.at(r, j);
        alloc.entries.push_back(Assignment{user, cols[j].station, cols[j].carrier, p});
        state.station_budget_w[cols[j].station] -= p;
        auto& free = state.station_free[cols[j].station];
        free.erase(std::find(free.begin(), free.end(), cols[j].carrier));
        outcome.allocated_power_w += p;
        ++outcome.newly_served;
        served_flag[ui] = 1;
    }
    std::vector<int> still_unserved;
    for (std::size_t r = 0; r < state.unserved.size(); ++r)
        if (!served_flag[r]) still_unserved.push_back(state.unserved[r]);
    state.unserved = std::move(still_unserved);
    return outcome;
}

AllocationOutcome allocate_for_active_set(const Scenario& scenario,
                                          const ChannelMatrix& channel,
                                          const std::vector<std::uint8_t>& cell_active) {
    AllocationOutcome out;
    out.alloc.kind = scenario.config.scenario_kind;
    out.alloc.small_cell_on = cell_active;

    RoundState state = init_round_state(scenario, cell_active);
    while (!state.unserved.empty()) {
        const RoundOutcome round = allocate_round(scenario, channel, cell_active, state, out.alloc);
        out.operations += round.operations;
        // Stop when nothing was allocated: the budgets stayed put, so
        // another round would see identical caps.
        if (round.newly_served == 0) break;
    }
    out.served = scenario.config.num_outdoor_users - static_cast<int>(state.unserved.size());
    out.all_served = state.unserved.empty();
    out.total_power_w = network_power(out.alloc, scenario, true);
    return out;
}

SolveReport solve_iterative(const Scenario& scenario, const ChannelMatrix& channel,
                            const IterativeOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const int num_cells = scenario.config.num_small_cells;

    std::vector<std::uint8_t> active(num_cells, 1);
    AllocationOutcome incumbent = allocate_for_active_set(scenario, channel, active);
    std::int64_t operations = incumbent.operations;
    double p_min = incumbent.total_power_w;

    const bool hybrid = scenario.config.scenario_kind == ScenarioKind::MsfHybrid;
    auto coop_ok = [&](const AllocationOutcome& out) {
        if (!hybrid || !opts.hybrid_coop_check) return true;
        const EnergyLedger ledger = excess_renewable(scenario, out.alloc, opts.coop.delta_t_s);
        const auto inputs = derive_coop_inputs(scenario, out.alloc, ledger, opts.coop.delta_t_s);
        return solve_pricing(inputs, opts.coop).feasible;
    };

    if (opts.enable_elimination && incumbent.all_served) {
        bool changed = true;
        while (changed) {
            changed = false;
            int best_cell = -1;
            AllocationOutcome best_out;
            double best_power = std::numeric_limits<double>::infinity();
            for (int i = 0; i < num_cells; ++i) {
                if (!active[i]) continue;
                std::vector<std::uint8_t> candidate = active;
                candidate[i] = 0;
                AllocationOutcome out = allocate_for_active_set(scenario, channel, candidate);
                operations += out.operations;
                if (!out.all_served) continue;
                if (!coop_ok(out)) continue;
                if (out.total_power_w < best_power) {
                    best_power = out.total_power_w;
                    best_cell = i;
                    best_out = std::move(out);
                }
            }
            if (best_cell >= 0 && best_power <= p_min) {
                active[best_cell] = 0;
                p_min = best_power;
                incumbent = std::move(best_out);
                changed = true;
            }
        }
    }

    SolveReport report;
    report.allocation = incumbent.alloc;
    report.feasible = incumbent.all_served;
    report.served_users = incumbent.served;
    report.objective_w = incumbent.total_power_w;
    report.reported_objective_w = network_power(incumbent.alloc, scenario, false);
    report.iterations = 1;
    report.operations = operations;
    report.user_rate_bps.assign(scenario.config.num_outdoor_users, 0.0);
    for (const auto& e : incumbent.alloc.entries) {
        const LinkBudget link = make_link(scenario, channel, e.user, e.station, e.carrier);
        report.user_rate_bps[e.user] += rate_bps(e.power_w, link);
    }
    if (!incumbent.all_served) report.note = "outage: not all users served";
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace hetnet
