#include "hetnet/dual_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "hetnet/assignment.hpp"
#include "hetnet/powermodel.hpp"

namespace hetnet {

Multipliers initial_multipliers(const Scenario& scenario) {
    Multipliers m;
    m.lambda.assign(scenario.num_stations(), 0.0);
    m.mu.assign(scenario.config.num_outdoor_users, 0.0);
    m.iteration = 0;
    return m;
}

namespace {

/// Objective slope of a station as the operator sees it: FAP transmit power
/// costs the operator nothing.
double objective_slope(const Scenario& scenario, int station) {
    return scenario.is_fap(station) ? 0.0 : scenario.stations[station].power.slope;
}

double scaled_rate(double p_w, const LinkBudget& link, double rate_unit_bps) {
    return rate_bps(p_w, link) / rate_unit_bps;
}

} // namespace

double optimal_carrier_power(double mu_u, double a_station, double lambda_station,
                             const LinkBudget& link, double p_box,
                             double rate_unit_bps) {
    if (mu_u <= 0.0 || link.gain <= 0.0 || p_box <= 0.0) return 0.0;
    const double denom = a_station + lambda_station;
    double p;
    if (denom <= 0.0) {
        // No power cost at all: D decreases in P, the box is the minimizer.
        p = p_box;
    } else {
        const double bw_scaled = link.bandwidth_hz / rate_unit_bps;
        const double water = mu_u * bw_scaled / (std::log(2.0) * denom);
        p = water - (link.interference_w + link.noise_w) / link.gain;
    }
    return std::clamp(p, 0.0, p_box);
}

std::vector<Slot> enumerate_slots(const Scenario& scenario,
                                  const std::vector<std::uint8_t>& cell_active) {
    std::vector<Slot> slots;
    const auto& macro = scenario.stations[scenario.macro_index()];
    for (int c : macro.carriers)
        slots.push_back(Slot{scenario.macro_index(), c, macro.power.max_tx_w});
    for (int i = 0; i < scenario.config.num_small_cells; ++i) {
        if (!cell_active[i]) continue;
        const int si = scenario.small_cell_index(i);
        for (int c : scenario.stations[si].carriers)
            slots.push_back(Slot{si, c, scenario.stations[si].power.max_tx_w});
    }
    if (scenario.config.scenario_kind == ScenarioKind::MsfHybrid) {
        for (int si = 0; si < scenario.num_stations(); ++si) {
            if (!scenario.is_fap(si)) continue;
            const double residual = scenario.fap_residual_budget(si);
            if (residual <= 0.0) continue;
            for (int c : scenario.fap_free_carriers(si))
                slots.push_back(Slot{si, c, residual});
        }
    }
    return slots;
}

namespace {

struct SlotCosts {
    std::vector<Slot> slots;
    // row-major (user, slot)
    std::vector<double> cost;
    std::vector<double> power;
    std::vector<double> rate_scaled;
    int users = 0;

    double at(int u, int s, const std::vector<double>& v) const {
        return v[static_cast<std::size_t>(u) * slots.size() + s];
    }
};

SlotCosts build_costs(const Scenario& scenario, const ChannelMatrix& channel,
                      const Multipliers& mult, const DualOptions& opts) {
    SlotCosts sc;
    std::vector<std::uint8_t> all_on(scenario.config.num_small_cells, 1);
    sc.slots = enumerate_slots(scenario, all_on);
    sc.users = scenario.config.num_outdoor_users;
    const std::size_t n = static_cast<std::size_t>(sc.users) * sc.slots.size();
    sc.cost.resize(n);
    sc.power.resize(n);
    sc.rate_scaled.resize(n);
    for (int u = 0; u < sc.users; ++u) {
        for (std::size_t k = 0; k < sc.slots.size(); ++k) {
            const Slot& slot = sc.slots[k];
            const LinkBudget link = make_link(scenario, channel, u, slot.station, slot.carrier);
            const double a = objective_slope(scenario, slot.station);
            const double lambda = mult.lambda[slot.station];
            const double p = optimal_carrier_power(mult.mu[u], a, lambda, link,
                                                   slot.p_box, opts.rate_unit_bps);
            const std::size_t idx = static_cast<std::size_t>(u) * sc.slots.size() + k;
            sc.power[idx] = p;
            sc.rate_scaled[idx] = scaled_rate(p, link, opts.rate_unit_bps);
            sc.cost[idx] = (a + lambda) * p - mult.mu[u] * sc.rate_scaled[idx];
        }
    }
    return sc;
}

struct MaskEval {
    double matched_cost = 0.0;
    std::vector<int> slot_of_user; // index into SlotCosts::slots, -1 unmatched
};

MaskEval evaluate_mask(const Scenario& scenario, const SlotCosts& sc,
                       unsigned mask, std::int64_t& operations) {
    std::vector<int> active_slots;
    active_slots.reserve(sc.slots.size());
    for (std::size_t k = 0; k < sc.slots.size(); ++k) {
        const int st = sc.slots[k].station;
        if (scenario.is_small_cell(st)) {
            const int cell = scenario.stations[st].cell_index;
            if (!(mask & (1u << cell))) continue;
        }
        active_slots.push_back(static_cast<int>(k));
    }
    CostMatrix costs(sc.users, static_cast<int>(active_slots.size()));
    for (int u = 0; u < sc.users; ++u)
        for (std::size_t j = 0; j < active_slots.size(); ++j)
            costs.at(u, static_cast<int>(j)) = sc.at(u, active_slots[j], sc.cost);
    operations += static_cast<std::int64_t>(sc.users) * sc.users *
                  std::max<std::size_t>(active_slots.size(), 1);
    const AssignmentResult res = solve_assignment(costs);
    MaskEval eval;
    eval.matched_cost = res.total_cost;
    eval.slot_of_user.assign(sc.users, -1);
    for (int u = 0; u < sc.users; ++u)
        if (res.col_of_row[u] >= 0) eval.slot_of_user[u] = active_slots[res.col_of_row[u]];
    return eval;
}

double mask_fixed_cost(const Scenario& scenario, unsigned mask) {
    double total = scenario.stations[scenario.macro_index()].power.offset_w;
    for (int i = 0; i < scenario.config.num_small_cells; ++i) {
        const auto& p = scenario.stations[scenario.small_cell_index(i)].power;
        total += (mask & (1u << i)) ? p.offset_w : p.sleep_w;
    }
    return total;
}

/// -sum(lambda * budget) + sum(mu * R0), the multiplier constants of the
/// dual function.
double multiplier_constant(const Scenario& scenario, const Multipliers& mult,
                           const DualOptions& opts) {
    double total = 0.0;
    for (int si = 0; si < scenario.num_stations(); ++si) {
        if (scenario.is_fap(si)) {
            if (scenario.config.scenario_kind == ScenarioKind::MsfHybrid)
                total -= mult.lambda[si] * scenario.fap_residual_budget(si);
        } else {
            total -= mult.lambda[si] * scenario.stations[si].power.max_tx_w;
        }
    }
    const double r0_scaled = scenario.config.rate_threshold_bps / opts.rate_unit_bps;
    for (double mu : mult.mu) total += mu * r0_scaled;
    return total;
}

} // namespace

InnerSolution inner_minimize(const Scenario& scenario, const ChannelMatrix& channel,
                             const Multipliers& multipliers, const DualOptions& opts) {
    const int num_cells = scenario.config.num_small_cells;
    InnerSolution out;
    SlotCosts sc = build_costs(scenario, channel, multipliers, opts);
    out.operations += static_cast<std::int64_t>(sc.cost.size());

    unsigned best_mask = 0;
    double best_value = std::numeric_limits<double>::infinity();
    MaskEval best_eval;

    if (num_cells <= opts.exhaustive_onoff_limit) {
        const unsigned masks = 1u << num_cells;
        for (unsigned mask = 0; mask < masks; ++mask) {
            MaskEval eval = evaluate_mask(scenario, sc, mask, out.operations);
            const double value = eval.matched_cost + mask_fixed_cost(scenario, mask);
            if (value < best_value) {
                best_value = value;
                best_mask = mask;
                best_eval = std::move(eval);
            }
        }
        out.exact_onoff = true;
    } else {
        // Greedy descent over single-cell flips; still picks the lower
        // Lagrangian value per comparison but is not exhaustive.
        unsigned mask = (1u << num_cells) - 1;
        MaskEval eval = evaluate_mask(scenario, sc, mask, out.operations);
        double value = eval.matched_cost + mask_fixed_cost(scenario, mask);
        bool improved = true;
        while (improved) {
            improved = false;
            for (int i = 0; i < num_cells; ++i) {
                const unsigned candidate = mask ^ (1u << i);
                MaskEval cand_eval = evaluate_mask(scenario, sc, candidate, out.operations);
                const double cand_value =
                    cand_eval.matched_cost + mask_fixed_cost(scenario, candidate);
                if (cand_value < value - 1e-12) {
                    value = cand_value;
                    mask = candidate;
                    eval = std::move(cand_eval);
                    improved = true;
                }
            }
        }
        best_mask = mask;
        best_value = value;
        best_eval = std::move(eval);
        out.exact_onoff = false;
    }

    out.dual_value_w = best_value + multiplier_constant(scenario, multipliers, opts);
    out.alloc.kind = scenario.config.scenario_kind;
    out.alloc.small_cell_on.assign(num_cells, 0);
    for (int i = 0; i < num_cells; ++i)
        out.alloc.small_cell_on[i] = (best_mask & (1u << i)) ? 1 : 0;
    out.user_rate_scaled.assign(sc.users, 0.0);
    for (int u = 0; u < sc.users; ++u) {
        const int k = best_eval.slot_of_user[u];
        if (k < 0) continue;
        out.alloc.entries.push_back(Assignment{u, sc.slots[k].station, sc.slots[k].carrier,
                                               sc.at(u, k, sc.power)});
        out.user_rate_scaled[u] = sc.at(u, k, sc.rate_scaled);
    }
    return out;
}

Multipliers subgradient_step(const Multipliers& multipliers, const InnerSolution& inner,
                             const Scenario& scenario, const DualOptions& opts) {
    Multipliers next = multipliers;
    const int tau = multipliers.iteration + 1;
    const double step = opts.step_constant / std::sqrt(static_cast<double>(tau));

    std::vector<double> usage(scenario.num_stations(), 0.0);
    for (const auto& e : inner.alloc.entries) usage[e.station] += e.power_w;
    for (int si = 0; si < scenario.num_stations(); ++si) {
        double budget;
        if (scenario.is_fap(si)) {
            if (scenario.config.scenario_kind != ScenarioKind::MsfHybrid) continue;
            budget = scenario.fap_residual_budget(si);
        } else {
            budget = scenario.stations[si].power.max_tx_w;
        }
        next.lambda[si] = std::max(0.0, multipliers.lambda[si] - step * (budget - usage[si]));
    }

    const double r0_scaled = scenario.config.rate_threshold_bps / opts.rate_unit_bps;
    for (int u = 0; u < scenario.config.num_outdoor_users; ++u) {
        const double achieved = u < static_cast<int>(inner.user_rate_scaled.size())
                                    ? inner.user_rate_scaled[u]
                                    : 0.0;
        next.mu[u] = std::max(0.0, multipliers.mu[u] + step * (r0_scaled - achieved));
    }

    next.iteration = tau;
    return next;
}

bool recover_primal(const Scenario& scenario, const ChannelMatrix& channel,
                    const AllocationState& inner_alloc, AllocationState& out) {
    const int num_cells = scenario.config.num_small_cells;
    const int num_users = scenario.config.num_outdoor_users;
    out = AllocationState{};
    out.kind = scenario.config.scenario_kind;
    out.small_cell_on.assign(num_cells, 0);

    std::vector<double> usage(scenario.num_stations(), 0.0);
    std::vector<char> matched(num_users, 0);
    std::set<std::pair<int, int>> used_slots;
    for (const auto& e : inner_alloc.entries) {
        const LinkBudget link = make_link(scenario, channel, e.user, e.station, e.carrier);
        if (link.gain <= 0.0) return false;
        const double p = required_power(scenario.config.rate_threshold_bps, link);
        usage[e.station] += p;
        out.entries.push_back(Assignment{e.user, e.station, e.carrier, p});
        matched[e.user] = 1;
        used_slots.insert({e.station, e.carrier});
    }

    // Users the inner minimization left out are completed with a minimum
    // required-power matching over the remaining slots of every station.
    std::vector<int> leftovers;
    for (int u = 0; u < num_users; ++u)
        if (!matched[u]) leftovers.push_back(u);
    if (!leftovers.empty()) {
        std::vector<std::uint8_t> all_on(num_cells, 1);
        std::vector<Slot> slots;
        for (const Slot& slot : enumerate_slots(scenario, all_on))
            if (!used_slots.count({slot.station, slot.carrier})) slots.push_back(slot);
        if (slots.size() < leftovers.size()) return false;
        CostMatrix costs(static_cast<int>(leftovers.size()), static_cast<int>(slots.size()));
        for (std::size_t r = 0; r < leftovers.size(); ++r)
            for (std::size_t j = 0; j < slots.size(); ++j) {
                const LinkBudget link = make_link(scenario, channel, leftovers[r],
                                                  slots[j].station, slots[j].carrier);
                costs.at(static_cast<int>(r), static_cast<int>(j)) =
                    required_power(scenario.config.rate_threshold_bps, link);
            }
        const AssignmentResult res = solve_assignment(costs);
        if (!res.complete) return false;
        for (std::size_t r = 0; r < leftovers.size(); ++r) {
            const Slot& slot = slots[res.col_of_row[r]];
            const double p = costs.at(static_cast<int>(r), res.col_of_row[r]);
            usage[slot.station] += p;
            out.entries.push_back(Assignment{leftovers[r], slot.station, slot.carrier, p});
        }
    }

    for (const auto& e : out.entries)
        if (scenario.is_small_cell(e.station))
            out.small_cell_on[scenario.stations[e.station].cell_index] = 1;
    for (int si = 0; si < scenario.num_stations(); ++si) {
        const double cap = scenario.is_fap(si) ? scenario.fap_residual_budget(si)
                                               : scenario.stations[si].power.max_tx_w;
        if (usage[si] > cap * (1.0 + 1e-9)) return false;
    }
    return true;
}

SolveReport solve_dual(const Scenario& scenario, const ChannelMatrix& channel,
                       const DualOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    SolveReport report;
    report.allocation.kind = scenario.config.scenario_kind;

    int max_iter = opts.max_iterations;
    if (opts.accuracy_eps > 0.0) {
        const double cap = 1.0 / (opts.accuracy_eps * opts.accuracy_eps);
        max_iter = std::min<int>(max_iter, static_cast<int>(std::ceil(cap)));
    }

    Multipliers mult = initial_multipliers(scenario);
    double best_dual = -std::numeric_limits<double>::infinity();
    double best_primal = std::numeric_limits<double>::infinity();
    AllocationState best_alloc;
    bool feasible = false;
    bool all_inner_exact = true;
    double best_at_window_start = -std::numeric_limits<double>::infinity();

    int iter = 0;
    for (iter = 1; iter <= max_iter; ++iter) {
        InnerSolution inner = inner_minimize(scenario, channel, mult, opts);
        report.operations += inner.operations;
        all_inner_exact = all_inner_exact && inner.exact_onoff;
        best_dual = std::max(best_dual, inner.dual_value_w);
        report.dual_trace.push_back(best_dual);

        AllocationState recovered;
        if (recover_primal(scenario, channel, inner.alloc, recovered)) {
            const double objective = network_power(recovered, scenario, true);
            if (objective < best_primal) {
                best_primal = objective;
                best_alloc = recovered;
                feasible = true;
            }
        }

        if (iter % opts.improvement_window == 0) {
            if (std::isfinite(best_at_window_start) &&
                best_dual - best_at_window_start < opts.improvement_tol)
                break;
            best_at_window_start = best_dual;
        }

        mult = subgradient_step(mult, inner, scenario, opts);
    }

    report.iterations = std::min(iter, max_iter);
    report.best_dual_w = best_dual;
    report.feasible = feasible;
    if (feasible) {
        report.objective_w = best_primal;
        report.reported_objective_w = network_power(best_alloc, scenario, false);
        report.allocation = best_alloc;
        report.served_users = scenario.config.num_outdoor_users;
        report.user_rate_bps.assign(scenario.config.num_outdoor_users, 0.0);
        for (const auto& e : best_alloc.entries) {
            const LinkBudget link = make_link(scenario, channel, e.user, e.station, e.carrier);
            report.user_rate_bps[e.user] += rate_bps(e.power_w, link);
        }
        // Weak duality holds whenever the inner solves were exact; flag it
        // so property tests can assert.
        if (all_inner_exact)
            report.weak_duality_ok = best_dual <= best_primal + 1e-6 * std::max(1.0, best_primal);
    } else {
        report.objective_w = std::numeric_limits<double>::infinity();
        report.reported_objective_w = std::numeric_limits<double>::infinity();
        report.served_users = 0;
        report.note = "no primal-feasible allocation recovered";
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace hetnet
