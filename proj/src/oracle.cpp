#include "hetnet/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "hetnet/powermodel.hpp"
#include "hetnet/rng.hpp"
#include "hetnet/scenario.hpp"

namespace hetnet {

TinyInstance make_tiny_instance(std::uint64_t seed, ScenarioKind kind) {
    Rng rng(mix_seed(seed, 0x71AE));
    NetworkConfig config;
    config.scenario_kind = kind;
    config.rng_seed = mix_seed(seed, 0x5EED);
    config.num_outdoor_users = 2 + static_cast<int>(rng.next_u64() % 3); // 2..4
    config.num_small_cells = 1 + static_cast<int>(rng.next_u64() % 2);   // 1..2
    config.num_faps_per_cell = kind == ScenarioKind::MS ? 0 : 1;
    config.indoor_users_per_fap = kind == ScenarioKind::MS ? 0 : 1;
    config.smallcell_carriers = 2;
    config.macro_carriers = std::max(config.num_outdoor_users,
                                     2 + static_cast<int>(rng.next_u64() % 3)); // 2..4
    config.total_carriers = config.macro_carriers + config.smallcell_carriers;
    config.total_bandwidth_hz = 0.2e6 * config.total_carriers;
    config.rate_threshold_bps = 0.25e6;
    config.cell_radius_m = 400.0;

    GeometrySpec geometry;
    geometry.renewable_mean_j = 50.0;
    geometry.renewable_std_j = 15.0;

    TinyInstance instance;
    instance.scenario = generate(config, geometry);
    if (kind != ScenarioKind::MS)
        assign_fap_load(instance.scenario, FapLoadPolicy::UniformPower);

    // Frozen deterministic gains: shadowing only, no per-carrier fading, so
    // the instance is fully pinned by its seed.
    ChannelParams params;
    params.fading = Fading::None;
    instance.channel = build_channel(instance.scenario, params, mix_seed(seed, 0xC0DE));
    return instance;
}

namespace {

struct TinySlot {
    int station;
    int carrier;
};

struct SearchContext {
    const Scenario* scenario;
    const std::vector<TinySlot>* slots;
    const std::vector<std::vector<double>>* power; // [user][slot], +inf unusable
    std::vector<double> station_usage;
    std::vector<int> slot_user;
    double best_objective = std::numeric_limits<double>::infinity();
    std::vector<int> best_slot_of_user;
    std::vector<double> station_cap;
    std::vector<double> station_obj_slope;
};

void search(SearchContext& ctx, int user, double objective_so_far) {
    const int num_users = ctx.scenario->config.num_outdoor_users;
    if (user == num_users) {
        if (objective_so_far < ctx.best_objective) {
            ctx.best_objective = objective_so_far;
            ctx.best_slot_of_user.assign(num_users, -1);
            for (std::size_t k = 0; k < ctx.slots->size(); ++k)
                if (ctx.slot_user[k] >= 0) ctx.best_slot_of_user[ctx.slot_user[k]] = static_cast<int>(k);
        }
        return;
    }
    for (std::size_t k = 0; k < ctx.slots->size(); ++k) {
        if (ctx.slot_user[k] >= 0) continue;
        const double p = (*ctx.power)[user][k];
        if (!std::isfinite(p)) continue;
        const int st = (*ctx.slots)[k].station;
        if (ctx.station_usage[st] + p > ctx.station_cap[st] * (1.0 + 1e-12)) continue;
        const double added = ctx.station_obj_slope[st] * p;
        if (objective_so_far + added >= ctx.best_objective) continue;
        ctx.slot_user[k] = user;
        ctx.station_usage[st] += p;
        search(ctx, user + 1, objective_so_far + added);
        ctx.station_usage[st] -= p;
        ctx.slot_user[k] = -1;
    }
}

} // namespace

SolveReport exhaustive_optimum(const TinyInstance& instance) {
    const Scenario& s = instance.scenario;
    const int num_cells = s.config.num_small_cells;
    const int num_users = s.config.num_outdoor_users;
    SolveReport report;
    report.allocation.kind = s.config.scenario_kind;
    report.objective_w = std::numeric_limits<double>::infinity();

    for (unsigned mask = 0; mask < (1u << num_cells); ++mask) {
        std::vector<TinySlot> slots;
        for (int c : s.stations[s.macro_index()].carriers)
            slots.push_back(TinySlot{s.macro_index(), c});
        for (int i = 0; i < num_cells; ++i) {
            if (!(mask & (1u << i))) continue;
            const int si = s.small_cell_index(i);
            for (int c : s.stations[si].carriers) slots.push_back(TinySlot{si, c});
        }
        if (s.config.scenario_kind == ScenarioKind::MsfHybrid) {
            for (int si = 0; si < s.num_stations(); ++si) {
                if (!s.is_fap(si)) continue;
                if (s.fap_residual_budget(si) <= 0.0) continue;
                for (int c : s.fap_free_carriers(si)) slots.push_back(TinySlot{si, c});
            }
        }
        if (static_cast<int>(slots.size()) < num_users) continue;

        std::vector<std::vector<double>> power(num_users,
                                               std::vector<double>(slots.size()));
        for (int u = 0; u < num_users; ++u)
            for (std::size_t k = 0; k < slots.size(); ++k) {
                const LinkBudget link =
                    make_link(s, instance.channel, u, slots[k].station, slots[k].carrier);
                power[u][k] = link.gain > 0.0
                                  ? required_power(s.config.rate_threshold_bps, link)
                                  : std::numeric_limits<double>::infinity();
            }

        SearchContext ctx;
        ctx.scenario = &s;
        ctx.slots = &slots;
        ctx.power = &power;
        ctx.station_usage.assign(s.num_stations(), 0.0);
        ctx.slot_user.assign(slots.size(), -1);
        ctx.station_cap.resize(s.num_stations());
        ctx.station_obj_slope.resize(s.num_stations());
        for (int si = 0; si < s.num_stations(); ++si) {
            ctx.station_cap[si] =
                s.is_fap(si) ? s.fap_residual_budget(si) : s.stations[si].power.max_tx_w;
            ctx.station_obj_slope[si] = s.is_fap(si) ? 0.0 : s.stations[si].power.slope;
        }
        double fixed = s.stations[s.macro_index()].power.offset_w;
        for (int i = 0; i < num_cells; ++i) {
            const auto& p = s.stations[s.small_cell_index(i)].power;
            fixed += (mask & (1u << i)) ? p.offset_w : p.sleep_w;
        }
        ctx.best_objective = report.objective_w - fixed;
        search(ctx, 0, 0.0);

        if (ctx.best_objective + fixed < report.objective_w &&
            !ctx.best_slot_of_user.empty()) {
            report.objective_w = ctx.best_objective + fixed;
            report.feasible = true;
            AllocationState alloc;
            alloc.kind = s.config.scenario_kind;
            alloc.small_cell_on.assign(num_cells, 0);
            for (int i = 0; i < num_cells; ++i)
                alloc.small_cell_on[i] = (mask & (1u << i)) ? 1 : 0;
            for (int u = 0; u < num_users; ++u) {
                const int k = ctx.best_slot_of_user[u];
                alloc.entries.push_back(
                    Assignment{u, slots[k].station, slots[k].carrier, power[u][k]});
            }
            report.allocation = alloc;
        }
    }

    if (report.feasible) {
        report.served_users = num_users;
        report.reported_objective_w = network_power(report.allocation, s, false);
        report.user_rate_bps.assign(num_users, s.config.rate_threshold_bps);
    } else {
        report.note = "exhaustive search found no feasible candidate";
    }
    return report;
}

double grid_minimize_d(double a_station, double lambda_station, double mu_u,
                       const LinkBudget& link, double p_max, double resolution,
                       double rate_unit_bps) {
    if (resolution <= 0.0) throw std::invalid_argument("resolution must be positive");
    double best_p = 0.0;
    double best_d = std::numeric_limits<double>::infinity();
    const double denom = link.interference_w + link.noise_w;
    const double bw_scaled = link.bandwidth_hz / rate_unit_bps;
    for (double p = 0.0; p <= p_max + 0.5 * resolution; p += resolution) {
        const double rate = bw_scaled * std::log2(1.0 + p * link.gain / denom);
        const double d = (a_station + lambda_station) * p - mu_u * rate;
        if (d < best_d) {
            best_d = d;
            best_p = p;
        }
    }
    return best_p;
}

} // namespace hetnet
