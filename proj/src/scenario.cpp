#include "hetnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hetnet/assignment.hpp"
#include "hetnet/radio.hpp"
#include "hetnet/rng.hpp"

namespace hetnet {

namespace {

constexpr std::uint64_t kFapSalt = 0xFA9;
constexpr std::uint64_t kUserSalt = 0x05E2;
constexpr std::uint64_t kRenewableSalt = 0x4E4;

Position disk_point(Rng& rng, const Position& center, double radius, double r_min = 0.0) {
    const double u = rng.uniform();
    const double r = std::sqrt(u * (radius * radius - r_min * r_min) + r_min * r_min);
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

} // namespace

std::string to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::MS: return "ms";
    case ScenarioKind::MsfClosed: return "msf-closed";
    case ScenarioKind::MsfHybrid: return "msf-hybrid";
    }
    return "ms";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "ms") return ScenarioKind::MS;
    if (s == "msf-closed" || s == "msf_closed") return ScenarioKind::MsfClosed;
    if (s == "msf-hybrid" || s == "msf_hybrid") return ScenarioKind::MsfHybrid;
    throw std::invalid_argument("unknown scenario kind: " + s);
}

bool Scenario::fap_carrier_occupied(int fap_station, int carrier) const {
    const int ord = fap_ordinal(fap_station);
    for (const auto& use : fap_load[ord])
        if (use.carrier == carrier) return true;
    return false;
}

double Scenario::fap_committed_power(int fap_station) const {
    const int ord = fap_ordinal(fap_station);
    double sum = 0.0;
    for (const auto& use : fap_load[ord]) sum += use.power_w;
    return sum;
}

double Scenario::fap_residual_budget(int fap_station) const {
    const double residual =
        stations[fap_station].power.max_tx_w - fap_committed_power(fap_station);
    return std::max(0.0, residual);
}

std::vector<int> Scenario::fap_free_carriers(int fap_station) const {
    std::vector<int> free;
    for (int c : stations[fap_station].carriers)
        if (!fap_carrier_occupied(fap_station, c)) free.push_back(c);
    return free;
}

void validate_config(const NetworkConfig& config) {
    if (config.macro_carriers + config.smallcell_carriers != config.total_carriers)
        throw std::invalid_argument("macro_carriers + smallcell_carriers must equal total_carriers");
    if (config.num_small_cells < 1 || config.num_outdoor_users < 1 ||
        config.macro_carriers < 1 || config.smallcell_carriers < 1)
        throw std::invalid_argument("L_s, U, N_C_M, N_C_S must all be >= 1");
    if (config.indoor_users_per_fap < 0 || config.num_faps_per_cell < 0)
        throw std::invalid_argument("V and L_f must be >= 0");
    if (config.rate_threshold_bps <= 0.0)
        throw std::invalid_argument("rate threshold must be positive");
    if (config.noise_power_w <= 0.0)
        throw std::invalid_argument("noise power must be positive");
    if (config.neighbor_interference_w < 0.0)
        throw std::invalid_argument("neighbor interference must be nonnegative");
    if (config.total_bandwidth_hz <= 0.0)
        throw std::invalid_argument("bandwidth must be positive");
    if (config.cell_radius_m <= 0.0)
        throw std::invalid_argument("cell radius must be positive");
}

Scenario generate(const NetworkConfig& config, const GeometrySpec& geometry,
                  const PowerTable& power) {
    validate_config(config);
    if (geometry.small_cell_radius_m <= 0.0 || geometry.ring_fraction <= 0.0 ||
        geometry.fap_indoor_depth_m <= 0.0)
        throw std::invalid_argument("geometry cannot place all entities");

    Scenario s;
    s.config = config;
    s.geometry = geometry;

    Station macro;
    macro.kind = StationKind::Macro;
    macro.position = {0.0, 0.0};
    macro.carriers.resize(config.macro_carriers);
    for (int c = 0; c < config.macro_carriers; ++c) macro.carriers[c] = c;
    macro.power = power.macro;
    s.stations.push_back(macro);

    // Small-cell tier block, split into two sub-blocks whose precedence
    // alternates around the ring (reuse-2 bookkeeping; the carrier sets
    // themselves stay equal, which is what the interference model needs).
    const int base = config.macro_carriers;
    const int ncs = config.smallcell_carriers;
    const int half = (ncs + 1) / 2;
    const double ring_radius = geometry.ring_fraction * config.cell_radius_m;
    for (int i = 0; i < config.num_small_cells; ++i) {
        Station cell;
        cell.kind = StationKind::SmallCell;
        cell.cell_index = i;
        const double angle = 2.0 * M_PI * i / config.num_small_cells;
        cell.position = {ring_radius * std::cos(angle), ring_radius * std::sin(angle)};
        if (i % 2 == 0) {
            for (int c = 0; c < ncs; ++c) cell.carriers.push_back(base + c);
        } else {
            for (int c = half; c < ncs; ++c) cell.carriers.push_back(base + c);
            for (int c = 0; c < half; ++c) cell.carriers.push_back(base + c);
        }
        cell.power = power.small;
        s.stations.push_back(cell);
    }

    Rng fap_rng(mix_seed(config.rng_seed, kFapSalt));
    const double scatter = geometry.fap_scatter_fraction * geometry.small_cell_radius_m;
    for (int i = 0; i < config.num_small_cells; ++i) {
        const Position cell_pos = s.stations[s.small_cell_index(i)].position;
        for (int l = 0; l < config.num_faps_per_cell; ++l) {
            Station fap;
            fap.kind = StationKind::Fap;
            fap.cell_index = i;
            fap.fap_index = l;
            fap.position = disk_point(fap_rng, cell_pos, scatter,
                                      geometry.min_link_distance_m);
            fap.indoor_depth_m = geometry.fap_indoor_depth_m;
            fap.carriers = s.stations[s.small_cell_index(i)].carriers;
            fap.power = power.fap;
            s.stations.push_back(fap);
        }
    }

    Rng user_rng(mix_seed(config.rng_seed, kUserSalt));
    int user_id = 0;
    for (int u = 0; u < config.num_outdoor_users; ++u) {
        Position pos;
        bool placed = false;
        for (int attempt = 0; attempt < 256 && !placed; ++attempt) {
            pos = disk_point(user_rng, {0.0, 0.0}, config.cell_radius_m);
            placed = true;
            for (const auto& st : s.stations)
                if (distance(pos, st.position) < geometry.min_link_distance_m) {
                    placed = false;
                    break;
                }
        }
        if (!placed)
            throw std::invalid_argument("geometry cannot place outdoor users clear of stations");
        s.users.push_back(User{user_id++, pos, false, -1});
    }
    for (int i = 0; i < config.num_small_cells; ++i) {
        for (int l = 0; l < config.num_faps_per_cell; ++l) {
            const int fs = s.fap_station_index(i, l);
            for (int v = 0; v < config.indoor_users_per_fap; ++v) {
                const Position pos = disk_point(user_rng, s.stations[fs].position,
                                                geometry.fap_indoor_depth_m, 0.5);
                s.users.push_back(User{user_id++, pos, true, fs});
            }
        }
    }

    Rng ren_rng(mix_seed(config.rng_seed, kRenewableSalt));
    s.renewable_j.resize(config.num_small_cells);
    for (int i = 0; i < config.num_small_cells; ++i)
        s.renewable_j[i] =
            std::max(0.0, ren_rng.normal(geometry.renewable_mean_j, geometry.renewable_std_j));

    s.fap_load.assign(s.num_faps(), {});
    s.fap_load_assigned = false;
    validate_scenario(s);
    return s;
}

namespace {

/// Minimum-power carrier choice for one FAP's registered users: the same
/// problem shape as the network one restricted to a single always-on
/// station, where the Hungarian matching on rate-meeting powers is exact.
void per_fap_solve(Scenario& s, int fap_station, const ChannelMatrix& channel) {
    const Station& fap = s.stations[fap_station];
    std::vector<int> indoor;
    for (const auto& user : s.users)
        if (user.indoor && user.serving_fap == fap_station) indoor.push_back(user.id);
    if (indoor.empty()) return;

    const int cols = static_cast<int>(fap.carriers.size());
    CostMatrix costs(static_cast<int>(indoor.size()), cols);
    for (int r = 0; r < costs.rows(); ++r) {
        for (int c = 0; c < cols; ++c) {
            const LinkBudget link{channel.gain(indoor[r], fap_station, fap.carriers[c]),
                                  s.config.neighbor_interference_w, s.config.noise_power_w,
                                  s.config.carrier_bandwidth_hz()};
            costs.at(r, c) = required_power(s.config.rate_threshold_bps, link);
        }
    }
    const AssignmentResult res = solve_assignment(costs);
    if (!res.complete || res.total_cost > fap.power.max_tx_w)
        throw InfeasibleError("per-FAP solve exceeds the FAP power budget");
    auto& load = s.fap_load[s.fap_ordinal(fap_station)];
    for (int r = 0; r < costs.rows(); ++r) {
        const int carrier = fap.carriers[res.col_of_row[r]];
        load.push_back(FapCarrierUse{carrier, costs.at(r, res.col_of_row[r]), indoor[r]});
    }
}

} // namespace

void assign_fap_load(Scenario& scenario, FapLoadPolicy policy) {
    if (policy == FapLoadPolicy::PerFapSolve) {
        const ChannelMatrix channel = build_channel(scenario, ChannelParams{});
        assign_fap_load(scenario, policy, channel);
        return;
    }
    assign_fap_load(scenario, policy, ChannelMatrix{});
}

void assign_fap_load(Scenario& scenario, FapLoadPolicy policy, const ChannelMatrix& channel) {
    const auto& config = scenario.config;
    if (config.indoor_users_per_fap > config.smallcell_carriers)
        throw InfeasibleError("more registered users than FAP carriers");

    for (auto& load : scenario.fap_load) load.clear();
    for (int i = 0; i < config.num_small_cells; ++i) {
        for (int l = 0; l < config.num_faps_per_cell; ++l) {
            const int fs = scenario.fap_station_index(i, l);
            if (policy == FapLoadPolicy::UniformPower) {
                const Station& fap = scenario.stations[fs];
                const double p = fap.power.max_tx_w / config.smallcell_carriers;
                auto& load = scenario.fap_load[scenario.fap_ordinal(fs)];
                int placed = 0;
                for (const auto& user : scenario.users) {
                    if (!user.indoor || user.serving_fap != fs) continue;
                    load.push_back(FapCarrierUse{fap.carriers[placed], p, user.id});
                    ++placed;
                }
            } else {
                per_fap_solve(scenario, fs, channel);
            }
        }
    }
    scenario.fap_load_assigned = true;
    validate_scenario(scenario);
}

void validate_scenario(const Scenario& s) {
    const auto& config = s.config;
    int macros = 0, cells = 0, faps = 0, outdoor = 0, indoor = 0;
    for (const auto& st : s.stations) {
        switch (st.kind) {
        case StationKind::Macro: ++macros; break;
        case StationKind::SmallCell: ++cells; break;
        case StationKind::Fap: ++faps; break;
        }
    }
    for (const auto& user : s.users) {
        if (user.indoor) {
            ++indoor;
            if (user.serving_fap < 0 || !s.is_fap(user.serving_fap))
                throw std::invalid_argument("indoor user not registered to a FAP");
        } else {
            ++outdoor;
            if (user.serving_fap != -1)
                throw std::invalid_argument("outdoor user registered to a FAP");
        }
    }
    if (macros != 1) throw std::invalid_argument("exactly one macro required");
    if (cells != config.num_small_cells) throw std::invalid_argument("small cell count mismatch");
    if (faps != config.num_small_cells * config.num_faps_per_cell)
        throw std::invalid_argument("FAP count mismatch");
    if (outdoor != config.num_outdoor_users) throw std::invalid_argument("outdoor user count mismatch");
    if (indoor != faps * config.indoor_users_per_fap)
        throw std::invalid_argument("indoor user count mismatch");

    const auto& macro_carriers = s.stations[0].carriers;
    const std::set<int> macro_set(macro_carriers.begin(), macro_carriers.end());
    for (const auto& st : s.stations) {
        if (st.kind == StationKind::SmallCell) {
            if (static_cast<int>(st.carriers.size()) != config.smallcell_carriers)
                throw std::invalid_argument("small cell carrier count mismatch");
            for (int c : st.carriers)
                if (macro_set.count(c))
                    throw std::invalid_argument("macro and small-cell carriers overlap");
        }
        if (st.kind == StationKind::Fap) {
            const auto& parent = s.stations[s.small_cell_index(st.cell_index)];
            std::set<int> a(st.carriers.begin(), st.carriers.end());
            std::set<int> b(parent.carriers.begin(), parent.carriers.end());
            if (a != b)
                throw std::invalid_argument("FAP carrier set differs from its parent cell");
        }
    }

    for (double q : s.renewable_j)
        if (q < 0.0) throw std::invalid_argument("renewable energy must be nonnegative");

    // Carrier exclusivity: one user per (FAP, carrier).
    for (const auto& load : s.fap_load) {
        std::set<int> seen;
        double total = 0.0;
        for (const auto& use : load) {
            if (!seen.insert(use.carrier).second)
                throw std::invalid_argument("FAP carrier allocated twice");
            total += use.power_w;
        }
        (void)total;
    }
}

namespace {

using nlohmann::json;

json position_to_json(const Position& p) { return json{{"x", p.x}, {"y", p.y}}; }
Position position_from_json(const json& j) { return {j.at("x"), j.at("y")}; }

json power_to_json(const PowerParams& p) {
    return json{{"slope", p.slope},
                {"offset_w", p.offset_w},
                {"sleep_w", p.sleep_w},
                {"max_tx_w", p.max_tx_w}};
}

PowerParams power_from_json(const json& j) {
    return {j.at("slope"), j.at("offset_w"), j.at("sleep_w"), j.at("max_tx_w")};
}

json config_to_json(const NetworkConfig& c) {
    return json{{"cell_radius_m", c.cell_radius_m},
                {"num_small_cells", c.num_small_cells},
                {"num_faps_per_cell", c.num_faps_per_cell},
                {"num_outdoor_users", c.num_outdoor_users},
                {"indoor_users_per_fap", c.indoor_users_per_fap},
                {"total_bandwidth_hz", c.total_bandwidth_hz},
                {"total_carriers", c.total_carriers},
                {"macro_carriers", c.macro_carriers},
                {"smallcell_carriers", c.smallcell_carriers},
                {"rate_threshold_bps", c.rate_threshold_bps},
                {"noise_power_w", c.noise_power_w},
                {"neighbor_interference_w", c.neighbor_interference_w},
                {"scenario_kind", to_string(c.scenario_kind)},
                {"rng_seed", c.rng_seed}};
}

NetworkConfig config_from_json_obj(const json& j) {
    NetworkConfig c;
    c.cell_radius_m = j.at("cell_radius_m");
    c.num_small_cells = j.at("num_small_cells");
    c.num_faps_per_cell = j.at("num_faps_per_cell");
    c.num_outdoor_users = j.at("num_outdoor_users");
    c.indoor_users_per_fap = j.at("indoor_users_per_fap");
    c.total_bandwidth_hz = j.at("total_bandwidth_hz");
    c.total_carriers = j.at("total_carriers");
    c.macro_carriers = j.at("macro_carriers");
    c.smallcell_carriers = j.at("smallcell_carriers");
    c.rate_threshold_bps = j.at("rate_threshold_bps");
    c.noise_power_w = j.at("noise_power_w");
    c.neighbor_interference_w = j.at("neighbor_interference_w");
    c.scenario_kind = scenario_kind_from_string(j.at("scenario_kind"));
    c.rng_seed = j.at("rng_seed");
    return c;
}

json geometry_to_json(const GeometrySpec& g) {
    return json{{"small_cell_radius_m", g.small_cell_radius_m},
                {"ring_fraction", g.ring_fraction},
                {"fap_scatter_fraction", g.fap_scatter_fraction},
                {"fap_indoor_depth_m", g.fap_indoor_depth_m},
                {"min_link_distance_m", g.min_link_distance_m},
                {"renewable_mean_j", g.renewable_mean_j},
                {"renewable_std_j", g.renewable_std_j}};
}

GeometrySpec geometry_from_json_obj(const json& j) {
    GeometrySpec g;
    g.small_cell_radius_m = j.at("small_cell_radius_m");
    g.ring_fraction = j.at("ring_fraction");
    g.fap_scatter_fraction = j.at("fap_scatter_fraction");
    g.fap_indoor_depth_m = j.at("fap_indoor_depth_m");
    g.min_link_distance_m = j.at("min_link_distance_m");
    g.renewable_mean_j = j.at("renewable_mean_j");
    g.renewable_std_j = j.at("renewable_std_j");
    return g;
}

} // namespace

std::string scenario_to_text(const Scenario& s) {
    json j;
    j["config"] = config_to_json(s.config);
    j["geometry"] = geometry_to_json(s.geometry);
    json stations = json::array();
    for (const auto& st : s.stations) {
        json e;
        e["kind"] = st.kind == StationKind::Macro ? "macro"
                   : st.kind == StationKind::SmallCell ? "small" : "fap";
        e["cell_index"] = st.cell_index;
        e["fap_index"] = st.fap_index;
        e["position"] = position_to_json(st.position);
        e["indoor_depth_m"] = st.indoor_depth_m;
        e["carriers"] = st.carriers;
        e["power"] = power_to_json(st.power);
        stations.push_back(e);
    }
    j["stations"] = stations;
    json users = json::array();
    for (const auto& user : s.users)
        users.push_back(json{{"id", user.id},
                             {"position", position_to_json(user.position)},
                             {"indoor", user.indoor},
                             {"serving_fap", user.serving_fap}});
    j["users"] = users;
    j["renewable_j"] = s.renewable_j;
    json load = json::array();
    for (const auto& fl : s.fap_load) {
        json entries = json::array();
        for (const auto& use : fl)
            entries.push_back(json{{"carrier", use.carrier},
                                   {"power_w", use.power_w},
                                   {"user", use.user}});
        load.push_back(entries);
    }
    j["fap_load"] = load;
    j["fap_load_assigned"] = s.fap_load_assigned;
    return j.dump(2);
}

Scenario scenario_from_text(const std::string& text) {
    const json j = json::parse(text);
    Scenario s;
    s.config = config_from_json_obj(j.at("config"));
    s.geometry = geometry_from_json_obj(j.at("geometry"));
    for (const auto& e : j.at("stations")) {
        Station st;
        const std::string kind = e.at("kind");
        st.kind = kind == "macro" ? StationKind::Macro
                 : kind == "small" ? StationKind::SmallCell : StationKind::Fap;
        st.cell_index = e.at("cell_index");
        st.fap_index = e.at("fap_index");
        st.position = position_from_json(e.at("position"));
        st.indoor_depth_m = e.at("indoor_depth_m");
        st.carriers = e.at("carriers").get<std::vector<int>>();
        st.power = power_from_json(e.at("power"));
        s.stations.push_back(st);
    }
    for (const auto& e : j.at("users"))
        s.users.push_back(User{e.at("id"), position_from_json(e.at("position")),
                               e.at("indoor"), e.at("serving_fap")});
    s.renewable_j = j.at("renewable_j").get<std::vector<double>>();
    for (const auto& fl : j.at("fap_load")) {
        std::vector<FapCarrierUse> entries;
        for (const auto& use : fl)
            entries.push_back(FapCarrierUse{use.at("carrier"), use.at("power_w"), use.at("user")});
        s.fap_load.push_back(entries);
    }
    s.fap_load_assigned = j.at("fap_load_assigned");
    validate_scenario(s);
    return s;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << scenario_to_text(scenario);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_text(buf.str());
}

} // namespace hetnet
