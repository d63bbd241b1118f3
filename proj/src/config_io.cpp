#include "hetnet/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hetnet {

using nlohmann::json;

SimConfig default_config() { return SimConfig{}; }

namespace {

json power_params_json(const PowerParams& p) {
    return json{{"slope", p.slope},
                {"offset_w", p.offset_w},
                {"sleep_w", p.sleep_w},
                {"max_tx_w", p.max_tx_w}};
}

PowerParams power_params_from(const json& j, const PowerParams& fallback) {
    PowerParams p = fallback;
    p.slope = j.value("slope", p.slope);
    p.offset_w = j.value("offset_w", p.offset_w);
    p.sleep_w = j.value("sleep_w", p.sleep_w);
    p.max_tx_w = j.value("max_tx_w", p.max_tx_w);
    return p;
}

} // namespace

std::string config_to_text(const SimConfig& c) {
    json j;
    j["network"] = {{"cell_radius_m", c.network.cell_radius_m},
                    {"num_small_cells", c.network.num_small_cells},
                    {"num_faps_per_cell", c.network.num_faps_per_cell},
                    {"num_outdoor_users", c.network.num_outdoor_users},
                    {"indoor_users_per_fap", c.network.indoor_users_per_fap},
                    {"total_bandwidth_hz", c.network.total_bandwidth_hz},
                    {"total_carriers", c.network.total_carriers},
                    {"macro_carriers", c.network.macro_carriers},
                    {"smallcell_carriers", c.network.smallcell_carriers},
                    {"rate_threshold_bps", c.network.rate_threshold_bps},
                    {"noise_power_w", c.network.noise_power_w},
                    {"neighbor_interference_w", c.network.neighbor_interference_w},
                    {"scenario_kind", to_string(c.network.scenario_kind)},
                    {"rng_seed", c.network.rng_seed}};
    j["geometry"] = {{"small_cell_radius_m", c.geometry.small_cell_radius_m},
                     {"ring_fraction", c.geometry.ring_fraction},
                     {"fap_scatter_fraction", c.geometry.fap_scatter_fraction},
                     {"fap_indoor_depth_m", c.geometry.fap_indoor_depth_m},
                     {"min_link_distance_m", c.geometry.min_link_distance_m},
                     {"renewable_mean_j", c.geometry.renewable_mean_j},
                     {"renewable_std_j", c.geometry.renewable_std_j}};
    j["channel"] = {{"pathloss_constant_db", c.channel.pathloss_constant_db},
                    {"pathloss_exponent", c.channel.pathloss_exponent},
                    {"penetration_loss_db", c.channel.penetration_loss_db},
                    {"shadow_sigma_db", c.channel.shadow_sigma_db},
                    {"fading", c.channel.fading == Fading::Rayleigh ? "rayleigh" : "none"}};
    j["power"] = {{"macro", power_params_json(c.power.macro)},
                  {"small", power_params_json(c.power.small)},
                  {"fap", power_params_json(c.power.fap)}};
    j["solver"] = {{"max_iterations", c.dual.max_iterations},
                   {"accuracy_eps", c.dual.accuracy_eps},
                   {"step_constant", c.dual.step_constant},
                   {"improvement_tol", c.dual.improvement_tol},
                   {"improvement_window", c.dual.improvement_window},
                   {"rate_unit_bps", c.dual.rate_unit_bps},
                   {"exhaustive_onoff_limit", c.dual.exhaustive_onoff_limit}};
    j["cooperation"] = {{"fixed_revenue_mu", c.coop.fixed_revenue_mu},
                        {"fossil_price_mu", c.coop.fossil_price_mu},
                        {"delta_t_s", c.coop.delta_t_s},
                        {"fap_load_policy",
                         c.fap_load_policy == FapLoadPolicy::UniformPower ? "uniform"
                                                                          : "per-fap-solve"}};
    return j.dump(2);
}

SimConfig config_from_text(const std::string& text) {
    const json j = json::parse(text);
    SimConfig c = default_config();
    if (j.contains("network")) {
        const auto& n = j.at("network");
        c.network.cell_radius_m = n.value("cell_radius_m", c.network.cell_radius_m);
        c.network.num_small_cells = n.value("num_small_cells", c.network.num_small_cells);
        c.network.num_faps_per_cell = n.value("num_faps_per_cell", c.network.num_faps_per_cell);
        c.network.num_outdoor_users = n.value("num_outdoor_users", c.network.num_outdoor_users);
        c.network.indoor_users_per_fap =
            n.value("indoor_users_per_fap", c.network.indoor_users_per_fap);
        c.network.total_bandwidth_hz = n.value("total_bandwidth_hz", c.network.total_bandwidth_hz);
        c.network.total_carriers = n.value("total_carriers", c.network.total_carriers);
        c.network.macro_carriers = n.value("macro_carriers", c.network.macro_carriers);
        c.network.smallcell_carriers =
            n.value("smallcell_carriers", c.network.smallcell_carriers);
        c.network.rate_threshold_bps = n.value("rate_threshold_bps", c.network.rate_threshold_bps);
        c.network.noise_power_w = n.value("noise_power_w", c.network.noise_power_w);
        c.network.neighbor_interference_w =
            n.value("neighbor_interference_w", c.network.neighbor_interference_w);
        if (n.contains("scenario_kind"))
            c.network.scenario_kind = scenario_kind_from_string(n.at("scenario_kind"));
        c.network.rng_seed = n.value("rng_seed", c.network.rng_seed);
    }
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        c.geometry.small_cell_radius_m =
            g.value("small_cell_radius_m", c.geometry.small_cell_radius_m);
        c.geometry.ring_fraction = g.value("ring_fraction", c.geometry.ring_fraction);
        c.geometry.fap_scatter_fraction =
            g.value("fap_scatter_fraction", c.geometry.fap_scatter_fraction);
        c.geometry.fap_indoor_depth_m =
            g.value("fap_indoor_depth_m", c.geometry.fap_indoor_depth_m);
        c.geometry.min_link_distance_m =
            g.value("min_link_distance_m", c.geometry.min_link_distance_m);
        c.geometry.renewable_mean_j = g.value("renewable_mean_j", c.geometry.renewable_mean_j);
        c.geometry.renewable_std_j = g.value("renewable_std_j", c.geometry.renewable_std_j);
    }
    if (j.contains("channel")) {
        const auto& ch = j.at("channel");
        c.channel.pathloss_constant_db =
            ch.value("pathloss_constant_db", c.channel.pathloss_constant_db);
        c.channel.pathloss_exponent = ch.value("pathloss_exponent", c.channel.pathloss_exponent);
        c.channel.penetration_loss_db =
            ch.value("penetration_loss_db", c.channel.penetration_loss_db);
        c.channel.shadow_sigma_db = ch.value("shadow_sigma_db", c.channel.shadow_sigma_db);
        if (ch.contains("fading"))
            c.channel.fading =
                ch.at("fading") == "rayleigh" ? Fading::Rayleigh : Fading::None;
    }
    if (j.contains("power")) {
        const auto& p = j.at("power");
        if (p.contains("macro")) c.power.macro = power_params_from(p.at("macro"), c.power.macro);
        if (p.contains("small")) c.power.small = power_params_from(p.at("small"), c.power.small);
        if (p.contains("fap")) c.power.fap = power_params_from(p.at("fap"), c.power.fap);
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        c.dual.max_iterations = s.value("max_iterations", c.dual.max_iterations);
        c.dual.accuracy_eps = s.value("accuracy_eps", c.dual.accuracy_eps);
        c.dual.step_constant = s.value("step_constant", c.dual.step_constant);
        c.dual.improvement_tol = s.value("improvement_tol", c.dual.improvement_tol);
        c.dual.improvement_window = s.value("improvement_window", c.dual.improvement_window);
        c.dual.rate_unit_bps = s.value("rate_unit_bps", c.dual.rate_unit_bps);
        c.dual.exhaustive_onoff_limit =
            s.value("exhaustive_onoff_limit", c.dual.exhaustive_onoff_limit);
    }
    if (j.contains("cooperation")) {
        const auto& co = j.at("cooperation");
        c.coop.fixed_revenue_mu = co.value("fixed_revenue_mu", c.coop.fixed_revenue_mu);
        c.coop.fossil_price_mu = co.value("fossil_price_mu", c.coop.fossil_price_mu);
        c.coop.delta_t_s = co.value("delta_t_s", c.coop.delta_t_s);
        if (co.contains("fap_load_policy"))
            c.fap_load_policy = co.at("fap_load_policy") == "uniform"
                                    ? FapLoadPolicy::UniformPower
                                    : FapLoadPolicy::PerFapSolve;
    }
    return c;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_text(buf.str());
}

void save_config(const SimConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config " + path);
    out << config_to_text(config);
}

} // namespace hetnet
