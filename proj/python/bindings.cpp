#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hetnet/assignment.hpp"
#include "hetnet/channel.hpp"
#include "hetnet/cooperation.hpp"
#include "hetnet/experiments.hpp"
#include "hetnet/iterative_solver.hpp"
#include "hetnet/oracle.hpp"
#include "hetnet/radio.hpp"
#include "hetnet/rng.hpp"

namespace py = pybind11;
using namespace hetnet;

namespace {

py::dict report_to_dict(const SolveReport& report) {
    py::dict d;
    d["feasible"] = report.feasible;
    d["objective_w"] = report.objective_w;
    d["reported_objective_w"] = report.reported_objective_w;
    d["served_users"] = report.served_users;
    d["iterations"] = report.iterations;
    d["operations"] = report.operations;
    d["wall_seconds"] = report.wall_seconds;
    d["user_rate_bps"] = report.user_rate_bps;
    std::vector<int> active;
    for (auto on : report.allocation.small_cell_on) active.push_back(on ? 1 : 0);
    d["small_cell_on"] = active;
    py::list entries;
    for (const auto& e : report.allocation.entries) {
        py::dict entry;
        entry["user"] = e.user;
        entry["station"] = e.station;
        entry["carrier"] = e.carrier;
        entry["power_w"] = e.power_w;
        entries.append(entry);
    }
    d["assignments"] = entries;
    return d;
}

SolveReport solve_from_config(const std::string& config_text, const std::string& kind,
                              std::uint64_t seed, const std::string& solver) {
    SimConfig config = config_text.empty() ? default_config() : config_from_text(config_text);
    const TrialContext ctx = make_trial(config, scenario_kind_from_string(kind), seed);
    return run_solver(config, ctx.scenario, ctx.channel,
                      solver_choice_from_string(solver), true);
}

} // namespace

PYBIND11_MODULE(_hetnet, m) {
    m.doc() = "Green HetNet carrier/power allocation and small-cell switch-off";

    m.def("pathloss_indoor_indoor_db", &pathloss_indoor_indoor_db, py::arg("d_m"));
    m.def("pathloss_outdoor_indoor_db", &pathloss_outdoor_indoor_db, py::arg("d_out_m"),
          py::arg("d_in_m"), py::arg("l_ow_db"));
    m.def("pathloss_outdoor_outdoor_db", &pathloss_outdoor_outdoor_db, py::arg("d_km"),
          py::arg("kappa_db"), py::arg("nu"));

    m.def(
        "rate_bps",
        [](double p_w, double gain, double interference_w, double noise_w, double bandwidth_hz) {
            return rate_bps(p_w, LinkBudget{gain, interference_w, noise_w, bandwidth_hz});
        },
        py::arg("p_w"), py::arg("gain"), py::arg("interference_w"), py::arg("noise_w"),
        py::arg("bandwidth_hz"));
    m.def(
        "required_power_w",
        [](double rate_threshold_bps, double gain, double interference_w, double noise_w,
           double bandwidth_hz) {
            return required_power(rate_threshold_bps,
                                  LinkBudget{gain, interference_w, noise_w, bandwidth_hz});
        },
        py::arg("rate_threshold_bps"), py::arg("gain"), py::arg("interference_w"),
        py::arg("noise_w"), py::arg("bandwidth_hz"));

    m.def(
        "solve_assignment",
        [](const std::vector<std::vector<double>>& rows) {
            if (rows.empty()) return py::make_tuple(std::vector<int>{}, 0.0, true);
            CostMatrix costs(static_cast<int>(rows.size()),
                             static_cast<int>(rows.front().size()));
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (std::size_t c = 0; c < rows[r].size(); ++c)
                    costs.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
            const AssignmentResult res = solve_assignment(costs);
            return py::make_tuple(res.col_of_row, res.total_cost, res.complete);
        },
        py::arg("costs"),
        "Minimum-cost assignment; returns (col_of_row, total_cost, complete).");

    m.def("default_config_text", [] { return config_to_text(default_config()); });

    m.def(
        "solve",
        [](const std::string& config_text, const std::string& kind, std::uint64_t seed,
           const std::string& solver) {
            return report_to_dict(solve_from_config(config_text, kind, seed, solver));
        },
        py::arg("config_text") = std::string(), py::arg("kind") = "ms", py::arg("seed") = 1,
        py::arg("solver") = "iterative",
        "Generate a seeded scenario and run one solver; returns a result dict.");

    m.def(
        "tiny_oracle_comparison",
        [](std::uint64_t seed, const std::string& kind) {
            const TinyInstance inst =
                make_tiny_instance(seed, scenario_kind_from_string(kind));
            py::dict d;
            d["oracle"] = report_to_dict(exhaustive_optimum(inst));
            d["dual"] = report_to_dict(solve_dual(inst.scenario, inst.channel));
            d["iterative"] = report_to_dict(solve_iterative(inst.scenario, inst.channel));
            return d;
        },
        py::arg("seed"), py::arg("kind") = "ms");

    m.def(
        "solve_pricing",
        [](const std::vector<py::dict>& cell_dicts, double fixed_revenue_mu,
           double fossil_price_mu) {
            CoopParams params;
            params.fixed_revenue_mu = fixed_revenue_mu;
            params.fossil_price_mu = fossil_price_mu;
            std::vector<CoopCellInputs> cells;
            for (const auto& cd : cell_dicts) {
                CoopCellInputs cell;
                cell.excess_renewable_j = cd["excess_renewable_j"].cast<double>();
                cell.offloaded_carriers = cd["offloaded_carriers"].cast<int>();
                cell.fap_energy_closed_j = cd["fap_energy_closed_j"].cast<double>();
                cell.fap_energy_coop_j = cd["fap_energy_coop_j"].cast<double>();
                cells.push_back(cell);
            }
            const CoopAgreement agreement = solve_pricing(cells, params);
            py::dict d;
            d["p_r"] = agreement.p_r;
            d["c_re"] = agreement.c_re;
            d["payout_mu"] = agreement.payout_mu;
            d["profit_uncoop_mu"] = agreement.profit_uncoop_mu;
            d["profit_coop_mu"] = agreement.profit_coop_mu;
            d["feasible"] = agreement.feasible;
            return d;
        },
        py::arg("cells"), py::arg("fixed_revenue_mu") = 10.0,
        py::arg("fossil_price_mu") = 0.5);

    m.attr("__version__") = "0.1.0";
}
