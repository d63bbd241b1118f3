#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "hetnet/experiments.hpp"
#include "hetnet/iterative_solver.hpp"
#include "hetnet/oracle.hpp"
#include "hetnet/rng.hpp"

namespace {

hetnet::SimConfig load_or_default(const std::string& path) {
    if (path.empty()) return hetnet::default_config();
    return hetnet::load_config(path);
}

void print_criterion(const hetnet::CriterionResult& r) {
    std::printf("%s  [%d] %s (%.1fs)%s%s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.wall_seconds, r.details.empty() ? "" : " -- ", r.details.c_str());
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green HetNet resource management simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::uint64_t seed = 1;
    int trials = -1;
    std::string out_dir = "out";
    std::string solver = "both";
    std::string scenario = "";

    app.add_option("--config", config_path, "configuration file (JSON schema, see README)");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--trials", trials, "Monte-Carlo trials per sweep point");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--solver", solver, "dual | iterative | both");
    app.add_option("--scenario", scenario, "ms | msf-closed | msf-hybrid");

    std::string experiment_id;
    auto* run = app.add_subcommand("run", "run one experiment sweep");
    run->add_option("experiment", experiment_id, "experiment id")->required();

    bool quick = false;
    bool no_oracle = false;
    int only_criterion = 0;
    auto* accept = app.add_subcommand("accept", "run the acceptance suite");
    accept->add_flag("--quick", quick, "smaller trial counts (smoke run, not the gate)");
    accept->add_flag("--no-oracle", no_oracle, "pretend the oracle module is unavailable");
    accept->add_option("--criterion", only_criterion, "run a single criterion (1-8)");

    auto* oracle_check = app.add_subcommand("oracle-check", "tiny-instance oracle comparison");

    CLI11_PARSE(app, argc, argv);

    try {
        hetnet::SimConfig config = load_or_default(config_path);
        if (!scenario.empty())
            config.network.scenario_kind = hetnet::scenario_kind_from_string(scenario);

        if (run->parsed()) {
            hetnet::ExperimentSpec spec = hetnet::default_spec(experiment_id);
            spec.master_seed = seed;
            spec.out_dir = out_dir;
            if (trials > 0) spec.trials = trials;
            if (!scenario.empty())
                spec.kinds = {hetnet::scenario_kind_from_string(scenario)};
            if (app.count("--solver") > 0)
                spec.solver = hetnet::solver_choice_from_string(solver);
            const hetnet::ResultTable table = hetnet::run_experiment(spec, config);
            int errors = 0;
            for (const auto& row : table.rows) errors += row.error ? 1 : 0;
            std::printf("%s: %zu rows (%d errors) -> %s\n", spec.id.c_str(), table.rows.size(),
                        errors, spec.out_dir.c_str());
            for (const auto& s : table.stats)
                std::printf("  value %-10g %-11s %-9s mean %.3f W (std %.3f, n=%d)\n",
                            s.sweep_value, to_string(s.kind).c_str(), s.solver.c_str(),
                            s.mean_objective_w, s.std_objective_w, s.n);
            return 0;
        }

        if (accept->parsed()) {
            hetnet::AcceptanceOptions opts;
            opts.master_seed = seed;
            opts.out_dir = out_dir;
            opts.quick = quick;
            opts.disable_oracle = no_oracle;
            opts.only_criterion = only_criterion;
            opts.on_result = print_criterion;
            const auto results = hetnet::run_acceptance(opts);
            int failed = 0;
            for (const auto& r : results) failed += r.pass ? 0 : 1;
            std::printf("%zu criteria, %d failed\n", results.size(), failed);
            return 0;
        }

        if (oracle_check->parsed()) {
            const int n = trials > 0 ? trials : 10;
            const hetnet::ScenarioKind kinds[] = {hetnet::ScenarioKind::MS,
                                                  hetnet::ScenarioKind::MsfClosed,
                                                  hetnet::ScenarioKind::MsfHybrid};
            for (int i = 0; i < n; ++i) {
                const auto inst =
                    hetnet::make_tiny_instance(hetnet::mix_seed(seed, i), kinds[i % 3]);
                const auto oracle = hetnet::exhaustive_optimum(inst);
                const auto dual = hetnet::solve_dual(inst.scenario, inst.channel);
                const auto iter = hetnet::solve_iterative(inst.scenario, inst.channel);
                std::printf(
                    "instance %2d (%s): oracle %.4f W, dual %.4f W, iterative %.4f W\n", i,
                    to_string(inst.scenario.config.scenario_kind).c_str(),
                    oracle.feasible ? oracle.objective_w : -1.0,
                    dual.feasible ? dual.objective_w : -1.0,
                    iter.feasible ? iter.objective_w : -1.0);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
