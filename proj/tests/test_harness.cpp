#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hetnet/experiments.hpp"

using namespace hetnet;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec spec = default_spec("power_vs_users");
    spec.sweep = {10, 20};
    spec.trials = 2;
    spec.solver = SolverChoice::Iterative;
    spec.kinds = {ScenarioKind::MS};
    spec.master_seed = 11;
    spec.out_dir.clear();
    return spec;
}

} // namespace

TEST_CASE("experiment sweep produces complete, reproducible rows") {
    const SimConfig config = default_config();
    const ExperimentSpec spec = small_spec();
    const ResultTable a = run_experiment(spec, config);
    const ResultTable b = run_experiment(spec, config);
    CHECK(a.rows.size() == 4);
    for (const auto& row : a.rows) {
        CHECK(!row.error);
        CHECK(row.feasible);
        CHECK(row.seed != 0);
    }
    // Everything except wall-clock timing is deterministic.
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].seed == b.rows[i].seed);
        CHECK(a.rows[i].objective_w == b.rows[i].objective_w);
        CHECK(a.rows[i].objective_full_w == b.rows[i].objective_full_w);
        CHECK(a.rows[i].active_small_cells == b.rows[i].active_small_cells);
        CHECK(a.rows[i].served == b.rows[i].served);
        CHECK(a.rows[i].operations == b.rows[i].operations);
    }
}

TEST_CASE("rows regenerate from their recorded seed") {
    const SimConfig base = default_config();
    const ExperimentSpec spec = small_spec();
    const ResultTable table = run_experiment(spec, base);
    const TrialRow& row = table.rows.front();
    SimConfig config = base;
    config.network.num_outdoor_users = static_cast<int>(row.sweep_value);
    const TrialContext ctx = make_trial(config, row.kind, row.seed);
    const SolveReport report =
        run_solver(config, ctx.scenario, ctx.channel, SolverChoice::Iterative, true);
    CHECK(report.reported_objective_w == doctest::Approx(row.objective_w));
}

TEST_CASE("aggregates recompute identically from the raw CSV") {
    const SimConfig config = default_config();
    const ResultTable table = run_experiment(small_spec(), config);
    const auto parsed = parse_trial_csv(trial_csv(table));
    REQUIRE(parsed.size() == table.rows.size());
    const auto stats = aggregate(parsed);
    REQUIRE(stats.size() == table.stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        CHECK(stats[i].mean_objective_w ==
              doctest::Approx(table.stats[i].mean_objective_w).epsilon(1e-9));
        CHECK(stats[i].std_objective_w ==
              doctest::Approx(table.stats[i].std_objective_w).epsilon(1e-9));
        CHECK(stats[i].n == table.stats[i].n);
    }
}

TEST_CASE("experiment artifacts land in the output directory") {
    const auto dir = std::filesystem::temp_directory_path() / "hetnet_harness_test";
    std::filesystem::remove_all(dir);
    ExperimentSpec spec = small_spec();
    spec.out_dir = dir.string();
    run_experiment(spec, default_config());
    CHECK(std::filesystem::exists(dir / "power_vs_users_raw.csv"));
    CHECK(std::filesystem::exists(dir / "power_vs_users_stats.csv"));
    CHECK(std::filesystem::exists(dir / "power_vs_users.svg"));
    std::ifstream svg(dir / "power_vs_users.svg");
    std::string first_line;
    std::getline(svg, first_line);
    CHECK(first_line.find("<svg") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("unknown experiments and empty sweeps are rejected") {
    CHECK_THROWS_AS(default_spec("nope"), std::invalid_argument);
    ExperimentSpec spec = small_spec();
    spec.sweep.clear();
    CHECK_THROWS_AS(run_experiment(spec, default_config()), std::invalid_argument);
}

TEST_CASE("pricing experiment rows carry agreement prices") {
    ExperimentSpec spec = default_spec("pricing_vs_fossil");
    spec.sweep = {0.3, 0.6};
    spec.trials = 1;
    spec.master_seed = 5;
    spec.out_dir.clear();
    SimConfig config = default_config();
    config.network.num_outdoor_users = 20;
    const ResultTable table = run_experiment(spec, config);
    REQUIRE(table.rows.size() == 2);
    for (const auto& row : table.rows) {
        CHECK(!row.error);
        CHECK(row.c_re >= 0.0);
        CHECK(row.c_re <= row.sweep_value + 1e-12);
        CHECK(row.p_r >= 0.0);
    }
}

TEST_CASE("a disabled oracle fails fast with a missing-dependency verdict") {
    AcceptanceOptions opts;
    opts.quick = true;
    opts.disable_oracle = true;
    opts.only_criterion = 1;
    const auto results = run_acceptance(opts);
    REQUIRE(results.size() == 1);
    CHECK(!results[0].pass);
    CHECK(results[0].details.find("missing dependency") != std::string::npos);
}

TEST_CASE("pricing runs emit a per-operator ledger") {
    ExperimentSpec spec = default_spec("pricing_vs_fossil");
    spec.sweep = {0.5};
    spec.trials = 1;
    spec.master_seed = 5;
    spec.out_dir.clear();
    SimConfig config = default_config();
    config.network.num_outdoor_users = 20;
    const ResultTable table = run_experiment(spec, config);
    const std::string csv = operator_csv(table);
    // Header plus one line per small cell.
    CHECK(std::count(csv.begin(), csv.end(), '\n') ==
          1 + config.network.num_small_cells);
    CHECK(csv.find("profit_coop_mu") != std::string::npos);
}

TEST_CASE("dual runs emit a convergence trace") {
    ExperimentSpec spec = default_spec("power_vs_users");
    spec.sweep = {10};
    spec.trials = 1;
    spec.solver = SolverChoice::Dual;
    spec.kinds = {ScenarioKind::MS};
    spec.master_seed = 11;
    spec.out_dir.clear();
    const ResultTable table = run_experiment(spec, default_config());
    const std::string csv = dual_trace_csv(table);
    CHECK(csv.find("best_dual_w") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 10);
}

TEST_CASE("config round-trips through the documented schema") {
    SimConfig config = default_config();
    config.network.num_outdoor_users = 33;
    config.network.scenario_kind = ScenarioKind::MsfHybrid;
    config.channel.shadow_sigma_db = 6.5;
    config.power.fap.max_tx_w = 0.7;
    config.dual.max_iterations = 123;
    config.coop.fossil_price_mu = 0.9;
    const SimConfig back = config_from_text(config_to_text(config));
    CHECK(back.network.num_outdoor_users == 33);
    CHECK(back.network.scenario_kind == ScenarioKind::MsfHybrid);
    CHECK(back.channel.shadow_sigma_db == doctest::Approx(6.5));
    CHECK(back.power.fap.max_tx_w == doctest::Approx(0.7));
    CHECK(back.dual.max_iterations == 123);
    CHECK(back.coop.fossil_price_mu == doctest::Approx(0.9));
    CHECK(config_to_text(back) == config_to_text(config));
}
