#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hetnet/config_io.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

enum class SolverChoice { Dual, Iterative, Both };

SolverChoice solver_choice_from_string(const std::string& s);

/// Generated scenario plus its channel for one Monte-Carlo trial.
struct TrialContext {
    SimConfig config;
    Scenario scenario;
    ChannelMatrix channel;
};

TrialContext make_trial(const SimConfig& config, ScenarioKind kind, std::uint64_t seed);

SolveReport run_solver(const SimConfig& config, const Scenario& scenario,
                       const ChannelMatrix& channel, SolverChoice solver,
                       bool enable_elimination = true);

/// Runs body(0..count-1) on a small thread pool; exceptions propagate.
void parallel_for(int count, const std::function<void(int)>& body);

struct ExperimentSpec {
    std::string id; // power_vs_users, rate_sweep, fap_budget_sweep,
                    // smallcell_count_sweep, fap_density_sweep,
                    // pricing_vs_fossil, pricing_vs_renewable, runtime_compare
    std::vector<double> sweep;
    int trials = 20;
    SolverChoice solver = SolverChoice::Both;
    std::vector<ScenarioKind> kinds;
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    int users_override = 0; // > 0 pins the outdoor user count
};

/// One per-trial record; every row carries the seed that regenerates it.
struct TrialRow {
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    ScenarioKind kind = ScenarioKind::MS;
    std::string solver;
    double objective_w = 0.0;          // b_M excluded (figure convention)
    double objective_full_w = 0.0;     // b_M included
    int active_small_cells = 0;
    int served = 0;
    int outage = 0;
    bool feasible = false;
    int iterations = 0;
    std::int64_t operations = 0;
    double wall_seconds = 0.0;
    // pricing experiments
    double p_r = 0.0;
    double c_re = 0.0;
    double payout_mu = 0.0;
    std::vector<double> cell_payment_mu; // c_RE * q per cell
    std::vector<double> cell_profit_uncoop_mu;
    std::vector<double> cell_profit_coop_mu;
    // convergence trace of the dual solver (best dual value per iteration)
    std::vector<double> dual_trace;
    bool error = false;
    std::string error_text;
};

struct PointStat {
    double sweep_value = 0.0;
    ScenarioKind kind = ScenarioKind::MS;
    std::string solver;
    int n = 0;
    int n_feasible = 0;
    double mean_objective_w = 0.0;
    double std_objective_w = 0.0;
    double mean_active_cells = 0.0;
    double mean_served = 0.0;
    double mean_outage = 0.0;
    double mean_wall_seconds = 0.0;
    double mean_operations = 0.0;
    double mean_p_r = 0.0;
    double mean_c_re = 0.0;
};

struct ResultTable {
    ExperimentSpec spec;
    std::vector<TrialRow> rows;
    std::vector<PointStat> stats;
};

/// Runs the sweep (trials within a point run concurrently), writes
/// <id>_raw.csv, <id>_stats.csv and <id>.svg under spec.out_dir.
ResultTable run_experiment(const ExperimentSpec& spec, const SimConfig& config);

/// Recomputes the aggregate block from raw rows (used both internally and
/// to check that stats are reproducible from the CSV alone).
std::vector<PointStat> aggregate(const std::vector<TrialRow>& rows);

std::string trial_csv(const ResultTable& table);
std::string stats_csv(const ResultTable& table);
std::vector<TrialRow> parse_trial_csv(const std::string& text);

/// Per-operator ledger of the pricing experiments:
/// (sweep value, trial, operator, p_r, c_RE, uncooperative and cooperative
/// profit, renewable payment).
std::string operator_csv(const ResultTable& table);

/// Convergence traces of the dual runs: (sweep value, scenario, trial,
/// iteration, best dual value).
std::string dual_trace_csv(const ResultTable& table);

/// Minimal static SVG line plot of the per-point means.
std::string render_svg(const ResultTable& table, const std::string& title);

ExperimentSpec default_spec(const std::string& id);
std::vector<std::string> known_experiments();

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double wall_seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t master_seed = 2026;
    std::string out_dir;   // empty = no CSV dumps
    bool quick = false;    // trims trial counts for smoke runs (not the gate)
    bool disable_oracle = false; // oracle-backed criteria fail fast as missing
    int only_criterion = 0;      // 0 = run all
    std::function<void(const CriterionResult&)> on_result;
};

/// Executes every acceptance criterion with fixed seeds and returns one
/// verdict per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

} // namespace hetnet
