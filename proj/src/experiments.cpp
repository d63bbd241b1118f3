#include "hetnet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hetnet/iterative_solver.hpp"
#include "hetnet/oracle.hpp"
#include "hetnet/rng.hpp"

namespace hetnet {

SolverChoice solver_choice_from_string(const std::string& s) {
    if (s == "dual") return SolverChoice::Dual;
    if (s == "iterative") return SolverChoice::Iterative;
    if (s == "both") return SolverChoice::Both;
    throw std::invalid_argument("unknown solver choice: " + s);
}

namespace {

std::string solver_name(SolverChoice c) {
    return c == SolverChoice::Dual ? "dual" : "iterative";
}

} // namespace

void parallel_for(int count, const std::function<void(int)>& body) {
    const int workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8));
    if (workers == 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SolveReport run_solver(const SimConfig& config, const Scenario& scenario,
                       const ChannelMatrix& channel, SolverChoice solver,
                       bool enable_elimination) {
    if (solver == SolverChoice::Dual) return solve_dual(scenario, channel, config.dual);
    IterativeOptions opts;
    opts.enable_elimination = enable_elimination;
    opts.coop = config.coop;
    return solve_iterative(scenario, channel, opts);
}

TrialContext make_trial(const SimConfig& config, ScenarioKind kind, std::uint64_t seed) {
    TrialContext ctx;
    ctx.config = config;
    ctx.config.network.scenario_kind = kind;
    ctx.config.network.rng_seed = seed;
    ctx.scenario = generate(ctx.config.network, ctx.config.geometry, ctx.config.power);
    if (kind != ScenarioKind::MS && ctx.config.network.num_faps_per_cell > 0)
        assign_fap_load(ctx.scenario, ctx.config.fap_load_policy);
    ctx.channel = build_channel(ctx.scenario, ctx.config.channel, mix_seed(seed, 0xCAFE));
    return ctx;
}

namespace {

int count_active(const SolveReport& report) {
    int n = 0;
    for (auto on : report.allocation.small_cell_on) n += on ? 1 : 0;
    return n;
}

TrialRow row_from_report(const SimConfig& config, const SolveReport& report,
                         double sweep_value, int trial, std::uint64_t seed,
                         ScenarioKind kind, const std::string& solver) {
    TrialRow row;
    row.sweep_value = sweep_value;
    row.trial = trial;
    row.seed = seed;
    row.kind = kind;
    row.solver = solver;
    row.feasible = report.feasible;
    row.objective_w = report.reported_objective_w;
    row.objective_full_w = report.objective_w;
    row.active_small_cells = count_active(report);
    row.served = report.served_users;
    row.outage = config.network.num_outdoor_users - report.served_users;
    row.iterations = report.iterations;
    row.operations = report.operations;
    row.wall_seconds = report.wall_seconds;
    return row;
}

/// Applies one sweep value to the configuration, depending on the
/// experiment family.
void apply_sweep_value(const std::string& id, double value, SimConfig& config) {
    if (id == "power_vs_users") {
        config.network.num_outdoor_users = static_cast<int>(value);
    } else if (id == "rate_sweep") {
        config.network.rate_threshold_bps = value;
    } else if (id == "fap_budget_sweep") {
        config.power.fap.max_tx_w = value;
    } else if (id == "smallcell_count_sweep") {
        config.network.num_small_cells = static_cast<int>(value);
    } else if (id == "fap_density_sweep") {
        config.network.num_faps_per_cell = static_cast<int>(value);
    } else if (id == "pricing_vs_fossil") {
        config.coop.fossil_price_mu = value;
    } else if (id == "pricing_vs_renewable") {
        config.geometry.renewable_mean_j = value;
    } else if (id == "runtime_compare") {
        // value indexes the scenario kind; nothing to change here
    } else {
        throw std::invalid_argument("unknown experiment id: " + id);
    }
}

bool pricing_experiment(const std::string& id) {
    return id == "pricing_vs_fossil" || id == "pricing_vs_renewable";
}

TrialRow run_pricing_trial(const SimConfig& config, double sweep_value, int trial,
                           std::uint64_t seed) {
    TrialContext ctx = make_trial(config, ScenarioKind::MsfHybrid, seed);
    IterativeOptions opts;
    opts.coop = config.coop;
    const SolveReport report = solve_iterative(ctx.scenario, ctx.channel, opts);
    TrialRow row = row_from_report(config, report, sweep_value, trial, seed,
                                   ScenarioKind::MsfHybrid, "iterative");
    const EnergyLedger ledger =
        excess_renewable(ctx.scenario, report.allocation, config.coop.delta_t_s);
    const auto inputs =
        derive_coop_inputs(ctx.scenario, report.allocation, ledger, config.coop.delta_t_s);
    const CoopAgreement agreement = solve_pricing(inputs, config.coop);
    row.p_r = agreement.p_r;
    row.c_re = agreement.c_re;
    row.payout_mu = agreement.payout_mu;
    for (const auto& cell : inputs)
        row.cell_payment_mu.push_back(agreement.c_re * cell.excess_renewable_j);
    row.cell_profit_uncoop_mu = agreement.profit_uncoop_mu;
    row.cell_profit_coop_mu = agreement.profit_coop_mu;
    return row;
}

} // namespace

ResultTable run_experiment(const ExperimentSpec& spec, const SimConfig& base_config) {
    if (spec.sweep.empty()) throw std::invalid_argument("sweep must be nonempty");
    if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");

    ResultTable table;
    table.spec = spec;

    std::vector<ScenarioKind> kinds = spec.kinds;
    if (kinds.empty()) kinds = {base_config.network.scenario_kind};

    struct Job {
        double value;
        int point;
        int trial;
        ScenarioKind kind;
        SolverChoice solver;
    };
    std::vector<Job> jobs;
    for (std::size_t pi = 0; pi < spec.sweep.size(); ++pi) {
        for (int t = 0; t < spec.trials; ++t) {
            if (spec.id == "runtime_compare") {
                const auto kind = static_cast<ScenarioKind>(static_cast<int>(spec.sweep[pi]));
                for (SolverChoice s : {SolverChoice::Dual, SolverChoice::Iterative})
                    if (spec.solver == SolverChoice::Both || spec.solver == s)
                        jobs.push_back(Job{spec.sweep[pi], static_cast<int>(pi), t, kind, s});
                continue;
            }
            for (ScenarioKind kind : kinds) {
                if (pricing_experiment(spec.id)) {
                    jobs.push_back(
                        Job{spec.sweep[pi], static_cast<int>(pi), t, kind, SolverChoice::Iterative});
                    continue;
                }
                for (SolverChoice s : {SolverChoice::Dual, SolverChoice::Iterative})
                    if (spec.solver == SolverChoice::Both || spec.solver == s)
                        jobs.push_back(Job{spec.sweep[pi], static_cast<int>(pi), t, kind, s});
            }
        }
    }

    table.rows.resize(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), [&](int i) {
        const Job& job = jobs[i];
        // Trial seeds are shared across sweep points and scenario kinds so
        // that curves are paired (common random numbers).
        const std::uint64_t seed = mix_seed(spec.master_seed, job.trial);
        SimConfig config = base_config;
        if (spec.users_override > 0)
            config.network.num_outdoor_users = spec.users_override;
        apply_sweep_value(spec.id, job.value, config);
        TrialRow row;
        try {
            if (pricing_experiment(spec.id)) {
                row = run_pricing_trial(config, job.value, job.trial, seed);
            } else {
                TrialContext ctx = make_trial(config, job.kind, seed);
                const SolveReport report =
                    run_solver(config, ctx.scenario, ctx.channel, job.solver, true);
                row = row_from_report(config, report, job.value, job.trial, seed, job.kind,
                                      solver_name(job.solver));
                if (job.solver == SolverChoice::Dual && job.trial == 0)
                    row.dual_trace = report.dual_trace;
            }
        } catch (const std::exception& e) {
            row.sweep_value = job.value;
            row.trial = job.trial;
            row.seed = seed;
            row.kind = job.kind;
            row.solver = solver_name(job.solver);
            row.error = true;
            row.error_text = e.what();
        }
        table.rows[i] = row;
    });

    table.stats = aggregate(table.rows);

    if (!spec.out_dir.empty()) {
        std::filesystem::create_directories(spec.out_dir);
        const auto base = std::filesystem::path(spec.out_dir) / spec.id;
        std::ofstream(base.string() + "_raw.csv") << trial_csv(table);
        std::ofstream(base.string() + "_stats.csv") << stats_csv(table);
        std::ofstream(base.string() + ".svg") << render_svg(table, spec.id);
        if (pricing_experiment(spec.id))
            std::ofstream(base.string() + "_operators.csv") << operator_csv(table);
        const std::string traces = dual_trace_csv(table);
        if (!traces.empty()) std::ofstream(base.string() + "_dual_trace.csv") << traces;
    }
    return table;
}

std::string operator_csv(const ResultTable& table) {
    std::ostringstream out;
    out.precision(12);
    out << "experiment,sweep_value,trial,operator,p_r,c_re,profit_uncoop_mu,"
           "profit_coop_mu,renewable_payment_mu\n";
    for (const auto& r : table.rows) {
        if (r.error) continue;
        for (std::size_t i = 0; i < r.cell_profit_uncoop_mu.size(); ++i) {
            out << table.spec.id << ',' << r.sweep_value << ',' << r.trial << ',' << i << ','
                << r.p_r << ',' << r.c_re << ',' << r.cell_profit_uncoop_mu[i] << ','
                << r.cell_profit_coop_mu[i] << ','
                << (i < r.cell_payment_mu.size() ? r.cell_payment_mu[i] : 0.0) << '\n';
        }
    }
    return out.str();
}

std::string dual_trace_csv(const ResultTable& table) {
    std::ostringstream out;
    bool any = false;
    for (const auto& r : table.rows) {
        if (r.dual_trace.empty()) continue;
        if (!any) {
            out << "experiment,sweep_value,scenario,trial,iteration,best_dual_w\n";
            out.precision(12);
            any = true;
        }
        for (std::size_t k = 0; k < r.dual_trace.size(); ++k)
            out << table.spec.id << ',' << r.sweep_value << ',' << to_string(r.kind) << ','
                << r.trial << ',' << k + 1 << ',' << r.dual_trace[k] << '\n';
    }
    return any ? out.str() : std::string();
}

std::vector<PointStat> aggregate(const std::vector<TrialRow>& rows) {
    struct Key {
        double value;
        ScenarioKind kind;
        std::string solver;
        bool operator<(const Key& o) const {
            if (value != o.value) return value < o.value;
            if (kind != o.kind) return kind < o.kind;
            return solver < o.solver;
        }
    };
    std::map<Key, std::vector<const TrialRow*>> groups;
    for (const auto& row : rows) {
        if (row.error) continue;
        groups[Key{row.sweep_value, row.kind, row.solver}].push_back(&row);
    }
    std::vector<PointStat> stats;
    for (const auto& [key, members] : groups) {
        PointStat s;
        s.sweep_value = key.value;
        s.kind = key.kind;
        s.solver = key.solver;
        s.n = static_cast<int>(members.size());
        // Objective statistics only make sense over feasible trials; outage
        // and service counters cover everything.
        double sum = 0.0, sum2 = 0.0;
        int feasible_n = 0;
        for (const auto* row : members) {
            if (row->feasible) {
                sum += row->objective_w;
                ++feasible_n;
            }
            s.mean_active_cells += row->active_small_cells;
            s.mean_served += row->served;
            s.mean_outage += row->outage;
            s.mean_wall_seconds += row->wall_seconds;
            s.mean_operations += static_cast<double>(row->operations);
            s.mean_p_r += row->p_r;
            s.mean_c_re += row->c_re;
        }
        s.n_feasible = feasible_n;
        s.mean_objective_w = feasible_n > 0 ? sum / feasible_n : 0.0;
        for (const auto* row : members) {
            if (!row->feasible) continue;
            const double d = row->objective_w - s.mean_objective_w;
            sum2 += d * d;
        }
        s.std_objective_w = feasible_n > 1 ? std::sqrt(sum2 / (feasible_n - 1)) : 0.0;
        s.mean_active_cells /= s.n;
        s.mean_served /= s.n;
        s.mean_outage /= s.n;
        s.mean_wall_seconds /= s.n;
        s.mean_operations /= s.n;
        s.mean_p_r /= s.n;
        s.mean_c_re /= s.n;
        stats.push_back(s);
    }
    return stats;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

} // namespace

std::string trial_csv(const ResultTable& table) {
    std::ostringstream out;
    out.precision(12);
    out << "experiment,sweep_value,trial,seed,scenario,solver,objective_w,"
           "objective_full_w,active_small_cells,served,outage,feasible,iterations,"
           "operations,wall_seconds,p_r,c_re,payout_mu,error\n";
    for (const auto& r : table.rows) {
        out << table.spec.id << ',' << r.sweep_value << ',' << r.trial << ',' << r.seed << ','
            << to_string(r.kind) << ',' << r.solver << ',' << r.objective_w << ','
            << r.objective_full_w << ',' << r.active_small_cells << ',' << r.served << ','
            << r.outage << ',' << (r.feasible ? 1 : 0) << ',' << r.iterations << ','
            << r.operations << ',' << r.wall_seconds << ',' << r.p_r << ',' << r.c_re << ','
            << r.payout_mu << ',' << (r.error ? csv_escape(r.error_text) : "") << '\n';
    }
    return out.str();
}

std::string stats_csv(const ResultTable& table) {
    std::ostringstream out;
    out.precision(12);
    out << "experiment,sweep_value,scenario,solver,n,mean_objective_w,std_objective_w,"
           "mean_active_small_cells,mean_served,mean_outage,mean_wall_seconds,"
           "mean_operations,mean_p_r,mean_c_re\n";
    for (const auto& s : table.stats) {
        out << table.spec.id << ',' << s.sweep_value << ',' << to_string(s.kind) << ','
            << s.solver << ',' << s.n << ',' << s.mean_objective_w << ',' << s.std_objective_w
            << ',' << s.mean_active_cells << ',' << s.mean_served << ',' << s.mean_outage << ','
            << s.mean_wall_seconds << ',' << s.mean_operations << ',' << s.mean_p_r << ','
            << s.mean_c_re << '\n';
    }
    return out.str();
}

std::vector<TrialRow> parse_trial_csv(const std::string& text) {
    std::vector<TrialRow> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (char c : line) {
            if (quoted) {
                if (c == '"') quoted = false;
                else field += c;
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(field);
                field.clear();
            } else {
                field += c;
            }
        }
        fields.push_back(field);
        if (fields.size() < 19) continue;
        TrialRow r;
        r.sweep_value = std::stod(fields[1]);
        r.trial = std::stoi(fields[2]);
        r.seed = std::stoull(fields[3]);
        r.kind = scenario_kind_from_string(fields[4]);
        r.solver = fields[5];
        r.objective_w = std::stod(fields[6]);
        r.objective_full_w = std::stod(fields[7]);
        r.active_small_cells = std::stoi(fields[8]);
        r.served = std::stoi(fields[9]);
        r.outage = std::stoi(fields[10]);
        r.feasible = fields[11] == "1";
        r.iterations = std::stoi(fields[12]);
        r.operations = std::stoll(fields[13]);
        r.wall_seconds = std::stod(fields[14]);
        r.p_r = std::stod(fields[15]);
        r.c_re = std::stod(fields[16]);
        r.payout_mu = std::stod(fields[17]);
        r.error = !fields[18].empty();
        r.error_text = fields[18];
        rows.push_back(r);
    }
    return rows;
}

std::string render_svg(const ResultTable& table, const std::string& title) {
    const int width = 720, height = 480, margin = 60;
    std::ostringstream out;
    out.precision(6);

    struct Series {
        std::string label;
        std::vector<std::pair<double, double>> points;
    };
    std::map<std::string, Series> series;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : table.stats) {
        const std::string label = to_string(s.kind) + "/" + s.solver;
        const double y = pricing_experiment(table.spec.id) ? s.mean_p_r : s.mean_objective_w;
        series[label].label = label;
        series[label].points.emplace_back(s.sweep_value, y);
        xmin = std::min(xmin, s.sweep_value);
        xmax = std::max(xmax, s.sweep_value);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (series.empty()) {
        xmin = 0; xmax = 1; ymin = 0; ymax = 1;
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;

    auto sx = [&](double x) {
        return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto sy = [&](double y) {
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
    };

    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double x = xmin + (xmax - xmin) * k / 4.0;
        const double y = ymin + (ymax - ymin) * k / 4.0;
        out << "<text x=\"" << sx(x) << "\" y=\"" << height - margin + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << x << "</text>\n";
        out << "<text x=\"" << margin - 8 << "\" y=\"" << sy(y) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << y << "</text>\n";
    }
    int idx = 0;
    for (auto& [label, s] : series) {
        std::sort(s.points.begin(), s.points.end());
        out << "<polyline fill=\"none\" stroke=\"" << colors[idx % 8] << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : s.points) out << sx(x) << ',' << sy(y) << ' ';
        out << "\"/>\n";
        for (const auto& [x, y] : s.points)
            out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\""
                << colors[idx % 8] << "\"/>\n";
        out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 16 * idx
            << "\" font-size=\"11\" fill=\"" << colors[idx % 8] << "\">" << label << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
    return out.str();
}

ExperimentSpec default_spec(const std::string& id) {
    ExperimentSpec spec;
    spec.id = id;
    spec.trials = 20;
    if (id == "power_vs_users") {
        spec.sweep = {10, 20, 30, 40, 50, 60, 70, 80};
        spec.kinds = {ScenarioKind::MS, ScenarioKind::MsfClosed, ScenarioKind::MsfHybrid};
        spec.solver = SolverChoice::Both;
    } else if (id == "rate_sweep") {
        spec.sweep = {0.25e6, 0.5e6, 0.75e6, 1.0e6};
        spec.kinds = {ScenarioKind::MS, ScenarioKind::MsfHybrid};
        spec.solver = SolverChoice::Dual;
    } else if (id == "fap_budget_sweep") {
        spec.sweep = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        spec.kinds = {ScenarioKind::MsfHybrid};
        spec.solver = SolverChoice::Dual;
        spec.trials = 10;
        spec.users_override = 60;
    } else if (id == "smallcell_count_sweep") {
        spec.sweep = {2, 3, 4, 5, 6, 7, 8};
        spec.kinds = {ScenarioKind::MsfClosed, ScenarioKind::MsfHybrid};
        spec.solver = SolverChoice::Iterative;
        spec.users_override = 60;
    } else if (id == "fap_density_sweep") {
        spec.sweep = {2, 3, 4, 5, 6};
        spec.kinds = {ScenarioKind::MsfHybrid};
        spec.solver = SolverChoice::Iterative;
        spec.users_override = 60;
    } else if (id == "pricing_vs_fossil") {
        spec.sweep = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        spec.kinds = {ScenarioKind::MsfHybrid};
        spec.trials = 5;
    } else if (id == "pricing_vs_renewable") {
        spec.sweep = {0, 40, 60, 80, 100};
        spec.kinds = {ScenarioKind::MsfHybrid};
        spec.trials = 5;
    } else if (id == "runtime_compare") {
        spec.sweep = {0, 1, 2}; // MS, MSF-closed, MSF-hybrid
        spec.trials = 10;
        spec.solver = SolverChoice::Both;
    } else {
        throw std::invalid_argument("unknown experiment id: " + id);
    }
    return spec;
}

std::vector<std::string> known_experiments() {
    return {"power_vs_users",   "rate_sweep",         "fap_budget_sweep",
            "smallcell_count_sweep", "fap_density_sweep", "pricing_vs_fossil",
            "pricing_vs_renewable",  "runtime_compare"};
}

} // namespace hetnet
