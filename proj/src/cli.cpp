#include "irsa/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "irsa/analysis.hpp"
#include "irsa/config_file.hpp"
#include "irsa/energy_chain.hpp"
#include "irsa/metrics.hpp"
#include "irsa/model.hpp"
#include "irsa/optimize.hpp"
#include "irsa/sim.hpp"

namespace irsa {
namespace {

constexpr const char* kCsvHeader =
    "alphaU,G,scheme,plr,throughput,avg_aoi_norm,avp_theta,plr_lower_bound,seed,frames";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

struct CommonArgs {
    std::string config_path;
    std::string scheme = "avoid";
    std::uint64_t seed = 1;
    long frames = 100000;
    long warmup = 100;
    double theta = 10000.0;
    double alpha_u = -1.0;  // <0: keep the config file's update_prob
    std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_run_length) {
    cmd->add_option("--config", args.config_path, "scenario file")->required();
    cmd->add_option("--scheme", args.scheme, "avoid | identify | unlimited");
    cmd->add_option("--seed", args.seed, "base RNG seed");
    if (with_run_length) {
        cmd->add_option("--frames", args.frames, "measured frames");
        cmd->add_option("--warmup", args.warmup, "discarded warm-up frames");
    }
    cmd->add_option("--theta", args.theta, "age-violation threshold in slots");
    cmd->add_option("--alpha-u", args.alpha_u, "override alpha*U (per-frame load knob)");
    cmd->add_option("--out", args.out, "output path (default stdout)");
}

ParsedScenario load_scenario(const CommonArgs& args) {
    ParsedScenario scenario = parse_scenario_file(args.config_path);
    if (args.alpha_u >= 0.0)
        scenario.config.update_prob = args.alpha_u / scenario.config.num_devices;
    return scenario;
}

// Energy-outage loss floor for the CSV: analytic steady state under avoid,
// the run's own battery histogram under identify, zero (no energy limit)
// otherwise.
double point_lower_bound(const SystemConfig& config, const DegreeDistribution& dist,
                         Scheme scheme, const SimulationReport& report) {
    if (scheme == Scheme::Unlimited) return 0.0;
    const std::vector<double>& row0 = dist.row(0);
    if (scheme == Scheme::Avoid) {
        const BatteryChain chain = battery_chain(config, dist);
        return plr_lower_bound(config, row0, chain.steady.front());
    }
    const std::vector<double> phi = empirical_battery_distribution(report);
    return plr_lower_bound(config, row0, phi.front());
}

std::string csv_row(const SystemConfig& config, Scheme scheme, const SimulationReport& report,
                    std::uint64_t seed, double bound) {
    std::ostringstream row;
    row << fmt(config.update_prob * config.num_devices) << ',' << fmt(channel_load(config)) << ','
        << scheme_name(scheme) << ',' << fmt(estimate_plr(report)) << ','
        << fmt(empirical_throughput(report)) << ','
        << fmt(empirical_aoi_mean(report) / static_cast<double>(config.num_devices)) << ','
        << fmt(empirical_avp(report)) << ',' << fmt(bound) << ',' << seed << ','
        << report.frames;
    return row.str();
}

nlohmann::json distribution_json(const DegreeDistribution& dist) {
    nlohmann::json j;
    j["adaptive"] = dist.adaptive;
    j["table"] = dist.table;
    return j;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs : CommonArgs {
    double pe = -1.0;  // <0: no loss-rate input, skip the age formulas
    std::string phi_from;
};

int cmd_analyze(const AnalyzeArgs& args) {
    ParsedScenario scenario = load_scenario(args);
    const Scheme scheme = scheme_from_name(args.scheme);
    const SystemConfig& config = scenario.config;
    validate_config(config);
    validate_distribution(scenario.dist, config);

    nlohmann::json j;
    j["scheme"] = scheme_name(scheme);
    j["num_devices"] = config.num_devices;
    j["frame_length"] = config.frame_length;
    j["update_prob"] = config.update_prob;
    j["harvest_prob"] = config.harvest_prob;
    j["alpha_u"] = config.update_prob * config.num_devices;
    j["sigma"] = activation_prob(config);
    j["load"] = channel_load(config);
    j["distribution"] = distribution_json(scenario.dist);

    if (scheme == Scheme::Avoid) {
        const BatteryChain chain = battery_chain(config, scenario.dist);
        j["transition_matrix"] = chain.transitions;
        j["phi"] = chain.steady;
        j["phi_source"] = "balance-equations";
        j["average_degree_distribution"] =
            average_degree_distribution(chain.steady, scenario.dist);
        j["plr_lower_bound"] =
            plr_lower_bound(config, scenario.dist.row(0), chain.steady.front());
    } else if (scheme == Scheme::Identify) {
        if (args.phi_from.empty())
            throw ConfigError(
                "the identify bound needs an empirical battery distribution; "
                "run `simulate --json <file>` first and pass it via --phi-from");
        std::ifstream in(args.phi_from);
        if (!in) throw ConfigError("cannot open --phi-from file: " + args.phi_from);
        nlohmann::json report = nlohmann::json::parse(in);
        std::vector<double> phi;
        if (report.contains("battery_distribution")) {
            phi = report["battery_distribution"].get<std::vector<double>>();
        } else if (report.contains("battery_histogram")) {
            phi = report["battery_histogram"].get<std::vector<double>>();
            double total = 0.0;
            for (double x : phi) total += x;
            if (total <= 0.0) throw ConfigError("--phi-from histogram is empty");
            for (double& x : phi) x /= total;
        } else {
            throw ConfigError("--phi-from file lacks a battery distribution");
        }
        if (static_cast<int>(phi.size()) != config.battery_capacity + 1)
            throw ConfigError("--phi-from distribution does not match battery_capacity");
        j["phi"] = phi;
        j["phi_source"] = args.phi_from;
        j["average_degree_distribution"] = average_degree_distribution(phi, scenario.dist);
        j["plr_lower_bound"] = plr_lower_bound(config, scenario.dist.row(0), phi.front());
    } else {
        j["plr_lower_bound"] = 0.0;
    }

    if (args.pe >= 0.0) {
        const AoiInputs in{config.update_prob, config.frame_length, activation_prob(config),
                           args.pe};
        j["plr_input"] = args.pe;
        j["average_aoi"] = average_aoi(in);
        j["average_aoi_normalized"] = average_aoi(in) / static_cast<double>(config.num_devices);
        j["aoi_violation_prob"] = aoi_violation_prob(args.theta, in);
        j["throughput"] = throughput(channel_load(config), args.pe);
        j["theta"] = args.theta;
    }
    write_text(args.out, j.dump(2) + "\n");
    return 0;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs : CommonArgs {
    std::string json_out;
};

int cmd_simulate(const SimulateArgs& args) {
    ParsedScenario scenario = load_scenario(args);
    const Scheme scheme = scheme_from_name(args.scheme);

    std::ostringstream csv;
    csv << kCsvHeader << '\n';
    if (args.frames > 0) {
        const SimulationReport report =
            run_simulation(scenario.config, scenario.dist, scheme, args.frames, args.warmup,
                           args.seed, args.theta);
        const double bound = point_lower_bound(scenario.config, scenario.dist, scheme, report);
        csv << csv_row(scenario.config, scheme, report, args.seed, bound) << '\n';
        if (!args.json_out.empty()) write_text(args.json_out, report_to_json(report) + "\n");
    }
    write_text(args.out, csv.str());
    return 0;
}

// ------------------------------------------------------------------ sweep

struct OptimizeFlags {
    bool enabled = false;
    std::string objective = "aoi";
    bool adaptive = false;
    int restarts = 10;
    long eval_frames = 20000;
    long final_frames = 100000;
};

struct SweepArgs : CommonArgs {
    std::string sweep_spec;
    int jobs = 1;
    OptimizeFlags opt;
};

struct SweepPoint {
    SystemConfig config;
    DegreeDistribution dist;
};

std::vector<SweepPoint> expand_grid(const ParsedScenario& scenario, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--sweep expects <var>=<comma-separated grid>");
    const std::string var = spec.substr(0, eq);
    std::vector<double> grid;
    std::stringstream values(spec.substr(eq + 1));
    std::string item;
    while (std::getline(values, item, ','))
        if (!item.empty()) grid.push_back(std::stod(item));
    if (grid.empty()) throw ConfigError("--sweep grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw ConfigError("--sweep grid must be sorted ascending");

    const SystemConfig& base = scenario.config;
    const double eta_m = base.harvest_prob * base.frame_length;
    std::vector<SweepPoint> points;
    for (double v : grid) {
        SweepPoint p{base, scenario.dist};
        if (var == "alphaU") {
            p.config.update_prob = v / base.num_devices;
        } else if (var == "E") {
            const int capacity = static_cast<int>(v);
            p.config.battery_capacity = capacity;
            if (scenario.dist.adaptive) {
                const DegreeDistribution monomial =
                    DegreeDistribution::battery_monomial(base.battery_capacity, base.max_degree);
                if (scenario.dist.table != monomial.table)
                    throw ConfigError(
                        "sweeping E requires a nonadaptive table or the full-spend battery "
                        "monomial (other adaptive tables have no defined reshape)");
                p.dist = DegreeDistribution::battery_monomial(capacity, base.max_degree);
            }
        } else if (var == "etaM") {
            p.config.harvest_prob = v / base.frame_length;
        } else if (var == "M") {
            const int m = static_cast<int>(v);
            p.config.frame_length = m;
            p.config.harvest_prob = eta_m / m;  // hold eta*M fixed across the sweep
        } else {
            throw ConfigError("unknown sweep variable '" + var +
                              "' (expected alphaU, E, etaM, or M)");
        }
        points.push_back(std::move(p));
    }
    return points;
}

int cmd_sweep(const SweepArgs& args) {
    const ParsedScenario scenario = load_scenario(args);
    const Scheme scheme = scheme_from_name(args.scheme);
    const std::vector<SweepPoint> points = expand_grid(scenario, args.sweep_spec);

    std::vector<std::string> rows(points.size());
    std::vector<std::string> errors(points.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            const SweepPoint& p = points[i];
            try {
                validate_config(p.config);
                if (args.opt.enabled) {
                    OptimizationProblem problem;
                    problem.scheme = scheme;
                    problem.adaptive = args.opt.adaptive;
                    problem.objective = objective_from_name(args.opt.objective);
                    problem.theta = args.theta;
                    problem.eval_frames = args.opt.eval_frames;
                    problem.eval_warmup = args.warmup;
                    problem.restarts = args.opt.restarts;
                    problem.seed = args.seed;
                    problem.final_frames = args.opt.final_frames;
                    problem.jobs = 1;  // the pool parallelizes across grid points
                    const OptimizationResult res =
                        optimize_degree_distribution(p.config, problem);
                    const double bound =
                        point_lower_bound(p.config, res.best, scheme, res.final_report);
                    rows[i] = csv_row(p.config, scheme, res.final_report, args.seed, bound);
                } else {
                    const SimulationReport report =
                        run_simulation(p.config, p.dist, scheme, args.frames, args.warmup,
                                       args.seed, args.theta);
                    const double bound = point_lower_bound(p.config, p.dist, scheme, report);
                    rows[i] = csv_row(p.config, scheme, report, args.seed, bound);
                }
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    const int jobs = std::clamp(args.jobs > 0 ? args.jobs
                                              : static_cast<int>(std::thread::hardware_concurrency()),
                                1, static_cast<int>(points.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Flush every completed row in grid order even if some points failed.
    std::ostringstream csv;
    csv << kCsvHeader << '\n';
    bool failed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!errors[i].empty()) {
            failed = true;
            std::cerr << "sweep point " << i << " failed: " << errors[i] << "\n";
            continue;
        }
        csv << rows[i] << '\n';
    }
    write_text(args.out, csv.str());
    return failed ? 2 : 0;
}

// --------------------------------------------------------------- optimize

struct OptimizeArgs : CommonArgs {
    OptimizeFlags opt;
    int jobs = 0;
};

int cmd_optimize(const OptimizeArgs& args) {
    const ParsedScenario scenario = load_scenario(args);
    const Scheme scheme = scheme_from_name(args.scheme);

    OptimizationProblem problem;
    problem.scheme = scheme;
    problem.adaptive = args.opt.adaptive;
    problem.objective = objective_from_name(args.opt.objective);
    problem.theta = args.theta;
    problem.eval_frames = args.opt.eval_frames;
    problem.eval_warmup = args.warmup;
    problem.restarts = args.opt.restarts;
    problem.seed = args.seed;
    problem.final_frames = args.opt.final_frames;
    problem.jobs = args.jobs;
    const OptimizationResult res = optimize_degree_distribution(scenario.config, problem);

    nlohmann::json j;
    j["scheme"] = scheme_name(scheme);
    j["objective"] = args.opt.objective;
    j["adaptive"] = args.opt.adaptive;
    j["theta"] = args.theta;
    j["seed"] = args.seed;
    j["eval_frames"] = args.opt.eval_frames;
    j["final_frames"] = args.opt.final_frames;
    j["restart_values"] = res.restart_values;
    j["best_restart"] = res.best_restart;
    j["search_value"] = res.search_value;
    j["final_value"] = res.final_value;
    if (problem.objective == Objective::AverageAoi)
        j["final_value_normalized"] =
            res.final_value / static_cast<double>(scenario.config.num_devices);
    j["distribution"] = distribution_json(res.best);
    write_text(args.out, j.dump(2) + "\n");
    return 0;
}

void add_optimize_flags(CLI::App* cmd, OptimizeFlags& opt) {
    cmd->add_option("--objective", opt.objective, "aoi | avp | throughput");
    cmd->add_flag("--adaptive", opt.adaptive, "one degree row per battery level");
    cmd->add_option("--restarts", opt.restarts, "random Nelder-Mead restarts");
    cmd->add_option("--eval-frames", opt.eval_frames, "frames per objective evaluation");
    cmd->add_option("--final-frames", opt.final_frames, "frames for the final re-evaluation");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Simulator, analyzer, and optimizer for frame-based random access "
                 "with energy-harvesting devices"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "closed-form battery chain, loss bound, and age formulas");
    add_common(analyze, analyze_args, false);
    analyze->add_option("--pe", analyze_args.pe, "loss ratio for the age formulas");
    analyze->add_option("--phi-from", analyze_args.phi_from,
                        "JSON report supplying the empirical battery distribution (identify)");

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo run producing one CSV row");
    add_common(simulate, simulate_args, true);
    simulate->add_option("--json", simulate_args.json_out, "also write the full report as JSON");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "grid of runs, one CSV row per point");
    add_common(sweep, sweep_args, true);
    sweep->add_option("--sweep", sweep_args.sweep_spec, "<var>=<comma grid>; var: alphaU|E|etaM|M")
        ->required();
    sweep->add_option("--jobs", sweep_args.jobs, "parallel grid workers (0 = hardware)");
    sweep->add_flag("--optimize", sweep_args.opt.enabled, "optimize the table at each point");
    add_optimize_flags(sweep, sweep_args.opt);

    OptimizeArgs optimize_args;
    auto* optimize = app.add_subcommand("optimize", "degree-distribution search (JSON out)");
    add_common(optimize, optimize_args, false);
    optimize->add_option("--jobs", optimize_args.jobs, "parallel restart workers (0 = hardware)");
    add_optimize_flags(optimize, optimize_args.opt);
    optimize->add_option("--eval-warmup", optimize_args.warmup, "warm-up frames per evaluation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_args);
        if (simulate->parsed()) return cmd_simulate(simulate_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (optimize->parsed()) return cmd_optimize(optimize_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace irsa
