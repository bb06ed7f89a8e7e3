#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "irsa/model.hpp"
#include "irsa/sim.hpp"

namespace irsa {

enum class Objective { AverageAoi, AgeViolation, NegativeThroughput };

const char* objective_name(Objective objective);
Objective objective_from_name(const std::string& name);  // "aoi" | "avp" | "throughput"

// Shape of the free parameter vector: one softmax block per row that has at
// least two admissible degrees. Rows whose support is a single degree carry
// no parameters (the AVOID row for an empty battery is pinned to degree 0).
struct LogitLayout {
    std::vector<int> row_support;  // row b may use degrees 0 .. row_support[b]-1
    int max_degree = 0;

    int dimension() const {
        int n = 0;
        for (int s : row_support) n += s >= 2 ? s : 0;
        return n;
    }
};

// AVOID restricts row b to degrees <= b; adaptive layouts carry capacity+1
// rows, nonadaptive layouts one shared row.
LogitLayout make_logit_layout(Scheme scheme, int battery_capacity, int max_degree, bool adaptive);

// Per-row softmax of the free logits; masked degrees get probability zero.
// The result satisfies the distribution invariants exactly.
DegreeDistribution logits_to_distribution(const LogitLayout& layout, std::span<const double> logits);

struct NelderMeadOptions {
    double diameter_tol = 1e-4;  // max distance of any vertex from the best
    double spread_tol = 1e-5;    // |f(worst) - f(best)|
    long max_iterations = 400;
    double initial_step = 1.0;   // offset of the axis-aligned initial simplex
};

struct NelderMeadResult {
    std::vector<double> best;
    double value = 0.0;
    long iterations = 0;
    long evaluations = 0;
};

// Downhill simplex with reflection/expansion/contraction/shrink coefficients
// (1, 2, 0.5, 0.5). Non-finite objective values are treated as +infinity.
// Returns the best point ever evaluated (vertex or probe).
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> x0, const NelderMeadOptions& options = {});

struct OptimizationProblem {
    Scheme scheme = Scheme::Identify;
    bool adaptive = false;
    Objective objective = Objective::AverageAoi;
    double theta = 10000.0;
    long eval_frames = 20000;   // frames per objective call during the search
    long eval_warmup = 100;
    int restarts = 10;          // random initializations (a baseline start is added on top)
    std::uint64_t seed = 1;
    long final_frames = 100000; // budget of the fresh-seed re-evaluation
    int jobs = 0;               // worker threads across restarts; 0 = hardware
    NelderMeadOptions nelder_mead = {};
};

struct OptimizationResult {
    DegreeDistribution best;
    double search_value = 0.0;           // objective under the common search seed
    double final_value = 0.0;            // re-evaluated objective, fresh seed
    SimulationReport final_report;       // the re-evaluation run
    std::vector<double> restart_values;  // per restart; last entry = baseline start
    int best_restart = -1;
};

// Random-restart Nelder-Mead over softmax logits. All objective evaluations
// share one simulation seed (common random numbers) so each restart descends
// a deterministic surface; the reported final value uses a fresh seed.
OptimizationResult optimize_degree_distribution(const SystemConfig& config,
                                                const OptimizationProblem& problem);

}  // namespace irsa
