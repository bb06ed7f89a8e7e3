// Python bindings for the energy-harvesting random-access core. The module
// mirrors the C++ surface: scenario/config types, the three decoders on
// explicit frame traces, the battery chain, the closed-form age/loss
// analysis, the frame simulator, and the degree-table optimizer.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <vector>

#include "irsa/analysis.hpp"
#include "irsa/decode.hpp"
#include "irsa/energy_chain.hpp"
#include "irsa/metrics.hpp"
#include "irsa/model.hpp"
#include "irsa/optimize.hpp"
#include "irsa/sim.hpp"
#include "irsa/trace.hpp"

namespace py = pybind11;
using namespace irsa;

namespace {

std::vector<bool> flags_to_bools(const std::vector<char>& flags) {
    return std::vector<bool>(flags.begin(), flags.end());
}

std::vector<char> bools_to_flags(const std::vector<bool>& bits) {
    std::vector<char> flags(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) flags[i] = bits[i] ? 1 : 0;
    return flags;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Energy-harvesting irregular-repetition random access: simulator, "
              "battery-chain analysis, and degree-table optimization.";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    // ------------------------------------------------------------- model
    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init([](int num_devices, int frame_length, double update_prob,
                         int battery_capacity, double harvest_prob, int max_degree) {
                 SystemConfig c;
                 c.num_devices = num_devices;
                 c.frame_length = frame_length;
                 c.update_prob = update_prob;
                 c.battery_capacity = battery_capacity;
                 c.harvest_prob = harvest_prob;
                 c.max_degree = max_degree;
                 return c;
             }),
             py::arg("num_devices"), py::arg("frame_length"), py::arg("update_prob"),
             py::arg("battery_capacity"), py::arg("harvest_prob"), py::arg("max_degree"))
        .def_readwrite("num_devices", &SystemConfig::num_devices)
        .def_readwrite("frame_length", &SystemConfig::frame_length)
        .def_readwrite("update_prob", &SystemConfig::update_prob)
        .def_readwrite("battery_capacity", &SystemConfig::battery_capacity)
        .def_readwrite("harvest_prob", &SystemConfig::harvest_prob)
        .def_readwrite("max_degree", &SystemConfig::max_degree)
        .def_property_readonly("unlimited", &SystemConfig::unlimited)
        .def("__repr__", [](const SystemConfig& c) {
            return "SystemConfig(num_devices=" + std::to_string(c.num_devices) +
                   ", frame_length=" + std::to_string(c.frame_length) +
                   ", update_prob=" + std::to_string(c.update_prob) +
                   ", battery_capacity=" + std::to_string(c.battery_capacity) +
                   ", harvest_prob=" + std::to_string(c.harvest_prob) +
                   ", max_degree=" + std::to_string(c.max_degree) + ")";
        });

    m.attr("UNLIMITED_CAPACITY") = kUnlimitedCapacity;
    m.def("activation_prob", &activation_prob, py::arg("config"),
          "Probability a device has at least one new update in a frame.");
    m.def("channel_load", &channel_load, py::arg("config"),
          "Average offered load in active devices per slot.");
    m.def("validate_config", &validate_config, py::arg("config"));

    py::class_<DegreeDistribution>(m, "DegreeDistribution")
        .def(py::init([](std::vector<std::vector<double>> table, bool adaptive) {
                 DegreeDistribution d;
                 d.table = std::move(table);
                 d.adaptive = adaptive;
                 return d;
             }),
             py::arg("table"), py::arg("adaptive") = false)
        .def_readwrite("table", &DegreeDistribution::table)
        .def_readwrite("adaptive", &DegreeDistribution::adaptive)
        .def_property_readonly("max_degree", &DegreeDistribution::max_degree)
        .def_property_readonly("rows", &DegreeDistribution::rows)
        .def("row", &DegreeDistribution::row, py::arg("battery"),
             py::return_value_policy::copy)
        .def_static("nonadaptive", &DegreeDistribution::nonadaptive, py::arg("row"),
                    py::arg("num_rows") = 1)
        .def_static("monomial", &DegreeDistribution::monomial, py::arg("degree"),
                    py::arg("max_degree"), py::arg("num_rows") = 1)
        .def_static("battery_monomial", &DegreeDistribution::battery_monomial,
                    py::arg("capacity"), py::arg("max_degree"));

    m.def("validate_distribution", &validate_distribution, py::arg("dist"), py::arg("config"));
    m.def("validate_avoid_mask", &validate_avoid_mask, py::arg("dist"), py::arg("capacity"),
          "True iff every entry with degree above the battery level is zero.");

    py::enum_<Scheme>(m, "Scheme")
        .value("AVOID", Scheme::Avoid)
        .value("IDENTIFY", Scheme::Identify)
        .value("UNLIMITED", Scheme::Unlimited);
    m.def("scheme_from_name", &scheme_from_name, py::arg("name"));
    m.def("scheme_name", &scheme_name, py::arg("scheme"));

    // ------------------------------------------------------------- traces
    py::class_<DeviceRecord>(m, "DeviceRecord")
        .def(py::init([](int device, std::vector<int> intended, std::vector<bool> transmitted) {
                 DeviceRecord r;
                 r.device = device;
                 r.intended = std::move(intended);
                 r.transmitted = transmitted.empty()
                                     ? std::vector<char>(r.intended.size(), 1)
                                     : bools_to_flags(transmitted);
                 return r;
             }),
             py::arg("device"), py::arg("intended"),
             py::arg("transmitted") = std::vector<bool>{},
             "One device's slot schedule; `transmitted` defaults to all replicas sent.")
        .def_readwrite("device", &DeviceRecord::device)
        .def_readwrite("intended", &DeviceRecord::intended)
        .def_property(
            "transmitted",
            [](const DeviceRecord& r) { return flags_to_bools(r.transmitted); },
            [](DeviceRecord& r, const std::vector<bool>& bits) {
                r.transmitted = bools_to_flags(bits);
            });

    py::class_<FrameTrace>(m, "FrameTrace")
        .def_static("build", &FrameTrace::build, py::arg("num_slots"), py::arg("records"),
                    py::arg("frame_index") = 0)
        .def_readonly("num_slots", &FrameTrace::num_slots)
        .def_readonly("frame_index", &FrameTrace::frame_index)
        .def_readonly("devices", &FrameTrace::devices)
        .def_readonly("slot_transmitters", &FrameTrace::slot_transmitters)
        .def_property_readonly("has_drops", &FrameTrace::has_drops)
        .def("degree", &FrameTrace::degree, py::arg("record"))
        .def("transmitted_in", &FrameTrace::transmitted_in, py::arg("record"), py::arg("slot"));

    py::class_<DecodeResult>(m, "DecodeResult")
        .def_readonly("decoded_order", &DecodeResult::decoded_order)
        .def_property_readonly(
            "decoded", [](const DecodeResult& r) { return flags_to_bools(r.decoded); })
        .def_readonly("iterations", &DecodeResult::iterations)
        .def_readonly("subset_attempts", &DecodeResult::subset_attempts)
        .def_readonly("final_residual_sizes", &DecodeResult::final_residual_sizes)
        .def_property_readonly("decoded_count", &DecodeResult::decoded_count);

    m.def("sic_conventional", &sic_conventional, py::arg("trace"),
          py::arg("max_iter") = kUnboundedIterations,
          "Plain peeling; rejects traces with dropped replicas.");
    m.def(
        "sic_genie",
        [](const FrameTrace& trace, long max_iter) { return sic_genie(trace, max_iter); },
        py::arg("trace"), py::arg("max_iter") = kUnboundedIterations,
        "Peeling with oracle knowledge of which replicas were dropped.");
    m.def("sic_identify", &sic_identify, py::arg("trace"),
          py::arg("max_iter") = kUnboundedIterations,
          py::arg("candidate_cap") = kUnboundedCandidates,
          "Candidate-list decoding driven by the intended slots of decoded packets.");

    // ------------------------------------------------------ battery chain
    py::class_<BatteryChain>(m, "BatteryChain")
        .def_readonly("transitions", &BatteryChain::transitions)
        .def_readonly("steady", &BatteryChain::steady);

    m.def("battery_chain", &battery_chain, py::arg("config"), py::arg("dist"),
          "Frame-initial battery kernel and stationary law for the no-drop scheme.");
    m.def("steady_state", &steady_state, py::arg("transitions"),
          py::arg("residual_tol") = 1e-10);
    m.def("average_degree_distribution", &average_degree_distribution, py::arg("phi"),
          py::arg("dist"));

    // ------------------------------------------------------------ analysis
    py::class_<AoiInputs>(m, "AoiInputs")
        .def(py::init([](double alpha, int frame_length, double sigma, double plr) {
                 return AoiInputs{alpha, frame_length, sigma, plr};
             }),
             py::arg("alpha"), py::arg("frame_length"), py::arg("sigma"), py::arg("plr"))
        .def_readwrite("alpha", &AoiInputs::alpha)
        .def_readwrite("frame_length", &AoiInputs::frame_length)
        .def_readwrite("sigma", &AoiInputs::sigma)
        .def_readwrite("plr", &AoiInputs::plr)
        .def_property_readonly("xi", &AoiInputs::xi);

    m.def("average_aoi", &average_aoi, py::arg("inputs"),
          "Closed-form time-average age of information, in slots.");
    m.def("aoi_violation_prob", &aoi_violation_prob, py::arg("theta"), py::arg("inputs"),
          "Closed-form probability that the age exceeds theta slots.");
    m.def("throughput", &throughput, py::arg("load"), py::arg("plr"));
    m.def("plr_lower_bound", &plr_lower_bound, py::arg("config"), py::arg("row0"),
          py::arg("phi0"),
          "Energy-outage floor on the packet loss ratio for empty-battery devices.");
    m.def("last_replica_cdf", &last_replica_cdf, py::arg("degree"), py::arg("frame_length"),
          py::arg("x"));
    m.def("first_energy_pmf", &first_energy_pmf, py::arg("eta"), py::arg("frame_length"),
          py::arg("y"));

    // ----------------------------------------------------------- simulator
    py::class_<SimulationReport>(m, "SimulationReport")
        .def_readonly("frames", &SimulationReport::frames)
        .def_readonly("num_devices", &SimulationReport::num_devices)
        .def_readonly("frame_length", &SimulationReport::frame_length)
        .def_readonly("theta", &SimulationReport::theta)
        .def_readonly("generated", &SimulationReport::generated)
        .def_readonly("lost", &SimulationReport::lost)
        .def_readonly("discarded", &SimulationReport::discarded)
        .def_readonly("decoded", &SimulationReport::decoded)
        .def_readonly("battery_histogram", &SimulationReport::battery_histogram)
        .def_readonly("batch_avp", &SimulationReport::batch_avp)
        .def_readonly("batch_plr", &SimulationReport::batch_plr)
        .def("merge", &SimulationReport::merge, py::arg("other"))
        .def("to_json", &report_to_json, py::arg("indent") = 2);

    m.def("estimate_plr", &estimate_plr, py::arg("report"));
    m.def("plr_standard_error", &plr_standard_error, py::arg("report"));
    m.def("empirical_throughput", &empirical_throughput, py::arg("report"));
    m.def("empirical_aoi_mean", &empirical_aoi_mean, py::arg("report"));
    m.def("empirical_avp", &empirical_avp, py::arg("report"));
    m.def("avp_standard_error", &avp_standard_error, py::arg("report"));
    m.def("empirical_battery_distribution", &empirical_battery_distribution, py::arg("report"));

    m.def("run_simulation", &run_simulation, py::arg("config"), py::arg("dist"),
          py::arg("scheme"), py::arg("num_frames"), py::arg("warmup_frames"), py::arg("seed"),
          py::arg("theta") = 10000.0, py::call_guard<py::gil_scoped_release>(),
          "Simulate the frame process and return the aggregated report.");

    // ----------------------------------------------------------- optimizer
    py::enum_<Objective>(m, "Objective")
        .value("AVERAGE_AOI", Objective::AverageAoi)
        .value("AGE_VIOLATION", Objective::AgeViolation)
        .value("NEGATIVE_THROUGHPUT", Objective::NegativeThroughput);
    m.def("objective_from_name", &objective_from_name, py::arg("name"));
    m.def("objective_name", &objective_name, py::arg("objective"));

    py::class_<NelderMeadOptions>(m, "NelderMeadOptions")
        .def(py::init<>())
        .def_readwrite("diameter_tol", &NelderMeadOptions::diameter_tol)
        .def_readwrite("spread_tol", &NelderMeadOptions::spread_tol)
        .def_readwrite("max_iterations", &NelderMeadOptions::max_iterations)
        .def_readwrite("initial_step", &NelderMeadOptions::initial_step);

    py::class_<OptimizationProblem>(m, "OptimizationProblem")
        .def(py::init<>())
        .def_readwrite("scheme", &OptimizationProblem::scheme)
        .def_readwrite("adaptive", &OptimizationProblem::adaptive)
        .def_readwrite("objective", &OptimizationProblem::objective)
        .def_readwrite("theta", &OptimizationProblem::theta)
        .def_readwrite("eval_frames", &OptimizationProblem::eval_frames)
        .def_readwrite("eval_warmup", &OptimizationProblem::eval_warmup)
        .def_readwrite("restarts", &OptimizationProblem::restarts)
        .def_readwrite("seed", &OptimizationProblem::seed)
        .def_readwrite("final_frames", &OptimizationProblem::final_frames)
        .def_readwrite("jobs", &OptimizationProblem::jobs)
        .def_readwrite("nelder_mead", &OptimizationProblem::nelder_mead);

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("best", &OptimizationResult::best)
        .def_readonly("search_value", &OptimizationResult::search_value)
        .def_readonly("final_value", &OptimizationResult::final_value)
        .def_readonly("final_report", &OptimizationResult::final_report)
        .def_readonly("restart_values", &OptimizationResult::restart_values)
        .def_readonly("best_restart", &OptimizationResult::best_restart);

    m.def("optimize_degree_distribution", &optimize_degree_distribution, py::arg("config"),
          py::arg("problem"), py::call_guard<py::gil_scoped_release>(),
          "Random-restart downhill-simplex search over masked degree tables.");
}
