#include "irsa/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace irsa {
namespace {

void require_frames(const SimulationReport& report) {
    if (report.frames <= 0) throw std::runtime_error("report holds no measured frames");
}

}  // namespace

void SimulationReport::merge(const SimulationReport& other) {
    if (other.frames == 0) return;
    if (frames == 0) {
        *this = other;
        return;
    }
    if (num_devices != other.num_devices || frame_length != other.frame_length || theta != other.theta)
        throw std::runtime_error("cannot merge reports from different scenarios");
    if (battery_histogram.size() != other.battery_histogram.size())
        throw std::runtime_error("cannot merge reports with different battery ranges");
    frames += other.frames;
    generated += other.generated;
    lost += other.lost;
    discarded += other.discarded;
    decoded += other.decoded;
    generated_sq += other.generated_sq;
    lost_sq += other.lost_sq;
    generated_lost += other.generated_lost;
    decoded_sq += other.decoded_sq;
    aoi_integral += other.aoi_integral;
    aoi_integral_sq += other.aoi_integral_sq;
    avp_exceed += other.avp_exceed;
    avp_exceed_sq += other.avp_exceed_sq;
    for (std::size_t i = 0; i < battery_histogram.size(); ++i)
        battery_histogram[i] += other.battery_histogram[i];
    batch_avp.insert(batch_avp.end(), other.batch_avp.begin(), other.batch_avp.end());
    batch_plr.insert(batch_plr.end(), other.batch_plr.begin(), other.batch_plr.end());
}

double estimate_plr(const SimulationReport& report) {
    if (report.generated <= 0.0)
        throw std::runtime_error("no packets generated; loss ratio is undefined");
    return report.lost / report.generated;
}

double plr_standard_error(const SimulationReport& report) {
    const double f = static_cast<double>(report.frames);
    if (report.frames < 2 || report.generated <= 0.0)
        return std::numeric_limits<double>::infinity();
    const double p = report.lost / report.generated;
    // Centered per-frame second moments of (lost - p * generated).
    const double sll = report.lost_sq - report.lost * report.lost / f;
    const double sgg = report.generated_sq - report.generated * report.generated / f;
    const double slg = report.generated_lost - report.lost * report.generated / f;
    const double var_d = std::max(0.0, sll - 2.0 * p * slg + p * p * sgg) / (f - 1.0);
    const double mean_g = report.generated / f;
    return std::sqrt(var_d / f) / mean_g;
}

double empirical_throughput(const SimulationReport& report) {
    require_frames(report);
    return report.decoded / (static_cast<double>(report.frames) * report.frame_length);
}

double empirical_aoi_mean(const SimulationReport& report) {
    require_frames(report);
    const double slots = static_cast<double>(report.frames) * report.frame_length;
    return report.aoi_integral / (slots * static_cast<double>(report.num_devices));
}

double empirical_avp(const SimulationReport& report) {
    require_frames(report);
    return report.avp_exceed / (static_cast<double>(report.frames) * report.num_devices);
}

double avp_standard_error(const SimulationReport& report) {
    const double f = static_cast<double>(report.frames);
    if (report.frames < 2) return std::numeric_limits<double>::infinity();
    const double sxx = report.avp_exceed_sq - report.avp_exceed * report.avp_exceed / f;
    const double var = std::max(0.0, sxx) / (f - 1.0);
    return std::sqrt(var / f) / static_cast<double>(report.num_devices);
}

std::vector<double> empirical_battery_distribution(const SimulationReport& report) {
    require_frames(report);
    if (report.battery_histogram.empty())
        throw std::runtime_error("battery histogram is not tracked under unlimited energy");
    const double total =
        std::accumulate(report.battery_histogram.begin(), report.battery_histogram.end(), 0.0);
    if (total <= 0.0) throw std::runtime_error("battery histogram is empty");
    std::vector<double> dist(report.battery_histogram.size());
    for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = report.battery_histogram[i] / total;
    return dist;
}

std::string report_to_json(const SimulationReport& report, int indent) {
    nlohmann::json j;
    j["frames"] = report.frames;
    j["num_devices"] = report.num_devices;
    j["frame_length"] = report.frame_length;
    j["theta"] = report.theta;
    j["generated"] = report.generated;
    j["lost"] = report.lost;
    j["discarded"] = report.discarded;
    j["decoded"] = report.decoded;
    j["generated_sq"] = report.generated_sq;
    j["lost_sq"] = report.lost_sq;
    j["generated_lost"] = report.generated_lost;
    j["decoded_sq"] = report.decoded_sq;
    j["aoi_integral"] = report.aoi_integral;
    j["aoi_integral_sq"] = report.aoi_integral_sq;
    j["avp_exceed"] = report.avp_exceed;
    j["avp_exceed_sq"] = report.avp_exceed_sq;
    j["battery_histogram"] = report.battery_histogram;
    j["batch_frames"] = SimulationReport::kBatchFrames;
    j["batch_avp"] = report.batch_avp;
    j["batch_plr"] = report.batch_plr;
    if (report.frames > 0) {
        if (report.generated > 0.0) {
            j["plr"] = estimate_plr(report);
            j["plr_se"] = plr_standard_error(report);
        }
        j["throughput"] = empirical_throughput(report);
        j["aoi_mean"] = empirical_aoi_mean(report);
        j["avp"] = empirical_avp(report);
        j["avp_se"] = avp_standard_error(report);
        if (!report.battery_histogram.empty())
            j["battery_distribution"] = empirical_battery_distribution(report);
    }
    return j.dump(indent);
}

}  // namespace irsa
