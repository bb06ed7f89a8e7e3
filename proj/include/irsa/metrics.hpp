#pragma once

#include <string>
#include <vector>

#include "irsa/model.hpp"

namespace irsa {

// Aggregated statistics over the measured frames of one or more simulation
// runs. Counts are kept as doubles (exact for integer values at any
// reachable scale) together with per-frame second moments so that standard
// errors of the ratio estimators can be reported. Reports merge
// associatively across independent replications.
struct SimulationReport {
    long frames = 0;           // measured frames
    long num_devices = 0;
    int frame_length = 0;
    double theta = 0.0;        // age-violation threshold the samples were taken against

    // Per-frame totals and second moments (sums over measured frames).
    double generated = 0.0;    // active devices (one packet each)
    double lost = 0.0;         // degree-0 discards + undecoded packets
    double discarded = 0.0;    // degree-0 discards alone
    double decoded = 0.0;
    double generated_sq = 0.0;
    double lost_sq = 0.0;
    double generated_lost = 0.0;
    double decoded_sq = 0.0;

    // Age of information. `aoi_integral` sums the exact per-frame integral of
    // each device's age process; dividing by devices*slots gives the
    // per-device time average.
    double aoi_integral = 0.0;
    double aoi_integral_sq = 0.0;  // per-frame totals, squared

    // End-of-frame age-violation samples: count of devices whose post-reset
    // end-of-frame age plus one frame exceeded theta.
    double avp_exceed = 0.0;
    double avp_exceed_sq = 0.0;

    // Frame-start battery levels over all devices and measured frames
    // (size capacity+1); empty when the battery is unlimited.
    std::vector<double> battery_histogram;

    // Batch means over kBatchFrames-frame windows: exceed fraction and loss
    // ratio per batch. Age exceedance persists across frames (episodes last
    // ~1/xi frames), so per-frame moments understate the AVP estimator's
    // variance; 500-frame batches are long against that correlation time.
    // A trailing partial batch is dropped. Merging concatenates.
    static constexpr long kBatchFrames = 500;
    std::vector<double> batch_avp;
    std::vector<double> batch_plr;

    void merge(const SimulationReport& other);
};

// lost / generated; throws std::runtime_error when nothing was generated.
double estimate_plr(const SimulationReport& report);

// Delta-method standard error of the loss ratio, treating frames as the
// independent unit (devices within a frame are correlated through decoding).
double plr_standard_error(const SimulationReport& report);

// Decoded packets per slot, counted directly.
double empirical_throughput(const SimulationReport& report);

// Per-device time-average age over the measured window.
double empirical_aoi_mean(const SimulationReport& report);

// Fraction of end-of-frame samples exceeding the report's theta.
double empirical_avp(const SimulationReport& report);
double avp_standard_error(const SimulationReport& report);

// Normalized frame-start battery histogram; throws for unlimited-energy runs.
std::vector<double> empirical_battery_distribution(const SimulationReport& report);

// Serialize every counter plus the derived estimates as a JSON document.
std::string report_to_json(const SimulationReport& report, int indent = 2);

}  // namespace irsa
