#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irsa/metrics.hpp"
#include "irsa/model.hpp"
#include "irsa/rng.hpp"
#include "irsa/trace.hpp"

namespace irsa {

enum class Scheme { Avoid, Identify, Unlimited };

const char* scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);  // throws ConfigError on unknown names

// Per-device state carried across frames.
struct DeviceState {
    int battery = 0;                 // frame-start energy; ignored when unlimited
    int pending_generation_slot = 0; // 1..M slot of the latest update in the previous frame; 0 = none
    double age = 0.0;                // age of information at the current frame start, in slots
};

// Activity of one device for the upcoming frame: whether at least one update
// arrived during the previous frame and, if so, the slot of the latest one.
struct TrafficSample {
    bool active = false;
    int generation_slot = 0;  // 1..M within the previous frame
};

// Samples the per-slot Bernoulli(update_prob) arrival process of one elapsed
// frame in O(1): activity with probability 1-(1-p)^M, then the latest-arrival
// slot by inverting its truncated-geometric tail.
TrafficSample generate_traffic(const SystemConfig& config, SplitMix64& rng);

struct ReplicaSchedule {
    int degree = 0;
    std::vector<int> slots;  // sorted, 0-based, distinct; size == degree
};

// Draws a degree from `row` and that many slots uniformly without
// replacement. Degree 0 means the update is discarded (a loss).
ReplicaSchedule schedule_replicas(std::span<const double> row, int frame_length, SplitMix64& rng);

// Reference slot-by-slot frame executor. Walks slots in order; each slot a
// device first harvests (one unit with probability harvest_prob), then
// transmits if the slot is intended and its running energy is positive.
// Harvested units are banked without bound during the frame and the battery
// is clamped to the capacity only when the frame closes, so a unit arriving
// in a slot can fund a replica in that same slot. Degree-0 schedules are
// skipped (no trace record). Returns the trace; updates states' batteries.
FrameTrace run_frame(std::vector<DeviceState>& states,
                     const std::vector<ReplicaSchedule>& schedules,
                     const SystemConfig& config, Scheme scheme,
                     std::uint64_t seed, long frame_index);

// Full Monte-Carlo run: warmup_frames frames are simulated but not measured,
// then num_frames frames accumulate into the report. Deterministic given the
// seed. `theta` is the age-violation threshold sampled into the report.
SimulationReport run_simulation(const SystemConfig& config, const DegreeDistribution& dist,
                                Scheme scheme, long num_frames, long warmup_frames,
                                std::uint64_t seed, double theta = 10000.0);

}  // namespace irsa
