#include "irsa/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "irsa/decode.hpp"

namespace irsa {
namespace {

// Degree draw by CDF inversion; the last nonzero bucket absorbs rounding.
int draw_degree(std::span<const double> row, SplitMix64& rng) {
    const double u = rng.next_double();
    double acc = 0.0;
    int last_support = 0;
    for (std::size_t l = 0; l < row.size(); ++l) {
        if (row[l] <= 0.0) continue;
        acc += row[l];
        last_support = static_cast<int>(l);
        if (u < acc) return static_cast<int>(l);
    }
    return last_support;
}

struct FrameOutcome {
    int active = 0;
    int discarded = 0;
};

}  // namespace

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::Avoid: return "avoid";
        case Scheme::Identify: return "identify";
        case Scheme::Unlimited: return "unlimited";
    }
    return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "avoid") return Scheme::Avoid;
    if (name == "identify") return Scheme::Identify;
    if (name == "unlimited") return Scheme::Unlimited;
    throw ConfigError("unknown scheme '" + name + "' (expected avoid, identify, or unlimited)");
}

TrafficSample generate_traffic(const SystemConfig& config, SplitMix64& rng) {
    const double alpha = config.update_prob;
    const int m = config.frame_length;
    const double w = rng.next_double();
    if (alpha <= 0.0) return {false, 0};
    if (alpha >= 1.0) return {true, m};
    const double sigma = activation_prob(config);
    if (w >= sigma) return {false, 0};
    // w is uniform on [0, sigma); invert the CDF of the gap between the
    // latest arrival and the frame end: P(gap <= t) = (1-(1-alpha)^(t+1))/sigma.
    const double ratio = std::log1p(-w) / std::log1p(-alpha);
    int gap = static_cast<int>(std::ceil(ratio)) - 1;
    gap = std::clamp(gap, 0, m - 1);
    return {true, m - gap};
}

ReplicaSchedule schedule_replicas(std::span<const double> row, int frame_length, SplitMix64& rng) {
    ReplicaSchedule sched;
    sched.degree = draw_degree(row, rng);
    if (sched.degree > 0)
        sched.slots = sample_without_replacement(rng, frame_length, sched.degree);
    return sched;
}

FrameTrace run_frame(std::vector<DeviceState>& states,
                     const std::vector<ReplicaSchedule>& schedules,
                     const SystemConfig& config, Scheme scheme,
                     std::uint64_t seed, long frame_index) {
    if (schedules.size() != states.size())
        throw ConfigError("one schedule per device is required");
    const int m = config.frame_length;
    const bool unlimited = scheme == Scheme::Unlimited || config.unlimited();
    std::vector<DeviceRecord> records;

    for (std::size_t d = 0; d < states.size(); ++d) {
        const ReplicaSchedule& sched = schedules[d];
        SplitMix64 rng = device_stream(seed, frame_index, static_cast<long>(d));
        if (unlimited) {
            if (sched.degree > 0)
                records.push_back({static_cast<int>(d), sched.slots,
                                   std::vector<char>(sched.slots.size(), 1)});
            continue;
        }
        // Energy banked during the frame is unbounded; the capacity bites
        // only when the frame closes.
        int bank = states[d].battery;
        std::vector<char> sent(sched.slots.size(), 0);
        std::size_t next = 0;
        for (int slot = 0; slot < m; ++slot) {
            if (rng.next_double() < config.harvest_prob) ++bank;
            if (next < sched.slots.size() && sched.slots[next] == slot) {
                if (bank > 0) {
                    --bank;
                    sent[next] = 1;
                }
                ++next;
            }
        }
        states[d].battery = std::min(config.battery_capacity, bank);
        if (sched.degree > 0)
            records.push_back({static_cast<int>(d), sched.slots, std::move(sent)});
    }
    return FrameTrace::build(m, std::move(records), frame_index);
}

SimulationReport run_simulation(const SystemConfig& config, const DegreeDistribution& dist,
                                Scheme scheme, long num_frames, long warmup_frames,
                                std::uint64_t seed, double theta) {
    validate_config(config);
    validate_distribution(dist, config);
    const bool unlimited = scheme == Scheme::Unlimited || config.unlimited();
    if (scheme == Scheme::Unlimited && !config.unlimited())
        throw ConfigError("unlimited scheme requires battery_capacity = unlimited");
    if (scheme != Scheme::Unlimited && config.unlimited())
        throw ConfigError("finite-battery schemes require a finite battery_capacity");
    if (scheme == Scheme::Avoid && !validate_avoid_mask(dist, config.battery_capacity))
        throw ConfigError("avoid scheme requires a battery-feasible degree table");
    if (unlimited && dist.adaptive)
        throw ConfigError("adaptive distributions require a finite battery");

    const int m = config.frame_length;
    const long u = config.num_devices;
    const double eta = config.harvest_prob;
    const int capacity = config.battery_capacity;
    const double init_age = config.update_prob > 0.0 ? 1.0 / config.update_prob : 0.0;

    std::vector<DeviceState> states(static_cast<std::size_t>(u));
    for (auto& st : states) {
        st.battery = unlimited ? 0 : capacity;  // start full; warmup mixes the chain
        st.age = init_age;
    }

    SimulationReport report;
    report.num_devices = u;
    report.frame_length = m;
    report.theta = theta;
    if (!unlimited) report.battery_histogram.assign(static_cast<std::size_t>(capacity) + 1, 0.0);

    std::vector<DeviceRecord> records;
    std::vector<TrafficSample> traffic(static_cast<std::size_t>(u));
    std::vector<int> record_of(static_cast<std::size_t>(u));

    long batch_fill = 0;
    double batch_exceed = 0.0, batch_generated = 0.0, batch_lost = 0.0;

    const long total_frames = warmup_frames + num_frames;
    for (long frame = 0; frame < total_frames; ++frame) {
        const bool measured = frame >= warmup_frames;
        records.clear();
        long active = 0;
        long zero_degree = 0;

        for (long d = 0; d < u; ++d) {
            auto& st = states[static_cast<std::size_t>(d)];
            if (measured && !unlimited)
                report.battery_histogram[static_cast<std::size_t>(st.battery)] += 1.0;
            SplitMix64 rng = device_stream(seed, frame, d);
            const TrafficSample tr = generate_traffic(config, rng);
            traffic[static_cast<std::size_t>(d)] = tr;
            record_of[static_cast<std::size_t>(d)] = -1;

            if (!tr.active) {
                if (!unlimited)
                    st.battery = std::min(capacity, st.battery + binomial(rng, m, eta));
                continue;
            }
            ++active;
            const auto& row = dist.row(unlimited ? 0 : st.battery);
            ReplicaSchedule sched = schedule_replicas(row, m, rng);
            if (sched.degree == 0) {
                ++zero_degree;
                if (!unlimited)
                    st.battery = std::min(capacity, st.battery + binomial(rng, m, eta));
                continue;
            }

            std::vector<char> sent(sched.slots.size(), 1);
            if (!unlimited) {
                if (scheme == Scheme::Avoid) {
                    // The mask guarantees degree <= initial battery, so every
                    // replica is funded no matter when harvests land.
                    assert(sched.degree <= st.battery);
                    st.battery = std::min(capacity,
                                          st.battery - sched.degree + binomial(rng, m, eta));
                } else {
                    int bank = st.battery;
                    int prev = 0;  // 1-based slot walk; a gap includes its own slot
                    for (std::size_t k = 0; k < sched.slots.size(); ++k) {
                        const int slot = sched.slots[k] + 1;
                        bank += binomial(rng, slot - prev, eta);
                        if (bank > 0)
                            --bank;
                        else
                            sent[k] = 0;
                        prev = slot;
                    }
                    bank += binomial(rng, m - prev, eta);
                    st.battery = std::min(capacity, bank);
                }
            }
            record_of[static_cast<std::size_t>(d)] = static_cast<int>(records.size());
            records.push_back({static_cast<int>(d), std::move(sched.slots), std::move(sent)});
        }

        FrameTrace trace = FrameTrace::build(m, std::move(records), frame);
        records.clear();
        DecodeResult decoded;
        if (scheme == Scheme::Identify)
            decoded = sic_identify(trace, kUnboundedIterations, kUnboundedCandidates);
        else
            decoded = sic_conventional(trace, kUnboundedIterations);

        // Age bookkeeping at the frame boundary: the age integral over this
        // frame is m*age + m^2/2 per device; deliveries land at the frame end
        // and reset the age to (two frames minus the generation slot, plus
        // one) measured from the slot start of the generating update.
        double frame_integral = 0.0;
        long exceed = 0;
        for (long d = 0; d < u; ++d) {
            auto& st = states[static_cast<std::size_t>(d)];
            frame_integral += m * st.age + 0.5 * m * m;
            const int rec = record_of[static_cast<std::size_t>(d)];
            const bool delivered = rec >= 0 && decoded.decoded[static_cast<std::size_t>(rec)];
            if (delivered)
                st.age = 2.0 * m - traffic[static_cast<std::size_t>(d)].generation_slot + 1.0;
            else
                st.age += m;
            if (st.age + m > theta) ++exceed;
        }

        if (measured) {
            const long dec = static_cast<long>(decoded.decoded_count());
            const long lost = active - dec;
            report.frames += 1;
            report.generated += static_cast<double>(active);
            report.lost += static_cast<double>(lost);
            report.discarded += static_cast<double>(zero_degree);
            report.decoded += static_cast<double>(dec);
            report.generated_sq += static_cast<double>(active) * static_cast<double>(active);
            report.lost_sq += static_cast<double>(lost) * static_cast<double>(lost);
            report.generated_lost += static_cast<double>(active) * static_cast<double>(lost);
            report.decoded_sq += static_cast<double>(dec) * static_cast<double>(dec);
            report.aoi_integral += frame_integral;
            report.aoi_integral_sq += frame_integral * frame_integral;
            report.avp_exceed += static_cast<double>(exceed);
            report.avp_exceed_sq += static_cast<double>(exceed) * static_cast<double>(exceed);

            batch_exceed += static_cast<double>(exceed);
            batch_generated += static_cast<double>(active);
            batch_lost += static_cast<double>(active - dec);
            if (++batch_fill == SimulationReport::kBatchFrames) {
                report.batch_avp.push_back(batch_exceed /
                                           (static_cast<double>(batch_fill) * static_cast<double>(u)));
                report.batch_plr.push_back(batch_generated > 0.0 ? batch_lost / batch_generated : 0.0);
                batch_fill = 0;
                batch_exceed = batch_generated = batch_lost = 0.0;
            }
        }
    }
    return report;
}

}  // namespace irsa
