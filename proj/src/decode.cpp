#include "irsa/decode.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace irsa {
namespace {

bool erase_value(std::vector<int>& v, int x) {
    auto it = std::find(v.begin(), v.end(), x);
    if (it == v.end()) return false;
    v.erase(it);
    return true;
}

void record_residuals(DecodeResult& res, const std::vector<std::vector<int>>& residual) {
    res.final_residual_sizes.resize(residual.size());
    for (std::size_t n = 0; n < residual.size(); ++n)
        res.final_residual_sizes[n] = static_cast<int>(residual[n].size());
}

// Shared peeling core: decode singletons and cancel the decoded device's
// transmitted replicas (which the caller guarantees are known positions).
DecodeResult peel_known_positions(const FrameTrace& trace, long max_iter, std::span<const int> scan_order) {
    const int M = trace.num_slots;
    auto residual = trace.slot_transmitters;
    DecodeResult res;
    res.decoded.assign(trace.devices.size(), 0);

    std::vector<int> order(static_cast<std::size_t>(M));
    if (scan_order.empty())
        std::iota(order.begin(), order.end(), 0);
    else
        order.assign(scan_order.begin(), scan_order.end());

    bool progress = true;
    while (progress && res.iterations < max_iter) {
        progress = false;
        ++res.iterations;
        for (int n : order) {
            auto obs = observe_slot(residual[static_cast<std::size_t>(n)]);
            if (obs.kind != SlotKind::Singleton) continue;
            const int d = obs.device;
            res.decoded[static_cast<std::size_t>(d)] = 1;
            res.decoded_order.push_back(d);
            progress = true;
            const auto& rec = trace.devices[static_cast<std::size_t>(d)];
            for (std::size_t i = 0; i < rec.intended.size(); ++i)
                if (rec.transmitted[i])
                    erase_value(residual[static_cast<std::size_t>(rec.intended[i])], d);
        }
    }
    record_residuals(res, residual);
    return res;
}

}  // namespace

SlotObservation observe_slot(const std::vector<int>& residual) {
    if (residual.empty()) return {SlotKind::Idle, -1};
    if (residual.size() == 1) return {SlotKind::Singleton, residual.front()};
    return {SlotKind::Collision, -1};
}

DecodeResult sic_conventional(const FrameTrace& trace, long max_iter) {
    if (trace.has_drops())
        throw ConfigError("conventional SIC is undefined on traces with dropped replicas");
    return peel_known_positions(trace, max_iter, {});
}

DecodeResult sic_genie(const FrameTrace& trace, long max_iter, std::span<const int> scan_order) {
    return peel_known_positions(trace, max_iter, scan_order);
}

DecodeResult sic_identify(const FrameTrace& trace, long max_iter, int candidate_cap) {
    const int M = trace.num_slots;
    auto residual = trace.slot_transmitters;
    DecodeResult res;
    res.decoded.assign(trace.devices.size(), 0);
    std::vector<std::vector<int>> cand(static_cast<std::size_t>(M));  // candidate lists per slot

    // A decoded packet's replica, once verified in a slot, is canceled there
    // and leaves the slot's candidate list.
    auto confirm_remove = [&](int n, int d) {
        erase_value(residual[static_cast<std::size_t>(n)], d);
        erase_value(cand[static_cast<std::size_t>(n)], d);
    };
    // Decoding out of slot n reveals the packet's intended positions; the
    // other slots gain it as a removal candidate (dropped or not — the
    // receiver cannot tell yet).
    auto on_decode = [&](int n, int d) {
        res.decoded[static_cast<std::size_t>(d)] = 1;
        res.decoded_order.push_back(d);
        erase_value(residual[static_cast<std::size_t>(n)], d);
        for (int slot : trace.devices[static_cast<std::size_t>(d)].intended)
            if (slot != n) cand[static_cast<std::size_t>(slot)].push_back(d);
    };

    bool progress = true;
    while (progress && res.iterations < max_iter) {
        progress = false;
        ++res.iterations;
        for (int n = 0; n < M; ++n) {
            auto& slot_residual = residual[static_cast<std::size_t>(n)];
            auto obs = observe_slot(slot_residual);
            if (obs.kind == SlotKind::Singleton) {
                if (!res.decoded[static_cast<std::size_t>(obs.device)])
                    on_decode(n, obs.device);
                else
                    confirm_remove(n, obs.device);  // known packet: verifies this replica
                progress = true;
            }

            // Hypothesis phase: try to expose a singleton by subtracting a
            // subset of the candidates, smallest subsets first; commit the
            // first success and restart the slot's enumeration.
            bool committed = true;
            while (committed) {
                committed = false;
                if (observe_slot(slot_residual).kind != SlotKind::Collision) break;
                const std::vector<int> list = cand[static_cast<std::size_t>(n)];
                const int k = static_cast<int>(list.size());
                if (k == 0 || k > candidate_cap) break;
                if (k > 62)
                    throw ConfigError("candidate list too large to enumerate");
                for (int s = 1; s <= k && !committed; ++s) {
                    for (std::uint64_t mask = 1; mask < (1ULL << k) && !committed; ++mask) {
                        if (std::popcount(mask) != s) continue;
                        ++res.subset_attempts;
                        // Subtracting a replica that was never sent corrupts
                        // the slot; such hypotheses are discarded untried.
                        bool valid = true;
                        for (int i = 0; i < k && valid; ++i)
                            if ((mask >> i) & 1) valid = trace.transmitted_in(list[static_cast<std::size_t>(i)], n);
                        if (!valid) continue;
                        if (static_cast<int>(slot_residual.size()) - s != 1) continue;
                        for (int i = 0; i < k; ++i)
                            if ((mask >> i) & 1) confirm_remove(n, list[static_cast<std::size_t>(i)]);
                        const int remaining = slot_residual.front();
                        if (!res.decoded[static_cast<std::size_t>(remaining)])
                            on_decode(n, remaining);
                        else
                            confirm_remove(n, remaining);
                        committed = true;
                        progress = true;
                    }
                }
            }
        }
    }
    record_residuals(res, residual);
    return res;
}

}  // namespace irsa
