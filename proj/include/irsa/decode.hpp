#pragma once

#include <limits>
#include <span>
#include <vector>

#include "irsa/trace.hpp"

namespace irsa {

inline constexpr long kUnboundedIterations = std::numeric_limits<long>::max();
inline constexpr int kUnboundedCandidates = std::numeric_limits<int>::max();

enum class SlotKind { Idle, Singleton, Collision };

struct SlotObservation {
    SlotKind kind = SlotKind::Idle;
    int device = -1;  // record index, only meaningful for Singleton
};

// What the receiver learns from a slot's residual signal: nothing, one
// decodable packet, or an unresolvable superposition.
SlotObservation observe_slot(const std::vector<int>& residual);

struct DecodeResult {
    std::vector<int> decoded_order;        // record indices, in decode order
    std::vector<char> decoded;             // per record
    long iterations = 0;                   // full passes over the slots
    long subset_attempts = 0;              // removal hypotheses tested
    std::vector<int> final_residual_sizes; // per slot

    int decoded_count() const {
        int n = 0;
        for (char d : decoded) n += d != 0;
        return n;
    }
};

// Plain peeling; only defined on drop-free traces (throws otherwise). After
// decoding a singleton, removes the device's replicas from its intended slots.
DecodeResult sic_conventional(const FrameTrace& trace, long max_iter = kUnboundedIterations);

// Peeling on the effective graph: the decoder knows which replicas were
// dropped and removes only transmitted ones. `scan_order` optionally fixes
// the per-pass slot visiting order (used to exercise peeling confluence).
DecodeResult sic_genie(const FrameTrace& trace, long max_iter = kUnboundedIterations,
                       std::span<const int> scan_order = {});

// Candidate-list decoding: each decoded packet reveals its intended slots;
// per slot the receiver hypothesizes subsets of the decoded candidates,
// keeping a removal only when it exposes a clean singleton. Slots whose
// candidate list exceeds candidate_cap are skipped for subset enumeration.
DecodeResult sic_identify(const FrameTrace& trace, long max_iter = kUnboundedIterations,
                          int candidate_cap = kUnboundedCandidates);

}  // namespace irsa
