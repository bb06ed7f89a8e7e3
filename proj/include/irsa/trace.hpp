#pragma once

#include <vector>

#include "irsa/model.hpp"

namespace irsa {

// One active device's schedule within a frame. Slots are 0-based.
struct DeviceRecord {
    int device = 0;                    // global device id
    std::vector<int> intended;         // sorted, distinct slot indices
    std::vector<char> transmitted;     // parallel to intended; 0 = dropped
};

// Ground-truth record of one frame. `slot_transmitters` holds indices into
// `devices` (not device ids) for every replica that was actually sent.
struct FrameTrace {
    int frame_index = 0;
    int num_slots = 0;
    std::vector<DeviceRecord> devices;
    std::vector<std::vector<int>> slot_transmitters;

    bool has_drops() const;
    bool transmitted_in(int record, int slot) const;
    int degree(int record) const { return static_cast<int>(devices[static_cast<std::size_t>(record)].intended.size()); }

    // Fills slot_transmitters from the records and checks the invariants
    // (sorted distinct slots in range, flag vector shapes). Throws ConfigError.
    static FrameTrace build(int num_slots, std::vector<DeviceRecord> records, int frame_index = 0);
};

}  // namespace irsa
