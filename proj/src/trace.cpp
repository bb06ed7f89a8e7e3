#include "irsa/trace.hpp"

#include <algorithm>

namespace irsa {

bool FrameTrace::has_drops() const {
    for (const auto& rec : devices)
        for (char sent : rec.transmitted)
            if (!sent) return true;
    return false;
}

bool FrameTrace::transmitted_in(int record, int slot) const {
    const auto& rec = devices[static_cast<std::size_t>(record)];
    auto it = std::lower_bound(rec.intended.begin(), rec.intended.end(), slot);
    if (it == rec.intended.end() || *it != slot) return false;
    return rec.transmitted[static_cast<std::size_t>(it - rec.intended.begin())] != 0;
}

FrameTrace FrameTrace::build(int num_slots, std::vector<DeviceRecord> records, int frame_index) {
    FrameTrace trace;
    trace.frame_index = frame_index;
    trace.num_slots = num_slots;
    trace.devices = std::move(records);
    trace.slot_transmitters.assign(static_cast<std::size_t>(num_slots), {});
    for (std::size_t r = 0; r < trace.devices.size(); ++r) {
        const auto& rec = trace.devices[r];
        if (rec.transmitted.size() != rec.intended.size())
            throw ConfigError("frame trace: transmitted flags must parallel intended slots");
        for (std::size_t i = 0; i < rec.intended.size(); ++i) {
            int slot = rec.intended[i];
            if (slot < 0 || slot >= num_slots)
                throw ConfigError("frame trace: slot index out of range");
            if (i > 0 && rec.intended[i - 1] >= slot)
                throw ConfigError("frame trace: intended slots must be sorted and distinct");
            if (rec.transmitted[i])
                trace.slot_transmitters[static_cast<std::size_t>(slot)].push_back(static_cast<int>(r));
        }
    }
    return trace;
}

}  // namespace irsa
