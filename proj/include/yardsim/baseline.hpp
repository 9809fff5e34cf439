#ifndef YARDSIM_BASELINE_HPP
#define YARDSIM_BASELINE_HPP

#include <optional>

#include "yardsim/vehicle.hpp"

namespace yardsim {

// Fixed circulation order of the isolated controller:
// Charging -> Inspection -> Cleaning -> Loading -> Parking -> Charging ...
// Circuit kinds only; Parking is entered when a full pass found every
// reachable task full.
inline constexpr std::array<StationKind, 4> kLoopOrder = {
    StationKind::Charging, StationKind::Inspection, StationKind::Cleaning,
    StationKind::Loading};

// Per-vehicle pass bookkeeping: which needed stations were found full since
// the vehicle last entered a station or parking.
struct LoopState {
    uint8_t found_full = 0;

    bool was_found_full(StationKind k) const {
        return (found_full >> static_cast<int>(k)) & 1u;
    }
    void mark_full(StationKind k) {
        found_full |= static_cast<uint8_t>(1u << static_cast<int>(k));
    }
    void reset_pass() { found_full = 0; }
};

// The next station in loop order after `current` (nullopt = at entrance or
// leaving parking, which resumes at Charging), skipping kinds already
// completed, kinds whose prerequisites are unmet, and kinds already found
// full this pass. Returns Parking when a full pass found every eligible
// station full. Deliberately takes no occupancy inputs: isolated vehicles
// learn capacity only at gates.
StationKind next_target(const Vehicle& v, const LoopState& state,
                        std::optional<StationKind> current);

enum class GateDecision : int { Enter = 0, Continue = 1, Stranded = 2 };

// Decision on arrival at a station gate, given only that station's free
// berth count at this instant. Entering any station or parking resets the
// pass; a full parking after a fully failed pass strands the vehicle.
GateDecision on_gate_arrival(const Vehicle& v, LoopState& state,
                             StationKind station, int free_berths);

}  // namespace yardsim

#endif
