#include "yardsim/baseline.hpp"

namespace yardsim {

StationKind next_target(const Vehicle& v, const LoopState& state,
                        std::optional<StationKind> current) {
    int start = 0;
    if (current && *current != StationKind::Parking)
        start = static_cast<int>(*current) + 1;
    for (int off = 0; off < 4; ++off) {
        StationKind k = static_cast<StationKind>((start + off) % 4);
        if (v.completed.contains(k)) continue;
        if (!prerequisites_met(v, k)) continue;
        if (state.was_found_full(k)) continue;
        return k;
    }
    return StationKind::Parking;
}

GateDecision on_gate_arrival(const Vehicle& v, LoopState& state,
                             StationKind station, int free_berths) {
    if (free_berths > 0) {
        state.reset_pass();
        return GateDecision::Enter;
    }
    if (station == StationKind::Parking) {
        bool all_needed_full = true;
        for (StationKind k : kCircuitKinds) {
            if (v.completed.contains(k)) continue;
            if (!prerequisites_met(v, k)) continue;
            if (!state.was_found_full(k)) {
                all_needed_full = false;
                break;
            }
        }
        return all_needed_full ? GateDecision::Stranded
                               : GateDecision::Continue;
    }
    state.mark_full(station);
    return GateDecision::Continue;
}

}  // namespace yardsim
