#include "yardsim/vehicle.hpp"

namespace yardsim {

const char* to_string(VehicleStatus status) {
    switch (status) {
        case VehicleStatus::Moving: return "moving";
        case VehicleStatus::Serving: return "serving";
        case VehicleStatus::Parked: return "parked";
        case VehicleStatus::Stranded: return "stranded";
        case VehicleStatus::Exited: return "exited";
        case VehicleStatus::Impounded: return "impounded";
    }
    return "?";
}

std::vector<StationKind> remaining_stations(const Vehicle& v) {
    std::vector<StationKind> out;
    for (StationKind k : kCircuitKinds)
        if (!v.completed.contains(k)) out.push_back(k);
    return out;
}

bool prerequisites_met(const Vehicle& v, StationKind kind) {
    if (kind != StationKind::Loading) return true;
    return v.completed.contains(StationKind::Charging) &&
           v.completed.contains(StationKind::Inspection) &&
           v.completed.contains(StationKind::Cleaning);
}

}  // namespace yardsim
