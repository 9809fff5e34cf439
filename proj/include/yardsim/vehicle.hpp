#ifndef YARDSIM_VEHICLE_HPP
#define YARDSIM_VEHICLE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "yardsim/layout.hpp"
#include "yardsim/pathing.hpp"

namespace yardsim {

using VehicleId = int32_t;

enum class VehicleStatus : int {
    Moving = 0,
    Serving = 1,
    Parked = 2,
    Stranded = 3,
    Exited = 4,
    Impounded = 5,  // failed inspection; permanently holds a parking berth
};

const char* to_string(VehicleStatus status);

// Bitmask over the four circuit kinds.
struct CompletedSet {
    uint8_t bits = 0;

    bool contains(StationKind k) const {
        return (bits >> static_cast<int>(k)) & 1u;
    }
    void add(StationKind k) { bits |= static_cast<uint8_t>(1u << static_cast<int>(k)); }
    int count() const {
        int n = 0;
        for (StationKind k : kCircuitKinds) n += contains(k) ? 1 : 0;
        return n;
    }
    bool all() const { return count() == 4; }
    friend bool operator==(CompletedSet a, CompletedSet b) {
        return a.bits == b.bits;
    }
};

enum class GoalKind : int { None = 0, Station = 1, Park = 2, ExitYard = 3 };

struct Vehicle {
    VehicleId id = 0;
    double entry_time_s = 0;
    Tick entry_tick = 0;

    // Current cell; for a vehicle inside a station or parking this is the
    // gate it re-enters the grid at.
    Cell pos;
    bool on_grid = false;
    VehicleStatus status = VehicleStatus::Moving;

    // Sampled at entrance; doubles as the charging service duration and
    // drops to 0 exactly when Charging completes.
    double remaining_charge_s = 0;
    CompletedSet completed;
    double trust_score = 0;

    GoalKind goal = GoalKind::None;
    StationKind goal_station = StationKind::Charging;  // valid when goal==Station

    std::optional<SpaceTimePath> path;

    // Per-vehicle pre-drawn values (fixed at entrance), indexed by kind.
    // service_s[Charging] == remaining_charge_s at entry.
    std::array<double, kStationKindCount> service_s{};
    bool inspection_fails = false;

    bool circuit_complete() const { return completed.all(); }
    bool terminal() const {
        return status == VehicleStatus::Stranded ||
               status == VehicleStatus::Exited ||
               status == VehicleStatus::Impounded;
    }
};

// The four circuit kinds minus completed, in fixed kind order. Never
// includes Parking.
std::vector<StationKind> remaining_stations(const Vehicle& v);

// Charging/Inspection/Cleaning/Parking have no prerequisites; Loading
// requires the other three circuit kinds to be complete.
bool prerequisites_met(const Vehicle& v, StationKind kind);

}  // namespace yardsim

#endif
