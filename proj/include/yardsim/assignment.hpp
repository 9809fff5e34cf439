#ifndef YARDSIM_ASSIGNMENT_HPP
#define YARDSIM_ASSIGNMENT_HPP

#include <array>
#include <optional>
#include <vector>

#include "yardsim/layout.hpp"
#include "yardsim/scoring.hpp"
#include "yardsim/vehicle.hpp"

namespace yardsim {

// Live capacity picture of one station. An inbound assignment reserves a
// berth: a berth promised is a berth held. A vehicle whose service is done
// but which has not yet cleared the bay (departing) already frees its berth
// for assignment purposes; the gate hand-off keeps the physical bay unique.
struct StationAvail {
    int berth_count = 0;
    int occupied = 0;
    int permanent_holds = 0;
    int inbound = 0;
    int departing = 0;  // counted within occupied

    int committed() const {
        return occupied - departing + permanent_holds + inbound;
    }
    int free_capacity() const { return berth_count - committed(); }
    bool physically_full() const {
        return occupied + permanent_holds >= berth_count;
    }
};

// What the orchestrated controller sees when assigning: the layout, live
// capacities and the static gate-distance fields.
struct AssignmentWorld {
    const YardLayout* layout = nullptr;
    std::array<StationAvail, kStationKindCount> avail{};
    // Distance fields rooted at each station gate (4-connected metric is
    // symmetric, so field-at-position == distance position -> gate).
    const std::array<DistanceField, kStationKindCount>* gate_fields = nullptr;

    StationAvail& at(StationKind k) { return avail[static_cast<int>(k)]; }
    const StationAvail& at(StationKind k) const {
        return avail[static_cast<int>(k)];
    }
    // -1 when unreachable.
    int gate_distance(StationKind k, Cell from) const;
};

struct Assignment {
    GoalKind kind = GoalKind::None;
    StationKind station = StationKind::Charging;  // valid when kind==Station

    friend bool operator==(const Assignment& a, const Assignment& b) {
        return a.kind == b.kind &&
               (a.kind != GoalKind::Station || a.station == b.station);
    }
};

// One vehicle through the assignment steps:
//   1) keep the previous station assignment if that station has capacity;
//   2) filter remaining stations by prerequisites and free capacity;
//   3) take the station with the nearest gate (ties: fixed kind order);
//   4) otherwise the parking lot.
// Vehicles with a complete circuit are routed to the exit before step 1.
// Claims the chosen berth (inbound) in `world`. nullopt when parking has no
// capacity either: the caller treats that as a facility failure.
// The vehicle's own previous claim must have been released beforehand.
std::optional<Assignment> assign_one(const Vehicle& v, AssignmentWorld& world);

// Capacity bookkeeping. All aborts are deliberate: releasing what is not
// held is a bug, never a recoverable condition.
void claim_inbound(AssignmentWorld& world, StationKind k);
void release_inbound(AssignmentWorld& world, StationKind k);
void convert_inbound_to_occupied(AssignmentWorld& world, StationKind k);
void release_occupied(AssignmentWorld& world, StationKind k);

struct ReplanResult {
    bool impossible = false;
    VehicleId stranded_vehicle = -1;
    // (vehicle, assignment) in the processed rank order.
    std::vector<std::pair<VehicleId, Assignment>> assignments;
};

// Full pass over every non-serving vehicle in priority order. Releases the
// candidates' existing inbound claims, then reassigns through assign_one;
// step 1 keeps every assignment whose station still has room, so a pass
// with unchanged state is a no-op. Stops at the first vehicle for which
// even parking is full.
ReplanResult replan_assignments(const std::vector<Vehicle*>& candidates,
                                AssignmentWorld& world, double now_s,
                                double expected_circuit_s,
                                const ScoreWeights& weights = {});

}  // namespace yardsim

#endif
