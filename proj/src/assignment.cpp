#include "yardsim/assignment.hpp"

#include <cstdio>
#include <cstdlib>

namespace yardsim {

namespace {

[[noreturn]] void die(const char* what, StationKind k) {
    std::fprintf(stderr, "yardsim: capacity invariant broken: %s (%s)\n", what,
                 to_string(k));
    std::abort();
}

void check(const StationAvail& a, StationKind k) {
    if (a.occupied < 0 || a.inbound < 0 || a.permanent_holds < 0 ||
        a.departing < 0 || a.departing > a.occupied ||
        a.committed() > a.berth_count)
        die("counter out of range", k);
}

}  // namespace

int AssignmentWorld::gate_distance(StationKind k, Cell from) const {
    if (gate_fields) {
        int32_t d = (*gate_fields)[static_cast<int>(k)].at(from);
        return d < 0 ? -1 : static_cast<int>(d);
    }
    auto d = grid_distance(*layout, from, layout->station(k).gate);
    return d ? *d : -1;
}

void claim_inbound(AssignmentWorld& world, StationKind k) {
    StationAvail& a = world.at(k);
    if (a.free_capacity() <= 0) die("claim without capacity", k);
    ++a.inbound;
    check(a, k);
}

void release_inbound(AssignmentWorld& world, StationKind k) {
    StationAvail& a = world.at(k);
    if (a.inbound <= 0) die("inbound double release", k);
    --a.inbound;
    check(a, k);
}

void convert_inbound_to_occupied(AssignmentWorld& world, StationKind k) {
    StationAvail& a = world.at(k);
    if (a.inbound <= 0) die("gate entry without inbound claim", k);
    --a.inbound;
    ++a.occupied;
    check(a, k);
}

void release_occupied(AssignmentWorld& world, StationKind k) {
    StationAvail& a = world.at(k);
    if (a.occupied <= 0) die("occupied double release", k);
    --a.occupied;
    check(a, k);
}

std::optional<Assignment> assign_one(const Vehicle& v, AssignmentWorld& world) {
    if (v.circuit_complete()) return Assignment{GoalKind::ExitYard};

    // Step 1: keep the previous station assignment while it still has room.
    // Parking is never sticky: parked vehicles re-enter step 2 every pass.
    if (v.goal == GoalKind::Station &&
        world.at(v.goal_station).free_capacity() > 0) {
        claim_inbound(world, v.goal_station);
        return Assignment{GoalKind::Station, v.goal_station};
    }

    // Step 2: remaining stations with met prerequisites and free capacity.
    // Step 3: nearest gate wins; distance ties fall back to kind order.
    int best_dist = -1;
    std::optional<StationKind> best;
    for (StationKind k : remaining_stations(v)) {
        if (!prerequisites_met(v, k)) continue;
        if (world.at(k).free_capacity() <= 0) continue;
        int d = world.gate_distance(k, v.pos);
        if (d < 0) continue;
        if (!best || d < best_dist) {
            best = k;
            best_dist = d;
        }
    }
    if (best) {
        claim_inbound(world, *best);
        return Assignment{GoalKind::Station, *best};
    }

    // Step 4: the parking lot, capacity permitting.
    if (world.at(StationKind::Parking).free_capacity() > 0) {
        claim_inbound(world, StationKind::Parking);
        return Assignment{GoalKind::Park};
    }
    return std::nullopt;
}

ReplanResult replan_assignments(const std::vector<Vehicle*>& candidates,
                                AssignmentWorld& world, double now_s,
                                double expected_circuit_s,
                                const ScoreWeights& weights) {
    ReplanResult result;

    // The pass rebuilds every candidate's claim from scratch in rank order;
    // step 1 re-claims unchanged assignments, so higher-ranked vehicles are
    // never displaced and an unchanged world yields identical assignments.
    std::vector<const Vehicle*> refs;
    refs.reserve(candidates.size());
    for (Vehicle* v : candidates) {
        if (v->goal == GoalKind::Station)
            release_inbound(world, v->goal_station);
        else if (v->goal == GoalKind::Park &&
                 v->status != VehicleStatus::Parked)
            release_inbound(world, StationKind::Parking);
        refs.push_back(v);
    }

    std::vector<const Vehicle*> ranked =
        rank_vehicles(std::move(refs), now_s, expected_circuit_s, weights);

    for (const Vehicle* vc : ranked) {
        Vehicle* v = const_cast<Vehicle*>(vc);
        // A parked vehicle still occupies its parking berth; its own slot
        // counts as free while it is being reassigned, so staying parked
        // (step 4) can never fail. Vehicles already promised elsewhere are
        // departing-credited by the engine.
        StationAvail& park = world.at(StationKind::Parking);
        bool parked = v->status == VehicleStatus::Parked;
        bool credited = parked && (v->goal == GoalKind::Station ||
                                   v->goal == GoalKind::ExitYard);
        if (parked && !credited) ++park.departing;
        auto a = assign_one(*v, world);
        if (parked && !credited) --park.departing;
        if (parked && a && a->kind == GoalKind::Park)
            release_inbound(world, StationKind::Parking);  // stays put
        if (!a) {
            result.impossible = true;
            result.stranded_vehicle = v->id;
            return result;
        }
        result.assignments.emplace_back(v->id, *a);
    }
    return result;
}

}  // namespace yardsim
