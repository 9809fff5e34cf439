#include <doctest.h>

#include "yardsim/assignment.hpp"
#include "yardsim/oracles.hpp"
#include "yardsim/rng.hpp"

using namespace yardsim;

namespace {

// gates: c(0,1) i(1,1) w(2,1) l(3,1) p(4,1), entrance (0,2), exit (5,2)
const YardLayout& mini() {
    static YardLayout l = parse_layout(
        "CIWLP#\n"
        "ciwlp.\n"
        "E....X\n");
    return l;
}

struct WorldFixture {
    std::array<DistanceField, kStationKindCount> fields;
    AssignmentWorld world;

    explicit WorldFixture(std::array<int, kStationKindCount> berths,
                          std::array<int, kStationKindCount> occupied = {}) {
        const YardLayout& l = mini();
        for (int k = 0; k < kStationKindCount; ++k)
            fields[static_cast<size_t>(k)] =
                distance_field(l, l.stations[static_cast<size_t>(k)].gate);
        world.layout = &l;
        world.gate_fields = &fields;
        for (int k = 0; k < kStationKindCount; ++k) {
            world.avail[static_cast<size_t>(k)].berth_count = berths[static_cast<size_t>(k)];
            world.avail[static_cast<size_t>(k)].occupied = occupied[static_cast<size_t>(k)];
        }
    }
};

Vehicle vehicle_at(VehicleId id, Cell pos, CompletedSet done = {},
                   GoalKind goal = GoalKind::None,
                   StationKind station = StationKind::Charging) {
    Vehicle v;
    v.id = id;
    v.pos = pos;
    v.on_grid = true;
    v.completed = done;
    v.goal = goal;
    v.goal_station = station;
    v.remaining_charge_s = 3600;
    return v;
}

}  // namespace

TEST_CASE("assign_one: previous assignment is kept while it has capacity") {
    WorldFixture fx({1, 1, 1, 1, 1});
    // Standing right next to the inspection gate, but previously assigned
    // to cleaning.
    Vehicle v = vehicle_at(1, {1, 2}, {}, GoalKind::Station,
                           StationKind::Cleaning);
    auto a = assign_one(v, fx.world);
    REQUIRE(a.has_value());
    CHECK(a->kind == GoalKind::Station);
    CHECK(a->station == StationKind::Cleaning);
    CHECK(fx.world.at(StationKind::Cleaning).inbound == 1);
}

TEST_CASE("assign_one: loading without prerequisites falls through to parking") {
    // Only loading has free capacity; an empty-circuit vehicle cannot use it.
    WorldFixture fx({1, 1, 1, 1, 1}, {1, 1, 1, 0, 0});
    Vehicle v = vehicle_at(1, {0, 2});
    auto a = assign_one(v, fx.world);
    REQUIRE(a.has_value());
    CHECK(a->kind == GoalKind::Park);
    CHECK(fx.world.at(StationKind::Parking).inbound == 1);
}

TEST_CASE("assign_one: everything full is impossible") {
    WorldFixture fx({1, 1, 1, 1, 1}, {1, 1, 1, 1, 1});
    Vehicle v = vehicle_at(1, {0, 2});
    CHECK(!assign_one(v, fx.world).has_value());
}

TEST_CASE("assign_one: completed circuit heads for the exit") {
    WorldFixture fx({1, 1, 1, 1, 1});
    CompletedSet all;
    for (StationKind k : kCircuitKinds) all.add(k);
    Vehicle v = vehicle_at(1, {3, 2}, all);
    auto a = assign_one(v, fx.world);
    REQUIRE(a.has_value());
    CHECK(a->kind == GoalKind::ExitYard);
    for (int k = 0; k < kStationKindCount; ++k)
        CHECK(fx.world.avail[static_cast<size_t>(k)].inbound == 0);
}

TEST_CASE("assign_one: nearest eligible station, ties by kind order") {
    // Vehicle on the road below the inspection gate: inspection is
    // distance 1, charging and cleaning distance 2.
    WorldFixture fx({1, 1, 1, 1, 1});
    Vehicle v = vehicle_at(1, {1, 2});
    auto a = assign_one(v, fx.world);
    REQUIRE(a.has_value());
    CHECK(a->station == StationKind::Inspection);

    // With inspection full, charging and cleaning tie at distance 2 and
    // the fixed kind order picks charging.
    WorldFixture fx2({1, 1, 1, 1, 1}, {0, 1, 0, 0, 0});
    auto a2 = assign_one(v, fx2.world);
    REQUIRE(a2.has_value());
    CHECK(a2->station == StationKind::Charging);
}

TEST_CASE("capacity bookkeeping: claim, enter, finish, reroute") {
    WorldFixture fx({2, 1, 1, 1, 1});
    claim_inbound(fx.world, StationKind::Charging);
    CHECK(fx.world.at(StationKind::Charging).inbound == 1);

    // vehicle reaches the gate: the promise becomes occupancy
    convert_inbound_to_occupied(fx.world, StationKind::Charging);
    CHECK(fx.world.at(StationKind::Charging).inbound == 0);
    CHECK(fx.world.at(StationKind::Charging).occupied == 1);

    // service complete
    release_occupied(fx.world, StationKind::Charging);
    CHECK(fx.world.at(StationKind::Charging).occupied == 0);

    // reroute: cleaning promise moves to parking
    claim_inbound(fx.world, StationKind::Cleaning);
    release_inbound(fx.world, StationKind::Cleaning);
    claim_inbound(fx.world, StationKind::Parking);
    CHECK(fx.world.at(StationKind::Cleaning).inbound == 0);
    CHECK(fx.world.at(StationKind::Parking).inbound == 1);
}

TEST_CASE("replan: single vehicle in an empty yard takes the nearest station") {
    WorldFixture fx({2, 2, 2, 2, 2});
    Vehicle v = vehicle_at(1, {0, 2});  // entrance, next to the charging gate
    std::vector<Vehicle*> vs = {&v};
    ReplanResult r = replan_assignments(vs, fx.world, 0, 6600);
    REQUIRE(!r.impossible);
    REQUIRE(r.assignments.size() == 1);
    CHECK(r.assignments[0].second.kind == GoalKind::Station);
    CHECK(r.assignments[0].second.station == StationKind::Charging);
}

TEST_CASE("replan: higher priority takes the last berth, lower parks") {
    WorldFixture fx({1, 1, 1, 1, 5}, {0, 1, 1, 1, 0});
    // One free charging berth. Two fresh vehicles, priority split by trust.
    Vehicle hi = vehicle_at(1, {0, 2});
    hi.trust_score = 9;
    Vehicle lo = vehicle_at(2, {0, 2});
    lo.trust_score = 1;
    std::vector<Vehicle*> vs = {&lo, &hi};
    ReplanResult r = replan_assignments(vs, fx.world, 0, 6600);
    REQUIRE(!r.impossible);
    REQUIRE(r.assignments.size() == 2);
    CHECK(r.assignments[0].first == 1);
    CHECK(r.assignments[0].second.kind == GoalKind::Station);
    CHECK(r.assignments[0].second.station == StationKind::Charging);
    CHECK(r.assignments[1].first == 2);
    CHECK(r.assignments[1].second.kind == GoalKind::Park);

    // brute-force agreement, fed in the same rank order
    oracle::AssignWorld ow;
    ow.layout = &mini();
    ow.free = {1, 0, 0, 0, 5};
    auto o1 = oracle::assign_steps({1, {0, 2}, {}, std::nullopt}, ow);
    auto o2 = oracle::assign_steps({2, {0, 2}, {}, std::nullopt}, ow);
    CHECK(o1.outcome == oracle::AssignOutcome::ToStation);
    CHECK(o1.station == StationKind::Charging);
    CHECK(o2.outcome == oracle::AssignOutcome::ToParking);
}

TEST_CASE("replan: stable under repetition and capacity-safe") {
    WorldFixture fx({2, 2, 2, 2, 3});
    std::vector<Vehicle> pool;
    Rng rng(5);
    for (int i = 0; i < 6; ++i) {
        Vehicle v = vehicle_at(static_cast<VehicleId>(i),
                               {1 + static_cast<int>(i % 4), 2});
        v.trust_score = rng.uniform(0, 10);
        v.entry_time_s = i;
        pool.push_back(v);
    }
    std::vector<Vehicle*> vs;
    for (auto& v : pool) vs.push_back(&v);

    ReplanResult first = replan_assignments(vs, fx.world, 100, 6600);
    REQUIRE(!first.impossible);
    // apply assignments to the vehicles as the engine would
    for (auto& [vid, a] : first.assignments) {
        pool[static_cast<size_t>(vid)].goal = a.kind;
        if (a.kind == GoalKind::Station)
            pool[static_cast<size_t>(vid)].goal_station = a.station;
    }
    for (int k = 0; k < kStationKindCount; ++k) {
        const StationAvail& a = fx.world.avail[static_cast<size_t>(k)];
        CHECK(a.committed() <= a.berth_count);
    }

    ReplanResult second = replan_assignments(vs, fx.world, 100, 6600);
    REQUIRE(!second.impossible);
    REQUIRE(second.assignments.size() == first.assignments.size());
    for (size_t i = 0; i < first.assignments.size(); ++i) {
        CHECK(second.assignments[i].first == first.assignments[i].first);
        CHECK(second.assignments[i].second == first.assignments[i].second);
    }
}

TEST_CASE("replan matches the literal-steps oracle on random small worlds") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        std::array<int, kStationKindCount> berths;
        std::array<int, kStationKindCount> occ;
        for (int k = 0; k < kStationKindCount; ++k) {
            berths[static_cast<size_t>(k)] = 1 + static_cast<int>(rng.next_u64() % 2);
            occ[static_cast<size_t>(k)] = static_cast<int>(rng.next_u64() %
                                       (berths[static_cast<size_t>(k)] + 1));
        }
        WorldFixture fx(berths, occ);
        oracle::AssignWorld ow;
        ow.layout = &mini();
        for (int k = 0; k < kStationKindCount; ++k)
            ow.free[static_cast<size_t>(k)] = berths[static_cast<size_t>(k)] - occ[static_cast<size_t>(k)];

        int n = 1 + static_cast<int>(rng.next_u64() % 4);
        std::vector<Vehicle> pool;
        for (int i = 0; i < n; ++i) {
            Vehicle v = vehicle_at(static_cast<VehicleId>(i),
                                   {static_cast<int>(rng.next_u64() % 5), 2});
            v.trust_score = rng.uniform(0, 10);
            v.remaining_charge_s = rng.uniform(60, 7200);
            // random completed set honoring loading-last
            int steps = static_cast<int>(rng.next_u64() % 5);
            for (int s = 0; s < steps && s < 3; ++s)
                v.completed.add(kCircuitKinds[static_cast<size_t>(s)]);
            if (steps == 4)
                for (StationKind k : kCircuitKinds) v.completed.add(k);
            pool.push_back(v);
        }
        std::vector<Vehicle*> vs;
        for (auto& v : pool) vs.push_back(&v);

        ReplanResult mine = replan_assignments(vs, fx.world, 0, 6600);

        // oracle pass in the same priority order
        std::vector<const Vehicle*> refs(vs.begin(), vs.end());
        auto ranked = rank_vehicles(refs, 0, 6600);
        bool oracle_impossible = false;
        std::vector<std::pair<VehicleId, oracle::AssignResult>> oracle_out;
        for (const Vehicle* v : ranked) {
            oracle::AssignVehicle ov{v->id, v->pos, v->completed,
                                     std::nullopt};
            auto r = oracle::assign_steps(ov, ow);
            if (r.outcome == oracle::AssignOutcome::Impossible) {
                oracle_impossible = true;
                break;
            }
            oracle_out.emplace_back(v->id, r);
        }

        REQUIRE(mine.impossible == oracle_impossible);
        if (!mine.impossible) {
            REQUIRE(mine.assignments.size() == oracle_out.size());
            for (size_t i = 0; i < oracle_out.size(); ++i) {
                CHECK(mine.assignments[i].first == oracle_out[i].first);
                const Assignment& a = mine.assignments[i].second;
                const oracle::AssignResult& o = oracle_out[i].second;
                switch (o.outcome) {
                    case oracle::AssignOutcome::ToStation:
                        CHECK(a.kind == GoalKind::Station);
                        CHECK(a.station == o.station);
                        break;
                    case oracle::AssignOutcome::ToParking:
                        CHECK(a.kind == GoalKind::Park);
                        break;
                    case oracle::AssignOutcome::ToExit:
                        CHECK(a.kind == GoalKind::ExitYard);
                        break;
                    default: break;
                }
            }
        }
    }
}
