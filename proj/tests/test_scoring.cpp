#include <doctest.h>

#include <algorithm>
#include <cstring>

#include "yardsim/rng.hpp"
#include "yardsim/scoring.hpp"

using namespace yardsim;

namespace {

Vehicle make_vehicle(VehicleId id, double charge_s, int completed_count,
                     double trust, double entry_s = 0) {
    Vehicle v;
    v.id = id;
    v.entry_time_s = entry_s;
    v.remaining_charge_s = charge_s;
    v.trust_score = trust;
    for (int i = 0; i < completed_count; ++i)
        v.completed.add(kCircuitKinds[static_cast<size_t>(i)]);
    return v;
}

}  // namespace

TEST_CASE("charge urgency: inverse hours with a one-minute floor") {
    CHECK(charge_urgency(120 * 60.0) == doctest::Approx(0.5));   // full fast charge
    CHECK(charge_urgency(60 * 60.0) == doctest::Approx(1.0));
    CHECK(charge_urgency(0.0) == doctest::Approx(60.0));         // capped
    CHECK(charge_urgency(30.0) == doctest::Approx(60.0));        // below the floor
}

TEST_CASE("lateness: seconds past the expected circuit, clamped") {
    CHECK(lateness(0, 6600, 6600) == 0);
    CHECK(lateness(0, 6630, 6600) == doctest::Approx(30.0));
    CHECK(lateness(0, 6590, 6600) == 0);
}

TEST_CASE("priority score: weighted sum") {
    // 60*1.0 + 20*2 + 5*0 + 5 = 105
    Vehicle a = make_vehicle(1, 3600, 2, 5.0);
    PriorityScore sa = priority_score(a, 1000, 6600);
    CHECK(sa.total == doctest::Approx(105.0));
    CHECK(sa.charge_term == doctest::Approx(60.0));
    CHECK(sa.circuit_term == doctest::Approx(40.0));
    CHECK(sa.lateness_term == 0);
    CHECK(sa.trust_term == doctest::Approx(5.0));

    // 60*0.5 + 20*3 + 5*10 + 2 = 142
    Vehicle b = make_vehicle(2, 7200, 3, 2.0);
    PriorityScore sb = priority_score(b, 6610, 6600);
    CHECK(sb.total == doctest::Approx(142.0));

    // all-zero terms (uncapped zero-urgency input approximated by a huge
    // remaining charge)
    Vehicle c = make_vehicle(3, 1e18, 0, 0.0);
    PriorityScore sc = priority_score(c, 0, 6600);
    CHECK(sc.total == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("score terms sum exactly and are nonnegative") {
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        Vehicle v = make_vehicle(static_cast<VehicleId>(i),
                                 rng.uniform(0, 7200),
                                 static_cast<int>(rng.next_u64() % 5),
                                 rng.uniform(0, 10), rng.uniform(0, 1000));
        double now = rng.uniform(0, 20000);
        PriorityScore s = priority_score(v, now, 6600);
        CHECK(s.total == s.charge_term + s.circuit_term + s.lateness_term +
                             s.trust_term);
        CHECK(s.charge_term >= 0);
        CHECK(s.circuit_term >= 0);
        CHECK(s.lateness_term >= 0);
        CHECK(s.trust_term >= 0);
    }
}

TEST_CASE("scores are deterministic bit for bit") {
    Vehicle v = make_vehicle(9, 5432.1, 2, 7.25, 123.4);
    PriorityScore a = priority_score(v, 9876.5, 6600);
    PriorityScore b = priority_score(v, 9876.5, 6600);
    CHECK(std::memcmp(&a.total, &b.total, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.lateness_term, &b.lateness_term, sizeof(double)) == 0);
}

TEST_CASE("monotonicity in circuit progress, lateness and trust") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        double charge = rng.uniform(60, 7200);
        double trust = rng.uniform(0, 10);
        double now = rng.uniform(7000, 30000);
        int completed = static_cast<int>(rng.next_u64() % 4);

        Vehicle base = make_vehicle(1, charge, completed, trust);
        double t0 = priority_score(base, now, 6600).total;

        Vehicle more_done = make_vehicle(1, charge, completed + 1, trust);
        CHECK(priority_score(more_done, now, 6600).total >= t0);

        CHECK(priority_score(base, now + 60, 6600).total >= t0);

        Vehicle more_trust = make_vehicle(1, charge, completed, trust + 1);
        CHECK(priority_score(more_trust, now, 6600).total >= t0);
    }
}

TEST_CASE("rank_vehicles: descending totals with declared tie-breaks") {
    Vehicle hi = make_vehicle(1, 7200, 3, 2.0);      // 142 when late 10 s
    Vehicle lo = make_vehicle(2, 3600, 2, 5.0, 10);  // 105, not yet late
    std::vector<const Vehicle*> vs = {&lo, &hi};
    auto ranked = rank_vehicles(vs, 6610, 6600);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0]->id == 1);
    CHECK(ranked[1]->id == 2);

    // identical totals: earlier entry wins
    Vehicle e10 = make_vehicle(5, 3600, 0, 1.0, 10);
    Vehicle e20 = make_vehicle(4, 3600, 0, 1.0, 20);
    auto tie = rank_vehicles({&e20, &e10}, 100, 6600);
    CHECK(tie[0]->id == 5);
    CHECK(tie[1]->id == 4);

    // identical totals and entries: smaller id wins
    Vehicle id3 = make_vehicle(3, 3600, 0, 1.0, 10);
    auto tie2 = rank_vehicles({&id3, &e10}, 100, 6600);
    CHECK(tie2[0]->id == 3);

    CHECK(rank_vehicles({}, 0, 6600).empty());
}

TEST_CASE("rank_vehicles is a permutation, stable under input order") {
    Rng rng(13);
    std::vector<Vehicle> pool;
    for (int i = 0; i < 40; ++i)
        pool.push_back(make_vehicle(static_cast<VehicleId>(i),
                                    rng.uniform(60, 7200),
                                    static_cast<int>(rng.next_u64() % 5),
                                    rng.uniform(0, 10),
                                    rng.uniform(0, 100)));
    std::vector<const Vehicle*> a, b;
    for (auto& v : pool) a.push_back(&v);
    for (auto it = pool.rbegin(); it != pool.rend(); ++it) b.push_back(&*it);

    auto ra = rank_vehicles(a, 9000, 6600);
    auto rb = rank_vehicles(b, 9000, 6600);
    REQUIRE(ra.size() == pool.size());
    CHECK(ra == rb);  // same order regardless of input order

    std::vector<const Vehicle*> sorted_in = a;
    std::sort(sorted_in.begin(), sorted_in.end());
    std::vector<const Vehicle*> sorted_out = ra;
    std::sort(sorted_out.begin(), sorted_out.end());
    CHECK(sorted_in == sorted_out);  // permutation
}
