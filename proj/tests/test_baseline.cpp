#include <doctest.h>

#include "yardsim/baseline.hpp"

using namespace yardsim;

TEST_CASE("next_target: loop order from the entrance") {
    Vehicle v;
    LoopState state;
    CHECK(next_target(v, state, std::nullopt) == StationKind::Charging);
}

TEST_CASE("next_target: full station hands over to the next in loop order") {
    Vehicle v;
    LoopState state;
    // refused at charging
    CHECK(on_gate_arrival(v, state, StationKind::Charging, 0) ==
          GateDecision::Continue);
    CHECK(next_target(v, state, StationKind::Charging) ==
          StationKind::Inspection);
}

TEST_CASE("next_target: skips completed kinds and unmet prerequisites") {
    Vehicle v;
    v.completed.add(StationKind::Charging);
    LoopState state;
    CHECK(next_target(v, state, std::nullopt) == StationKind::Inspection);

    // loading last: with only cleaning left before it, cleaning comes first
    Vehicle w;
    w.completed.add(StationKind::Charging);
    w.completed.add(StationKind::Inspection);
    CHECK(next_target(w, state, StationKind::Inspection) ==
          StationKind::Cleaning);

    Vehicle done3;
    done3.completed.add(StationKind::Charging);
    done3.completed.add(StationKind::Inspection);
    done3.completed.add(StationKind::Cleaning);
    CHECK(next_target(done3, state, StationKind::Cleaning) ==
          StationKind::Loading);
}

TEST_CASE("next_target: a fully failed pass points at parking") {
    Vehicle v;
    LoopState state;
    CHECK(on_gate_arrival(v, state, StationKind::Charging, 0) ==
          GateDecision::Continue);
    CHECK(on_gate_arrival(v, state, StationKind::Inspection, 0) ==
          GateDecision::Continue);
    CHECK(on_gate_arrival(v, state, StationKind::Cleaning, 0) ==
          GateDecision::Continue);
    // loading is prerequisite-blocked, so the pass is exhausted
    CHECK(next_target(v, state, StationKind::Cleaning) ==
          StationKind::Parking);
}

TEST_CASE("on_gate_arrival: free berth enters and resets the pass") {
    Vehicle v;
    LoopState state;
    state.mark_full(StationKind::Charging);
    CHECK(on_gate_arrival(v, state, StationKind::Inspection, 2) ==
          GateDecision::Enter);
    CHECK(state.found_full == 0);
}

TEST_CASE("on_gate_arrival: full parking after a failed pass strands") {
    Vehicle v;
    LoopState state;
    state.mark_full(StationKind::Charging);
    state.mark_full(StationKind::Inspection);
    state.mark_full(StationKind::Cleaning);
    // loading prerequisite-blocked: pass is complete
    CHECK(on_gate_arrival(v, state, StationKind::Parking, 0) ==
          GateDecision::Stranded);

    // same spot with a free parking berth: enter and wait
    LoopState state2;
    state2.mark_full(StationKind::Charging);
    state2.mark_full(StationKind::Inspection);
    state2.mark_full(StationKind::Cleaning);
    CHECK(on_gate_arrival(v, state2, StationKind::Parking, 3) ==
          GateDecision::Enter);
}

TEST_CASE("parking resume: loop restarts at charging") {
    Vehicle v;
    v.completed.add(StationKind::Charging);
    LoopState state;  // reset on parking entry
    CHECK(next_target(v, state, StationKind::Parking) ==
          StationKind::Inspection);
    Vehicle fresh;
    CHECK(next_target(fresh, state, StationKind::Parking) ==
          StationKind::Charging);
}

TEST_CASE("decisions never read occupancy beyond the local gate") {
    // By construction: next_target takes no occupancy argument at all and
    // on_gate_arrival only the free count of the station at whose gate the
    // vehicle stands. This asserts the signature stays that way.
    static_assert(std::is_invocable_r_v<StationKind, decltype(next_target),
                                        const Vehicle&, const LoopState&,
                                        std::optional<StationKind>>);
    static_assert(std::is_invocable_r_v<GateDecision,
                                        decltype(on_gate_arrival),
                                        const Vehicle&, LoopState&,
                                        StationKind, int>);
    CHECK(true);
}
