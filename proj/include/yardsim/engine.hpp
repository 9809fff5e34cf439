#ifndef YARDSIM_ENGINE_HPP
#define YARDSIM_ENGINE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "yardsim/assignment.hpp"
#include "yardsim/layout.hpp"
#include "yardsim/rng.hpp"
#include "yardsim/scoring.hpp"
#include "yardsim/vehicle.hpp"

namespace yardsim {

enum class ControllerKind : int { Orchestrated = 0, Isolated = 1 };

const char* to_string(ControllerKind kind);
std::optional<ControllerKind> controller_from_string(std::string_view name);

struct ServiceDist {
    double mean_s = 0;
    double sd_s = 0;
};

// Task completion distributions, by station kind (minutes: charging 60/30,
// inspection 10/2, cleaning 20/2, loading 20/2, parking 2/2).
std::array<ServiceDist, kStationKindCount> default_service_dists();

struct SimConfig {
    const YardLayout* layout = nullptr;
    ControllerKind controller = ControllerKind::Orchestrated;
    double demand = 0;          // expected vehicles over the window
    double window_s = 18000.0;  // 5 h peak activity period
    uint64_t seed = 0;
    std::array<ServiceDist, kStationKindCount> service = default_service_dists();
    double inspection_fail_rate = 0.005;
    double speed_kmh = 16.1;
    double max_sim_time_s = 86400.0;  // safety cap, reported as TimeCap
    ScoreWeights weights;
    double trust_min = 0.0;
    double trust_max = 10.0;
    // Berths held by phantom occupants for the whole run; scripted
    // capacity-exhaustion scenarios use this.
    std::array<int, kStationKindCount> prefill{};
    bool collect_events = true;
    bool collect_trajectories = false;

    // One tick = one cell traversal.
    double tick_seconds() const;
    Tick seconds_to_ticks(double s) const;  // rounded up
    void validate() const;                  // throws std::invalid_argument
};

enum class RunStatus : int { Completed = 0, FacilityFailure = 1, TimeCap = 2 };

const char* to_string(RunStatus status);

enum class EventKind : int {
    Entered = 0,
    Assigned,        // a: goal kind, b: station kind
    StationEntered,  // a: station kind
    ServiceDone,     // a: station kind
    InspectionFailed,
    Impounded,
    ParkingEntered,
    ParkingLeft,
    Exited,
    Blocked,   // no conflict-free path this tick
    Stranded,  // found everything at capacity
    FacilityFailed,
};

const char* to_string(EventKind kind);

struct EventRecord {
    Tick tick = 0;
    VehicleId vehicle = -1;
    EventKind kind = EventKind::Entered;
    int32_t a = 0;
    int32_t b = 0;
};

std::string event_to_line(const EventRecord& ev, double tick_seconds);

// Pre-drawn per-vehicle inputs plus final disposition; the common-random-
// numbers pairing checks compare these across controllers.
struct VehicleRecord {
    VehicleId id = -1;
    double arrival_time_s = 0;
    Tick spawn_tick = -1;
    double charge_s = 0;
    double trust = 0;
    std::array<double, kStationKindCount> service_s{};
    bool inspection_fails = false;
    VehicleStatus final_status = VehicleStatus::Moving;
    double exit_time_s = -1;
};

// Executed per-tick positions of one vehicle, split into on-grid segments
// (off-grid gaps while inside stations). Used by the conflict audit.
struct TrajectorySegment {
    Tick start_tick = 0;
    std::vector<Cell> cells;
};

struct VehicleTrajectory {
    VehicleId id = -1;
    std::vector<TrajectorySegment> segments;
};

struct RunOutcome {
    RunStatus status = RunStatus::Completed;
    ControllerKind controller = ControllerKind::Orchestrated;
    uint64_t seed = 0;
    int arrivals = 0;  // vehicles that actually entered the yard
    int exited = 0;
    int impounded = 0;
    int stranded = 0;
    int exits_in_window = 0;
    double failure_time_s = -1;
    double last_exit_s = -1;
    Tick end_tick = 0;
    std::vector<VehicleRecord> vehicles;
    std::vector<EventRecord> events;
    std::vector<VehicleTrajectory> trajectories;
};

// Homogeneous Poisson process with rate demand/window over [0, window);
// sorted seconds.
std::vector<double> sample_arrivals(double demand, double window_s, Rng& rng);

// One service-duration draw: Normal(mean, sd) clamped to [60 s, 7200 s] for
// Charging and [60 s, inf) otherwise, then rounded up to whole ticks.
double sample_service_time(StationKind kind, const ServiceDist& dist, Rng& rng,
                           double tick_seconds);

// Sum of the four circuit service means plus the minimum-travel-time
// entrance -> best station ordering -> exit at driving speed; the lateness
// reference, computed once per layout.
double expected_circuit_time_s(const YardLayout& layout,
                               const std::array<ServiceDist, kStationKindCount>& service,
                               double tick_seconds);

// One simulation run. Deterministic: equal (config, seed) gives equal
// outcomes bit for bit. Facility failure is an outcome, not an error.
RunOutcome run(const SimConfig& config);

// Post-run audit over executed trajectories: vertex conflicts (two vehicles
// on one cell at one tick) and edge/swap conflicts (two vehicles exchanging
// cells across one tick). Empty result = conflict-free.
std::vector<std::string> audit_conflicts(
    const std::vector<VehicleTrajectory>& trajectories);

}  // namespace yardsim

#endif
