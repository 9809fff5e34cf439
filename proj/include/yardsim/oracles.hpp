#ifndef YARDSIM_ORACLES_HPP
#define YARDSIM_ORACLES_HPP

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "yardsim/layout.hpp"
#include "yardsim/pathing.hpp"
#include "yardsim/vehicle.hpp"

// Brute-force reference implementations, kept independent of the production
// search and assignment code paths. The test suites compare against these;
// the CLI exposes them through the `oracle` subcommand.
namespace yardsim::oracle {

// Plain breadth-first search over traversable cells.
std::optional<int> bfs_distance(const YardLayout& layout, Cell from, Cell to);

// Reservations as raw sets with their own conflict logic (a move is blocked
// by the same directed edge or by its reverse).
struct Reservations {
    std::set<std::tuple<int, int, Tick>> vertices;          // x, y, t
    std::set<std::tuple<int, int, int, int, Tick>> edges;   // x1,y1,x2,y2,t

    void reserve_vertex(Cell c, Tick t) { vertices.insert({c.x, c.y, t}); }
    void reserve_edge(Cell from, Cell to, Tick t) {
        edges.insert({from.x, from.y, to.x, to.y, t});
    }
    bool vertex_blocked(Cell c, Tick t) const {
        return vertices.count({c.x, c.y, t}) > 0;
    }
    bool move_blocked(Cell from, Cell to, Tick t) const {
        return edges.count({from.x, from.y, to.x, to.y, t}) > 0 ||
               edges.count({to.x, to.y, from.x, from.y, t}) > 0;
    }
};

// Uniform-cost breadth-first search over the space-time graph (wait, N, S,
// E, W); returns the earliest arrival tick at goal, or nullopt when none
// exists with arrival <= max_tick.
std::optional<Tick> spacetime_bfs_arrival(const YardLayout& layout, Cell start,
                                          Cell goal, Tick start_tick,
                                          const Reservations& res,
                                          Tick max_tick);

// Literal transcription of the four assignment steps, operating on plain
// free-berth counts.
struct AssignWorld {
    const YardLayout* layout = nullptr;
    // Free berths per kind (capacity minus occupied/held/promised).
    std::array<int, kStationKindCount> free{};
};

struct AssignVehicle {
    VehicleId id = 0;
    Cell pos;
    CompletedSet completed;
    std::optional<StationKind> previous;  // previous station assignment
};

enum class AssignOutcome : int {
    ToStation = 0,
    ToParking = 1,
    ToExit = 2,
    Impossible = 3,
};

struct AssignResult {
    AssignOutcome outcome = AssignOutcome::Impossible;
    StationKind station = StationKind::Charging;  // when ToStation
};

// Consumes one free berth from `world` for ToStation/ToParking results.
AssignResult assign_steps(const AssignVehicle& v, AssignWorld& world);

// Runs the scenario cases from a JSON description (see README for the
// schema) and renders one line per case.
std::string run_scenario(const std::string& json_text);

}  // namespace yardsim::oracle

#endif
