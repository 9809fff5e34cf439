#ifndef YARDSIM_PATHING_HPP
#define YARDSIM_PATHING_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "yardsim/layout.hpp"

namespace yardsim {

using Tick = int64_t;

// A timed route: steps[k] is the occupied cell at tick start_tick + k.
// Consecutive steps are identical (wait) or 4-adjacent (move).
struct SpaceTimePath {
    Tick start_tick = 0;
    std::vector<Cell> steps;

    Tick arrival_tick() const {
        return start_tick + static_cast<Tick>(steps.size()) - 1;
    }
    bool covers(Tick t) const {
        return t >= start_tick && t <= arrival_tick();
    }
    Cell at(Tick t) const { return steps[static_cast<size_t>(t - start_tick)]; }
    Cell goal() const { return steps.back(); }
};

// Space-time occupancy shared by all committed paths of one run.
// Vertex entries claim (cell, tick); edge entries claim directed moves,
// stored in both directions so a swap is rejected by a single lookup.
class ReservationTable {
  public:
    ReservationTable() = default;
    explicit ReservationTable(const YardLayout& layout)
        : width_(layout.width), ncells_(layout.cell_count()) {}

    bool vertex_free(Cell c, Tick t, int32_t self) const;
    // True when the move from->to at tick t (arriving t+1) collides with no
    // other vehicle's direct or opposing edge claim.
    bool move_free(Cell from, Cell to, Tick t, int32_t self) const;
    int32_t vertex_owner(Cell c, Tick t) const;  // -1 when free

    // Adds every vertex and edge (plus swap direction) of the path. The
    // final cell is held for dwell_ticks extra ticks; pass 0 for paths that
    // end at a gate or the exit, where the vehicle leaves the grid.
    // Aborts on conflict: committing a conflicting path is a bug.
    void commit(const SpaceTimePath& path, int32_t owner, int dwell_ticks);

    // Removes the owner's reservations for path positions at ticks >=
    // from_tick (including the dwell used at commit time); earlier ticks stay.
    void release_future(const SpaceTimePath& path, Tick from_tick,
                        int32_t owner, int dwell_ticks);

    // Owners holding (cell, t) for t in (after, horizon]; used to displace
    // stale claims when a vehicle ends up standing on a cell.
    std::vector<int32_t> future_vertex_owners(Cell c, Tick after) const;

    Tick horizon() const { return horizon_; }
    size_t vertex_count() const { return vertex_.size(); }
    size_t edge_count() const { return edge_.size(); }

  private:
    uint64_t vkey(Cell c, Tick t) const {
        return static_cast<uint64_t>(t) * static_cast<uint64_t>(ncells_) +
               static_cast<uint64_t>(c.y * width_ + c.x);
    }
    uint64_t ekey(Cell from, Cell to, Tick t) const;

    int width_ = 0;
    int ncells_ = 0;
    Tick horizon_ = 0;
    std::unordered_map<uint64_t, int32_t> vertex_;
    std::unordered_map<uint64_t, int32_t> edge_;
};

struct PlanOptions {
    // Cells closed to this search at every tick (standing vehicles).
    const std::vector<uint8_t>* forbidden = nullptr;
    // Treat gate/entrance/exit cells as blocked unless start or goal.
    bool respect_stopping_cells = false;
};

// Space-Time A* over states (cell, tick) with actions {wait, N, S, E, W}.
// goal_dist must be distance_field(layout, goal): the true-distance
// heuristic. Searches ticks up to max(horizon, start_tick) + 4*(w+h);
// returns nullopt when no conflict-free path exists within that bound.
std::optional<SpaceTimePath> plan_path(const YardLayout& layout, Cell start,
                                       Cell goal, Tick start_tick,
                                       const ReservationTable& table,
                                       int32_t self,
                                       const DistanceField& goal_dist,
                                       const PlanOptions& opts = {});

}  // namespace yardsim

#endif
