#include "yardsim/pathing.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <queue>

namespace yardsim {

namespace {

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

int dir_index(Cell from, Cell to) {
    for (int d = 0; d < 4; ++d)
        if (to.x - from.x == kDx[d] && to.y - from.y == kDy[d]) return d;
    return -1;
}

[[noreturn]] void die(const char* what, Cell c, Tick t) {
    std::fprintf(stderr, "yardsim: reservation invariant broken: %s at (%d,%d) tick %lld\n",
                 what, c.x, c.y, static_cast<long long>(t));
    std::abort();
}

}  // namespace

uint64_t ReservationTable::ekey(Cell from, Cell to, Tick t) const {
    int d = dir_index(from, to);
    return (static_cast<uint64_t>(t) * static_cast<uint64_t>(ncells_) +
            static_cast<uint64_t>(from.y * width_ + from.x)) *
               4ULL +
           static_cast<uint64_t>(d);
}

bool ReservationTable::vertex_free(Cell c, Tick t, int32_t self) const {
    auto it = vertex_.find(vkey(c, t));
    return it == vertex_.end() || it->second == self;
}

bool ReservationTable::move_free(Cell from, Cell to, Tick t,
                                 int32_t self) const {
    // Swap claims are stored in both directions, so one lookup suffices.
    auto it = edge_.find(ekey(from, to, t));
    return it == edge_.end() || it->second == self;
}

int32_t ReservationTable::vertex_owner(Cell c, Tick t) const {
    auto it = vertex_.find(vkey(c, t));
    return it == vertex_.end() ? -1 : it->second;
}

void ReservationTable::commit(const SpaceTimePath& path, int32_t owner,
                              int dwell_ticks) {
    for (size_t i = 0; i < path.steps.size(); ++i) {
        Tick t = path.start_tick + static_cast<Tick>(i);
        Cell c = path.steps[i];
        auto [it, inserted] = vertex_.try_emplace(vkey(c, t), owner);
        if (!inserted && it->second != owner) die("vertex commit", c, t);
        it->second = owner;
        if (i + 1 < path.steps.size() && !(path.steps[i + 1] == c)) {
            Cell n = path.steps[i + 1];
            auto [e1, in1] = edge_.try_emplace(ekey(c, n, t), owner);
            if (!in1 && e1->second != owner) die("edge commit", c, t);
            e1->second = owner;
            auto [e2, in2] = edge_.try_emplace(ekey(n, c, t), owner);
            if (!in2 && e2->second != owner) die("swap commit", n, t);
            e2->second = owner;
        }
    }
    Cell last = path.steps.back();
    for (int d = 1; d <= dwell_ticks; ++d) {
        Tick t = path.arrival_tick() + d;
        auto [it, inserted] = vertex_.try_emplace(vkey(last, t), owner);
        if (!inserted && it->second != owner) die("dwell commit", last, t);
        it->second = owner;
    }
    horizon_ = std::max(horizon_, path.arrival_tick() + dwell_ticks);
}

void ReservationTable::release_future(const SpaceTimePath& path,
                                      Tick from_tick, int32_t owner,
                                      int dwell_ticks) {
    for (size_t i = 0; i < path.steps.size(); ++i) {
        Tick t = path.start_tick + static_cast<Tick>(i);
        Cell c = path.steps[i];
        if (t >= from_tick) {
            auto it = vertex_.find(vkey(c, t));
            if (it != vertex_.end() && it->second == owner) vertex_.erase(it);
        }
        if (i + 1 < path.steps.size() && !(path.steps[i + 1] == c)) {
            // An edge at tick t spans ticks t..t+1: drop it once any part
            // of it lies at or past from_tick.
            if (t + 1 >= from_tick) {
                Cell n = path.steps[i + 1];
                auto e1 = edge_.find(ekey(c, n, t));
                if (e1 != edge_.end() && e1->second == owner) edge_.erase(e1);
                auto e2 = edge_.find(ekey(n, c, t));
                if (e2 != edge_.end() && e2->second == owner) edge_.erase(e2);
            }
        }
    }
    Cell last = path.steps.back();
    for (int d = 1; d <= dwell_ticks; ++d) {
        Tick t = path.arrival_tick() + d;
        if (t < from_tick) continue;
        auto it = vertex_.find(vkey(last, t));
        if (it != vertex_.end() && it->second == owner) vertex_.erase(it);
    }
}

std::vector<int32_t> ReservationTable::future_vertex_owners(Cell c,
                                                            Tick after) const {
    std::vector<int32_t> out;
    for (Tick t = after + 1; t <= horizon_; ++t) {
        auto it = vertex_.find(vkey(c, t));
        if (it != vertex_.end()) {
            if (std::find(out.begin(), out.end(), it->second) == out.end())
                out.push_back(it->second);
        }
    }
    return out;
}

namespace {

struct Node {
    int32_t f = 0;     // g + h
    int32_t g = 0;     // ticks from start
    int32_t cell = 0;  // packed index
    uint32_t idx = 0;  // arena index for path reconstruction
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;  // deeper first on equal f
        return a.cell > b.cell;
    }
};

struct Arena {
    std::vector<int32_t> cell;
    std::vector<uint32_t> parent;
    uint32_t add(int32_t c, uint32_t p) {
        cell.push_back(c);
        parent.push_back(p);
        return static_cast<uint32_t>(cell.size() - 1);
    }
};

}  // namespace

std::optional<SpaceTimePath> plan_path(const YardLayout& layout, Cell start,
                                       Cell goal, Tick start_tick,
                                       const ReservationTable& table,
                                       int32_t self,
                                       const DistanceField& goal_dist,
                                       const PlanOptions& opts) {
    if (!layout.traversable(start) || !layout.traversable(goal))
        return std::nullopt;
    if (goal_dist.at(start) < 0) return std::nullopt;  // statically unreachable

    const int width = layout.width;
    const int ncells = layout.cell_count();
    auto pack = [width](Cell c) { return c.y * width + c.x; };
    auto unpack = [width](int32_t idx) {
        return Cell{idx % width, idx / width};
    };
    auto usable = [&](Cell c) {
        if (!layout.traversable(c)) return false;
        if (opts.forbidden && (*opts.forbidden)[static_cast<size_t>(
                                  c.y * width + c.x)] &&
            !(c == start))
            return false;
        if (opts.respect_stopping_cells && layout.is_stopping(c) &&
            !(c == goal) && !(c == start))
            return false;
        return true;
    };

    if (start == goal) {
        if (!table.vertex_free(start, start_tick, self)) return std::nullopt;
        SpaceTimePath p;
        p.start_tick = start_tick;
        p.steps = {start};
        return p;
    }

    // Ticks explored are bounded by the table horizon plus a static-path
    // allowance; beyond the horizon the grid is free of reservations, so a
    // reachable goal is always found within the bound.
    const Tick max_tick =
        std::max(table.horizon(), start_tick) +
        4 * static_cast<Tick>(layout.width + layout.height);
    const Tick max_g = max_tick - start_tick;

    Arena arena;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    // closed[(g * ncells) + cell]
    std::vector<uint8_t> closed(
        static_cast<size_t>(ncells) * static_cast<size_t>(max_g + 1), 0);

    if (!table.vertex_free(start, start_tick, self)) return std::nullopt;
    uint32_t root = arena.add(pack(start), UINT32_MAX);
    open.push(Node{goal_dist.at(start), 0, pack(start), root});

    while (!open.empty()) {
        Node cur = open.top();
        open.pop();
        Cell c = unpack(cur.cell);
        size_t ck = static_cast<size_t>(cur.g) * ncells + cur.cell;
        if (closed[ck]) continue;
        closed[ck] = 1;

        if (c == goal) {
            SpaceTimePath p;
            p.start_tick = start_tick;
            p.steps.resize(static_cast<size_t>(cur.g) + 1);
            uint32_t n = cur.idx;
            for (int i = cur.g; i >= 0; --i) {
                p.steps[static_cast<size_t>(i)] = unpack(arena.cell[n]);
                n = arena.parent[n];
            }
            return p;
        }
        if (cur.g >= max_g) continue;

        Tick t = start_tick + cur.g;
        // wait
        if (table.vertex_free(c, t + 1, self)) {
            size_t k = static_cast<size_t>(cur.g + 1) * ncells + cur.cell;
            if (!closed[k]) {
                uint32_t idx = arena.add(cur.cell, cur.idx);
                open.push(Node{cur.g + 1 + goal_dist.at(c), cur.g + 1,
                               cur.cell, idx});
            }
        }
        // moves
        for (int d = 0; d < 4; ++d) {
            Cell n{c.x + kDx[d], c.y + kDy[d]};
            if (!usable(n)) continue;
            int32_t h = goal_dist.at(n);
            if (h < 0) continue;
            if (!table.vertex_free(n, t + 1, self)) continue;
            if (!table.move_free(c, n, t, self)) continue;
            int32_t ncell = pack(n);
            size_t k = static_cast<size_t>(cur.g + 1) * ncells + ncell;
            if (closed[k]) continue;
            uint32_t idx = arena.add(ncell, cur.idx);
            open.push(Node{cur.g + 1 + h, cur.g + 1, ncell, idx});
        }
    }
    return std::nullopt;
}

}  // namespace yardsim
