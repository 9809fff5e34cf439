#include "yardsim/oracles.hpp"

#include <deque>
#include <map>
#include <sstream>

#include <json.hpp>

namespace yardsim::oracle {

std::optional<int> bfs_distance(const YardLayout& layout, Cell from, Cell to) {
    if (!layout.traversable(from) || !layout.traversable(to))
        return std::nullopt;
    std::vector<int> dist(static_cast<size_t>(layout.cell_count()), -1);
    std::deque<Cell> queue;
    dist[static_cast<size_t>(layout.index(from))] = 0;
    queue.push_back(from);
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        if (c == to) return dist[static_cast<size_t>(layout.index(c))];
        int d = dist[static_cast<size_t>(layout.index(c))];
        const Cell neighbors[4] = {{c.x + 1, c.y}, {c.x - 1, c.y},
                                   {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (Cell n : neighbors) {
            if (!layout.traversable(n)) continue;
            int& dn = dist[static_cast<size_t>(layout.index(n))];
            if (dn < 0) {
                dn = d + 1;
                queue.push_back(n);
            }
        }
    }
    return std::nullopt;
}

std::optional<Tick> spacetime_bfs_arrival(const YardLayout& layout, Cell start,
                                          Cell goal, Tick start_tick,
                                          const Reservations& res,
                                          Tick max_tick) {
    if (!layout.traversable(start) || !layout.traversable(goal))
        return std::nullopt;
    if (res.vertex_blocked(start, start_tick)) return std::nullopt;
    if (start == goal) return start_tick;

    std::set<std::pair<Tick, int>> seen;
    std::deque<std::pair<Tick, Cell>> queue;
    queue.push_back({start_tick, start});
    seen.insert({start_tick, layout.index(start)});
    while (!queue.empty()) {
        auto [t, c] = queue.front();
        queue.pop_front();
        if (t >= max_tick) continue;
        const Cell options[5] = {c,
                                 {c.x + 1, c.y},
                                 {c.x - 1, c.y},
                                 {c.x, c.y + 1},
                                 {c.x, c.y - 1}};
        for (Cell n : options) {
            if (!layout.traversable(n)) continue;
            if (res.vertex_blocked(n, t + 1)) continue;
            if (!(n == c) && res.move_blocked(c, n, t)) continue;
            if (n == goal) return t + 1;
            auto key = std::make_pair(t + 1, layout.index(n));
            if (seen.count(key)) continue;
            seen.insert(key);
            queue.push_back({t + 1, n});
        }
    }
    return std::nullopt;
}

AssignResult assign_steps(const AssignVehicle& v, AssignWorld& world) {
    // Completed circuits head for the exit without consuming capacity.
    bool complete = true;
    for (StationKind k : kCircuitKinds)
        if (!v.completed.contains(k)) complete = false;
    if (complete) return AssignResult{AssignOutcome::ToExit};

    // Step 1: previous station assignment with remaining capacity.
    if (v.previous && world.free[static_cast<int>(*v.previous)] > 0) {
        --world.free[static_cast<int>(*v.previous)];
        return AssignResult{AssignOutcome::ToStation, *v.previous};
    }

    // Steps 2 and 3: nearest remaining station, prerequisites and capacity
    // permitting; distance ties resolved by kind order.
    AssignResult best;
    int best_dist = -1;
    for (StationKind k : kCircuitKinds) {
        if (v.completed.contains(k)) continue;
        if (k == StationKind::Loading) {
            bool ok = v.completed.contains(StationKind::Charging) &&
                      v.completed.contains(StationKind::Inspection) &&
                      v.completed.contains(StationKind::Cleaning);
            if (!ok) continue;
        }
        if (world.free[static_cast<int>(k)] <= 0) continue;
        auto d = bfs_distance(*world.layout, v.pos,
                              world.layout->station(k).gate);
        if (!d) continue;
        if (best_dist < 0 || *d < best_dist) {
            best_dist = *d;
            best = AssignResult{AssignOutcome::ToStation, k};
        }
    }
    if (best_dist >= 0) {
        --world.free[static_cast<int>(best.station)];
        return best;
    }

    // Step 4: parking.
    if (world.free[static_cast<int>(StationKind::Parking)] > 0) {
        --world.free[static_cast<int>(StationKind::Parking)];
        return AssignResult{AssignOutcome::ToParking};
    }
    return AssignResult{AssignOutcome::Impossible};
}

namespace {

Cell cell_from_json(const nlohmann::json& j) {
    return Cell{j.at(0).get<int>(), j.at(1).get<int>()};
}

// Scenario grids skip the structural checks of the layout parser: pathing
// cases only need traversability, and assignment cases may omit stations
// they do not exercise.
YardLayout lenient_grid(const std::vector<std::string>& rows) {
    YardLayout l;
    l.height = static_cast<int>(rows.size());
    for (const auto& r : rows)
        l.width = std::max(l.width, static_cast<int>(r.size()));
    l.grid.assign(static_cast<size_t>(l.width) * l.height, '#');
    for (int k = 0; k < kStationKindCount; ++k)
        l.stations[static_cast<size_t>(k)].kind = static_cast<StationKind>(k);
    const std::string gates = "ciwlp";
    const std::string berths = "CIWLP";
    for (int y = 0; y < l.height; ++y) {
        for (int x = 0; x < static_cast<int>(rows[static_cast<size_t>(y)].size()); ++x) {
            char ch = rows[static_cast<size_t>(y)][static_cast<size_t>(x)];
            l.grid[l.index({x, y})] = ch;
            if (ch == 'E') l.entrance = {x, y};
            if (ch == 'X') l.exit = {x, y};
            size_t g = gates.find(ch);
            if (g != std::string::npos)
                l.stations[g].gate = {x, y};
            size_t b = berths.find(ch);
            if (b != std::string::npos)
                ++l.stations[b].berth_count;
        }
    }
    return l;
}

}  // namespace

std::string run_scenario(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::ostringstream out;

    std::optional<YardLayout> layout;
    if (j.contains("grid")) {
        std::vector<std::string> rows;
        for (const auto& row : j.at("grid"))
            rows.push_back(row.get<std::string>());
        layout = lenient_grid(rows);
    } else if (j.contains("layout")) {
        std::string name = j.at("layout").get<std::string>();
        auto size = yard_size_from_string(name);
        if (!size) throw std::invalid_argument("scenario: unknown layout " + name);
        layout = builtin_layout(*size);
    }
    if (!layout) throw std::invalid_argument("scenario: no grid or layout");

    if (j.contains("pathing")) {
        int idx = 0;
        for (const auto& c : j.at("pathing")) {
            Cell start = cell_from_json(c.at("start"));
            Cell goal = cell_from_json(c.at("goal"));
            Tick start_tick = c.value("start_tick", 0);
            Reservations res;
            if (c.contains("reservations")) {
                const auto& r = c.at("reservations");
                if (r.contains("vertices"))
                    for (const auto& v : r.at("vertices"))
                        res.reserve_vertex(
                            Cell{v.at(0).get<int>(), v.at(1).get<int>()},
                            v.at(2).get<Tick>());
                if (r.contains("edges"))
                    for (const auto& e : r.at("edges"))
                        res.reserve_edge(
                            Cell{e.at(0).get<int>(), e.at(1).get<int>()},
                            Cell{e.at(2).get<int>(), e.at(3).get<int>()},
                            e.at(4).get<Tick>());
            }
            Tick max_tick = c.value(
                "max_tick",
                start_tick + 4 * (layout->width + layout->height) + 64);
            auto arrival = spacetime_bfs_arrival(*layout, start, goal,
                                                 start_tick, res, max_tick);
            out << "pathing[" << idx << "] ";
            if (arrival)
                out << "arrival_tick=" << *arrival << "\n";
            else
                out << "no_path\n";
            ++idx;
        }
    }

    if (j.contains("assignment")) {
        const auto& a = j.at("assignment");
        AssignWorld world;
        world.layout = &*layout;
        for (auto& [kind_name, n] : a.at("free").items()) {
            auto kind = station_kind_from_string(kind_name);
            if (!kind)
                throw std::invalid_argument("scenario: unknown kind " +
                                            kind_name);
            world.free[static_cast<int>(*kind)] = n.get<int>();
        }
        for (const auto& vj : a.at("vehicles")) {
            AssignVehicle v;
            v.id = vj.value("id", 0);
            v.pos = cell_from_json(vj.at("pos"));
            if (vj.contains("completed"))
                for (const auto& k : vj.at("completed"))
                    v.completed.add(
                        *station_kind_from_string(k.get<std::string>()));
            if (vj.contains("previous") && !vj.at("previous").is_null())
                v.previous = station_kind_from_string(
                    vj.at("previous").get<std::string>());
            AssignResult r = assign_steps(v, world);
            out << "assignment[" << v.id << "] ";
            switch (r.outcome) {
                case AssignOutcome::ToStation:
                    out << "station=" << to_string(r.station) << "\n";
                    break;
                case AssignOutcome::ToParking:
                    out << "parking\n";
                    break;
                case AssignOutcome::ToExit:
                    out << "exit\n";
                    break;
                case AssignOutcome::Impossible:
                    out << "impossible\n";
                    break;
            }
        }
    }
    return out.str();
}

}  // namespace yardsim::oracle
