#include "yardsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "yardsim/baseline.hpp"
#include "yardsim/pathing.hpp"

namespace yardsim {

namespace {

// Substream tags under the run seed.
constexpr uint64_t kStreamArrivals = 0xA1;
constexpr uint64_t kStreamVehicle = 0xA2;
constexpr uint64_t kStreamParking = 0xA3;

[[noreturn]] void die(const char* what) {
    std::fprintf(stderr, "yardsim: engine invariant broken: %s\n", what);
    std::abort();
}

}  // namespace

const char* to_string(ControllerKind kind) {
    return kind == ControllerKind::Orchestrated ? "orchestrated" : "isolated";
}

std::optional<ControllerKind> controller_from_string(std::string_view name) {
    if (name == "orchestrated") return ControllerKind::Orchestrated;
    if (name == "isolated") return ControllerKind::Isolated;
    return std::nullopt;
}

const char* to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Completed: return "completed";
        case RunStatus::FacilityFailure: return "facility_failure";
        case RunStatus::TimeCap: return "time_cap";
    }
    return "?";
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Entered: return "entered";
        case EventKind::Assigned: return "assigned";
        case EventKind::StationEntered: return "station_entered";
        case EventKind::ServiceDone: return "service_done";
        case EventKind::InspectionFailed: return "inspection_failed";
        case EventKind::Impounded: return "impounded";
        case EventKind::ParkingEntered: return "parking_entered";
        case EventKind::ParkingLeft: return "parking_left";
        case EventKind::Exited: return "exited";
        case EventKind::Blocked: return "blocked";
        case EventKind::Stranded: return "stranded";
        case EventKind::FacilityFailed: return "facility_failed";
    }
    return "?";
}

std::string event_to_line(const EventRecord& ev, double tick_seconds) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "{\"tick\":%lld,\"t_s\":%.3f,\"vehicle\":%d,\"event\":\"%s\","
                  "\"a\":%d,\"b\":%d}",
                  static_cast<long long>(ev.tick), ev.tick * tick_seconds,
                  ev.vehicle, to_string(ev.kind), ev.a, ev.b);
    return buf;
}

std::array<ServiceDist, kStationKindCount> default_service_dists() {
    std::array<ServiceDist, kStationKindCount> d{};
    d[static_cast<int>(StationKind::Charging)] = {3600.0, 1800.0};
    d[static_cast<int>(StationKind::Inspection)] = {600.0, 120.0};
    d[static_cast<int>(StationKind::Cleaning)] = {1200.0, 120.0};
    d[static_cast<int>(StationKind::Loading)] = {1200.0, 120.0};
    d[static_cast<int>(StationKind::Parking)] = {120.0, 120.0};
    return d;
}

double SimConfig::tick_seconds() const {
    double cell = layout ? layout->cell_size_m : 10.0;
    return cell * 3.6 / speed_kmh;
}

Tick SimConfig::seconds_to_ticks(double s) const {
    if (s <= 0) return 0;
    return static_cast<Tick>(std::ceil(s / tick_seconds() - 1e-9));
}

void SimConfig::validate() const {
    if (!layout) throw std::invalid_argument("config: layout missing");
    auto violations = validate_layout(*layout);
    if (!violations.empty())
        throw std::invalid_argument("config: layout invalid: " +
                                    violations.front());
    if (demand < 0) throw std::invalid_argument("config: demand < 0");
    if (window_s <= 0) throw std::invalid_argument("config: window <= 0");
    for (const auto& d : service)
        if (d.mean_s < 0 || d.sd_s < 0)
            throw std::invalid_argument("config: negative service parameter");
    if (inspection_fail_rate < 0 || inspection_fail_rate > 1)
        throw std::invalid_argument("config: inspection_fail_rate outside [0,1]");
    if (speed_kmh <= 0) throw std::invalid_argument("config: speed <= 0");
    if (max_sim_time_s <= 0) throw std::invalid_argument("config: max_sim_time <= 0");
    if (trust_min > trust_max)
        throw std::invalid_argument("config: trust range inverted");
    for (int k = 0; k < kStationKindCount; ++k) {
        if (prefill[k] < 0 || prefill[k] > layout->stations[k].berth_count)
            throw std::invalid_argument("config: prefill exceeds berths");
    }
}

std::vector<double> sample_arrivals(double demand, double window_s, Rng& rng) {
    std::vector<double> out;
    if (demand <= 0 || window_s <= 0) return out;
    double rate = demand / window_s;
    double t = rng.exponential(rate);
    while (t < window_s) {
        out.push_back(t);
        t += rng.exponential(rate);
    }
    return out;
}

double sample_service_time(StationKind kind, const ServiceDist& dist, Rng& rng,
                           double tick_seconds) {
    (void)tick_seconds;  // durations are rounded up to whole ticks at use
    double x = rng.normal(dist.mean_s, dist.sd_s);
    double lo = 60.0;
    double hi = kind == StationKind::Charging ? 7200.0 : 0.0;
    if (x < lo) x = lo;
    if (hi > 0 && x > hi) x = hi;
    return x;
}

double expected_circuit_time_s(
    const YardLayout& layout,
    const std::array<ServiceDist, kStationKindCount>& service,
    double tick_seconds) {
    double service_sum = 0;
    for (StationKind k : kCircuitKinds)
        service_sum += service[static_cast<int>(k)].mean_s;

    auto dist = [&](Cell a, Cell b) -> double {
        auto d = grid_distance(layout, a, b);
        return d ? static_cast<double>(*d) : 0.0;
    };
    Cell e = layout.entrance;
    Cell x = layout.exit;
    Cell gc = layout.station(StationKind::Charging).gate;
    Cell gi = layout.station(StationKind::Inspection).gate;
    Cell gw = layout.station(StationKind::Cleaning).gate;
    Cell gl = layout.station(StationKind::Loading).gate;

    std::array<Cell, 3> firsts = {gc, gi, gw};
    std::array<int, 3> idx = {0, 1, 2};
    double best = -1;
    std::sort(idx.begin(), idx.end());
    do {
        Cell a = firsts[idx[0]], b = firsts[idx[1]], c = firsts[idx[2]];
        double cells = dist(e, a) + dist(a, b) + dist(b, c) + dist(c, gl) +
                       dist(gl, x);
        if (best < 0 || cells < best) best = cells;
    } while (std::next_permutation(idx.begin(), idx.end()));

    return service_sum + best * tick_seconds;
}

namespace {

// Engine-private per-vehicle state.
struct VehicleExt {
    Tick service_end = -1;
    bool service_done = false;  // finished, waiting for a clear gate
    StationKind serving_kind = StationKind::Charging;
    Tick parked_until = -1;     // isolated dwell end
    bool pending_depart = false;
    LoopState loop;
    bool standing = false;   // on grid without a committed route
    bool stepping_aside = false;  // current route clears a gate, not a goal
    int path_dwell = 0;           // dwell ticks used when the path committed
    bool pushed = false;          // retreat-hopped this tick (make way)
    bool was_blocked = false;  // event dedup
    std::optional<SpaceTimePath> hold;  // committed wait while standing
    bool pending_impound = false;
    bool plan_requested = false;

    Rng park_rng{0};
    std::vector<TrajectorySegment> segments;
};

struct Engine {
    const SimConfig& cfg;
    const YardLayout& layout;
    double tick_s;
    double expected_circuit;
    ControllerKind ctrl;

    std::array<DistanceField, kStationKindCount> gate_fields;
    DistanceField exit_field;
    AssignmentWorld world;
    ReservationTable table;

    std::vector<Vehicle> vehicles;
    std::vector<VehicleExt> ext;
    std::vector<uint8_t> forbidden;  // standing-vehicle cells

    std::vector<double> arrival_times;
    size_t next_arrival = 0;

    RunOutcome out;
    Tick now = 0;
    bool trigger = false;        // orchestrated replan pending
    std::vector<VehicleId> plan_queue;
    bool failed = false;
    // Vehicles waiting inside each station for a clear gate; while any
    // wait, no new route may end at that gate (departures would starve
    // under a continuous arrival stream).
    std::array<int, kStationKindCount> waiting_departures{};
    // scratch buffers for the per-tick breadth-first sweeps
    std::vector<uint8_t> bfs_seen;
    std::vector<Cell> bfs_queue;

    explicit Engine(const SimConfig& c)
        : cfg(c), layout(*c.layout), tick_s(c.tick_seconds()),
          ctrl(c.controller), table(*c.layout) {
        expected_circuit =
            expected_circuit_time_s(layout, cfg.service, tick_s);
        for (int k = 0; k < kStationKindCount; ++k)
            gate_fields[static_cast<size_t>(k)] = distance_field(
                layout, layout.stations[static_cast<size_t>(k)].gate);
        exit_field = distance_field(layout, layout.exit);
        world.layout = &layout;
        world.gate_fields = &gate_fields;
        for (int k = 0; k < kStationKindCount; ++k) {
            world.avail[static_cast<size_t>(k)].berth_count =
                layout.stations[static_cast<size_t>(k)].berth_count;
            world.avail[static_cast<size_t>(k)].permanent_holds =
                cfg.prefill[static_cast<size_t>(k)];
        }
        forbidden.assign(static_cast<size_t>(layout.cell_count()), 0);

        Rng arr_rng(mix_seed({cfg.seed, kStreamArrivals}));
        arrival_times = sample_arrivals(cfg.demand, cfg.window_s, arr_rng);
        out.controller = ctrl;
        out.seed = cfg.seed;
    }

    double now_s() const { return static_cast<double>(now) * tick_s; }

    void log(EventKind kind, VehicleId vid, int32_t a = 0, int32_t b = 0) {
        if (cfg.collect_events)
            out.events.push_back(EventRecord{now, vid, kind, a, b});
    }

    void record_pos(VehicleId vid, Cell c) {
        if (!cfg.collect_trajectories) return;
        auto& segs = ext[static_cast<size_t>(vid)].segments;
        if (!segs.empty()) {
            TrajectorySegment& last = segs.back();
            Tick next = last.start_tick + static_cast<Tick>(last.cells.size());
            if (next == now) {
                last.cells.push_back(c);
                return;
            }
        }
        segs.push_back(TrajectorySegment{now, {c}});
    }

    Cell goal_cell(const Vehicle& v) const {
        switch (v.goal) {
            case GoalKind::Station:
                return layout.station(v.goal_station).gate;
            case GoalKind::Park:
                return layout.station(StationKind::Parking).gate;
            case GoalKind::ExitYard:
                return layout.exit;
            default:
                die("goal_cell without goal");
        }
    }

    const DistanceField& field_for(const Vehicle& v) const {
        if (v.goal == GoalKind::ExitYard) return exit_field;
        StationKind k = v.goal == GoalKind::Park ? StationKind::Parking
                                                 : v.goal_station;
        return gate_fields[static_cast<size_t>(k)];
    }

    bool standing_on(Cell c) const {
        return forbidden[static_cast<size_t>(layout.index(c))] != 0;
    }

    void request_plan(VehicleId vid) {
        VehicleExt& e = ext[static_cast<size_t>(vid)];
        if (!e.plan_requested) {
            e.plan_requested = true;
            plan_queue.push_back(vid);
        }
    }

    // Drops the vehicle's committed route from the next tick on and turns
    // it into a standing obstacle. Vehicles holding stale claims on this
    // cell are displaced so the stander can always extend its wait.
    void become_standing(Vehicle& v) {
        VehicleExt& e = ext[static_cast<size_t>(v.id)];
        if (e.standing) {
            extend_hold(v);
            return;
        }
        if (v.path) {
            table.release_future(*v.path, now + 1, v.id, e.path_dwell);
            v.path.reset();
            e.path_dwell = 0;
            e.stepping_aside = false;
        }
        for (int32_t owner : table.future_vertex_owners(v.pos, now)) {
            if (owner == v.id) continue;
            displace(owner);
        }
        e.standing = true;
        forbidden[static_cast<size_t>(layout.index(v.pos))] = 1;
        extend_hold(v);
    }

    // Re-commits the stander's (cell, now) and (cell, now+1) claims.
    void extend_hold(Vehicle& v) {
        VehicleExt& e = ext[static_cast<size_t>(v.id)];
        SpaceTimePath hold;
        hold.start_tick = now;
        hold.steps = {v.pos, v.pos};
        table.commit(hold, v.id, 0);
        e.hold = hold;
    }

    void leave_standing(Vehicle& v) {
        VehicleExt& e = ext[static_cast<size_t>(v.id)];
        if (!e.standing) return;
        e.standing = false;
        forbidden[static_cast<size_t>(layout.index(v.pos))] = 0;
        if (e.hold) {
            table.release_future(*e.hold, now + 1, v.id, 0);
            e.hold.reset();
        }
    }

    // A standing vehicle appeared under this vehicle's committed route; the
    // route is stale and must be rebuilt around the obstacle. Never skipped:
    // a stale claim left behind collides with the stander's wait hold.
    void displace(int32_t owner) {
        Vehicle& w = vehicles[static_cast<size_t>(owner)];
        if (!w.on_grid) return;  // historical claim of a vehicle now inside
        if (w.path) {
            become_standing(w);  // releases the route, recurses safely
        }
        request_plan(owner);
    }

    // ---- grid appearance -------------------------------------------------

    bool cell_clear_for_appear(Cell c) const {
        if (standing_on(c)) return false;
        if (!table.vertex_free(c, now, -1)) return false;
        if (!table.vertex_free(c, now + 1, -1)) return false;
        return true;
    }

    void appear(Vehicle& v, Cell c) {
        v.on_grid = true;
        v.pos = c;
        v.status = VehicleStatus::Moving;
        VehicleExt& e = ext[static_cast<size_t>(v.id)];
        e.standing = false;  // become_standing below sets the obstacle
        become_standing(v);
        record_pos(v.id, c);
        request_plan(v.id);
    }

    // ---- spawning ---------------------------------------------------------

    void draw_vehicle(Vehicle& v, VehicleExt& e, int index) {
        Rng rng(mix_seed({cfg.seed, kStreamVehicle,
                          static_cast<uint64_t>(index)}));
        v.remaining_charge_s = sample_service_time(
            StationKind::Charging,
            cfg.service[static_cast<int>(StationKind::Charging)], rng, tick_s);
        v.trust_score = rng.uniform(cfg.trust_min, cfg.trust_max);
        v.inspection_fails = rng.bernoulli(cfg.inspection_fail_rate);
        v.service_s[static_cast<int>(StationKind::Charging)] =
            v.remaining_charge_s;
        for (StationKind k : {StationKind::Inspection, StationKind::Cleaning,
                              StationKind::Loading})
            v.service_s[static_cast<int>(k)] = sample_service_time(
                k, cfg.service[static_cast<int>(k)], rng, tick_s);
        e.park_rng = Rng(mix_seed({cfg.seed, kStreamParking,
                                   static_cast<uint64_t>(index)}));
    }

    void try_spawns() {
        while (next_arrival < arrival_times.size()) {
            double at = arrival_times[next_arrival];
            Tick want = cfg.seconds_to_ticks(at);
            if (want > now) break;
            if (!cell_clear_for_appear(layout.entrance)) break;  // FIFO delay

            VehicleId id = static_cast<VehicleId>(vehicles.size());
            vehicles.push_back(Vehicle{});
            ext.push_back(VehicleExt{});
            Vehicle& v = vehicles.back();
            VehicleExt& e = ext.back();
            v.id = id;
            v.entry_time_s = now_s();
            v.entry_tick = now;
            draw_vehicle(v, e, static_cast<int>(next_arrival));

            VehicleRecord rec;
            rec.id = id;
            rec.arrival_time_s = at;
            rec.spawn_tick = now;
            rec.charge_s = v.remaining_charge_s;
            rec.trust = v.trust_score;
            rec.service_s = v.service_s;
            rec.inspection_fails = v.inspection_fails;
            out.vehicles.push_back(rec);

            ++next_arrival;
            ++out.arrivals;
            appear(v, layout.entrance);
            log(EventKind::Entered, id);

            if (ctrl == ControllerKind::Orchestrated) {
                trigger = true;
            } else {
                v.goal = GoalKind::Station;
                v.goal_station = next_target(v, e.loop, std::nullopt);
            }
        }
    }

    // ---- capacity events ---------------------------------------------------

    void process_pending_impounds() {
        StationAvail& park = world.at(StationKind::Parking);
        while (park.occupied + park.permanent_holds < park.berth_count) {
            VehicleId pick = -1;
            for (const Vehicle& v : vehicles) {
                if (ext[static_cast<size_t>(v.id)].pending_impound) {
                    pick = v.id;
                    break;
                }
            }
            if (pick < 0) break;
            VehicleExt& e = ext[static_cast<size_t>(pick)];
            e.pending_impound = false;
            release_occupied(world, StationKind::Inspection);
            ++park.permanent_holds;
            displace_parking_overflow();
            log(EventKind::Impounded, pick);
            finalize_vehicle(pick);
            if (ctrl == ControllerKind::Orchestrated) trigger = true;
        }
    }

    // An impound hold may push promised parking capacity past the berth
    // count; the lowest-priority inbound claim is cancelled and replanned.
    void displace_parking_overflow() {
        StationAvail& park = world.at(StationKind::Parking);
        while (park.committed() > park.berth_count) {
            Vehicle* worst = nullptr;
            PriorityScore worst_score;
            for (Vehicle& v : vehicles) {
                if (v.goal != GoalKind::Park ||
                    v.status == VehicleStatus::Parked || v.terminal())
                    continue;
                PriorityScore s = priority_score(v, now_s(), expected_circuit,
                                                 cfg.weights);
                if (!worst || worst_score.ranks_before(s)) {
                    worst = &v;
                    worst_score = s;
                }
            }
            if (!worst) die("parking overflow without inbound claims");
            release_inbound(world, StationKind::Parking);
            worst->goal = GoalKind::None;
            if (worst->on_grid && worst->path) become_standing(*worst);
            if (worst->on_grid) request_plan(worst->id);
            trigger = true;
        }
    }

    void set_parked_pending(Vehicle& v, bool pending) {
        VehicleExt& e = ext[static_cast<size_t>(v.id)];
        if (e.pending_depart == pending) return;
        e.pending_depart = pending;
        waiting_departures[static_cast<size_t>(
            static_cast<int>(StationKind::Parking))] += pending ? 1 : -1;
        world.at(StationKind::Parking).departing += pending ? 1 : -1;
    }

    void finalize_vehicle(VehicleId vid) {
        Vehicle& v = vehicles[static_cast<size_t>(vid)];
        VehicleRecord& rec = out.vehicles[static_cast<size_t>(vid)];
        rec.final_status = v.status;
        if (v.status == VehicleStatus::Exited) rec.exit_time_s = now_s();
    }

    // ---- arrivals at route ends -------------------------------------------

    void handle_route_end(Vehicle& v) {
        VehicleExt& e = ext[static_cast<size_t>(v.id)];
        Cell here = v.pos;
        if (e.stepping_aside) {
            // The route only cleared a gate; stand here and retry the goal.
            e.stepping_aside = false;
            v.path.reset();
            e.path_dwell = 0;
            become_standing(v);
            request_plan(v.id);
            return;
        }
        if (v.goal == GoalKind::ExitYard) {
            if (!(here == layout.exit)) die("exit arrival off the exit cell");
            v.on_grid = false;
            v.path.reset();
            v.status = VehicleStatus::Exited;
            ++out.exited;
            out.last_exit_s = now_s();
            if (now_s() <= cfg.window_s) ++out.exits_in_window;
            log(EventKind::Exited, v.id);
            finalize_vehicle(v.id);
            return;
        }

        StationKind k = v.goal == GoalKind::Park ? StationKind::Parking
                                                 : v.goal_station;
        if (!(here == layout.station(k).gate)) die("gate arrival off the gate");

        if (ctrl == ControllerKind::Orchestrated) {
            // A promised berth is waiting.
            convert_inbound_to_occupied(world, k);
            enter_station(v, k);
            return;
        }

        StationAvail& a = world.at(k);
        int free_physical = a.berth_count - a.occupied - a.permanent_holds;
        GateDecision d = on_gate_arrival(v, e.loop, k, free_physical);
        switch (d) {
            case GateDecision::Enter:
                ++a.occupied;
                enter_station(v, k);
                break;
            case GateDecision::Continue: {
                StationKind nxt = next_target(v, e.loop, k);
                v.goal = nxt == StationKind::Parking ? GoalKind::Park
                                                     : GoalKind::Station;
                v.goal_station = nxt;
                v.path.reset();
                become_standing(v);
                request_plan(v.id);
                break;
            }
            case GateDecision::Stranded:
                strand(v);
                break;
        }
    }

    void enter_station(Vehicle& v, StationKind k) {
        VehicleExt& e = ext[static_cast<size_t>(v.id)];
        v.on_grid = false;
        v.path.reset();
        v.goal = GoalKind::None;
        if (k == StationKind::Parking) {
            v.status = VehicleStatus::Parked;
            set_parked_pending(v, false);
            log(EventKind::ParkingEntered, v.id);
            if (ctrl == ControllerKind::Isolated) {
                double dwell = sample_service_time(
                    StationKind::Parking,
                    cfg.service[static_cast<int>(StationKind::Parking)],
                    e.park_rng, tick_s);
                e.parked_until = now + cfg.seconds_to_ticks(dwell);
            }
        } else {
            v.status = VehicleStatus::Serving;
            e.serving_kind = k;
            e.service_done = false;
            Tick dur = cfg.seconds_to_ticks(
                v.service_s[static_cast<size_t>(static_cast<int>(k))]);
            if (dur < 1) dur = 1;
            e.service_end = now + dur;
            log(EventKind::StationEntered, v.id, static_cast<int>(k));
        }
    }

    void strand(Vehicle& v) {
        v.status = VehicleStatus::Stranded;
        ++out.stranded;
        failed = true;
        out.status = RunStatus::FacilityFailure;
        out.failure_time_s = now_s();
        log(EventKind::Stranded, v.id);
        log(EventKind::FacilityFailed, v.id);
        finalize_vehicle(v.id);
    }

    // ---- service lifecycle --------------------------------------------------

    void service_completions() {
        for (Vehicle& v : vehicles) {
            VehicleExt& e = ext[static_cast<size_t>(v.id)];
            if (v.status == VehicleStatus::Serving && !e.service_done &&
                e.service_end == now) {
                e.service_done = true;
                StationKind k = e.serving_kind;
                if (k == StationKind::Charging) v.remaining_charge_s = 0;
                if (k == StationKind::Inspection && v.inspection_fails) {
                    log(EventKind::InspectionFailed, v.id);
                    v.status = VehicleStatus::Impounded;
                    ++out.impounded;
                    StationAvail& park = world.at(StationKind::Parking);
                    if (park.occupied + park.permanent_holds <
                        park.berth_count) {
                        release_occupied(world, StationKind::Inspection);
                        ++park.permanent_holds;
                        displace_parking_overflow();
                        log(EventKind::Impounded, v.id);
                        finalize_vehicle(v.id);
                    } else {
                        // Holds its inspection berth until parking frees.
                        e.pending_impound = true;
                        finalize_vehicle(v.id);
                    }
                    if (ctrl == ControllerKind::Orchestrated) trigger = true;
                    continue;
                }
                v.completed.add(k);
                ++waiting_departures[static_cast<size_t>(static_cast<int>(k))];
                // completing a task frees the berth for assignment; the
                // vehicle clears the bay as soon as the gate allows
                ++world.at(k).departing;
                log(EventKind::ServiceDone, v.id, static_cast<int>(k));
                if (ctrl == ControllerKind::Orchestrated) {
                    trigger = true;
                } else {
                    // the isolated rules pick the departure target now;
                    // the vehicle leaves once a route clears
                    if (v.circuit_complete()) {
                        v.goal = GoalKind::ExitYard;
                    } else {
                        StationKind nxt = next_target(v, e.loop, k);
                        v.goal = nxt == StationKind::Parking
                                     ? GoalKind::Park
                                     : GoalKind::Station;
                        v.goal_station = nxt;
                    }
                }
            }
            if (ctrl == ControllerKind::Isolated &&
                v.status == VehicleStatus::Parked && !e.pending_depart &&
                e.parked_until == now) {
                set_parked_pending(v, true);
                StationKind nxt = next_target(v, e.loop, StationKind::Parking);
                v.goal = nxt == StationKind::Parking ? GoalKind::Park
                                                     : GoalKind::Station;
                v.goal_station = nxt;
            }
        }
    }

    // Vehicles finished with service or leaving parking re-enter the grid
    // at their gate only once the cell is clear AND a route away exists;
    // appearing without a way out would seal the gate for everyone.
    // Returns whether anything departed.
    bool reentries() {
        bool departed = false;
        for (Vehicle& v : vehicles) {
            VehicleExt& e = ext[static_cast<size_t>(v.id)];
            if (v.status == VehicleStatus::Serving && e.service_done &&
                !e.pending_impound && !v.terminal()) {
                if (v.goal == GoalKind::None) continue;  // not yet assigned
                Cell g = layout.station(e.serving_kind).gate;
                if (!depart_onto(v, g)) continue;
                --world.at(e.serving_kind).departing;
                release_occupied(world, e.serving_kind);
                e.service_done = false;
                --waiting_departures[static_cast<size_t>(
                    static_cast<int>(e.serving_kind))];
                v.status = VehicleStatus::Moving;
                departed = true;
                if (ctrl == ControllerKind::Orchestrated) trigger = true;
                process_pending_impounds();
            } else if (v.status == VehicleStatus::Parked && e.pending_depart) {
                // Orchestrated vehicles leave only once a station (or the
                // exit) was promised; isolated vehicles leave when the
                // dwell ends.
                if (ctrl == ControllerKind::Orchestrated &&
                    v.goal != GoalKind::Station && v.goal != GoalKind::ExitYard)
                    continue;
                Cell g = layout.station(StationKind::Parking).gate;
                if (!depart_onto(v, g)) continue;
                set_parked_pending(v, false);
                release_occupied(world, StationKind::Parking);
                v.status = VehicleStatus::Moving;
                departed = true;
                log(EventKind::ParkingLeft, v.id);
                if (ctrl == ControllerKind::Orchestrated) trigger = true;
                process_pending_impounds();
            }
        }
        return departed;
    }

    // Appears at the gate with a committed route (to the goal, or a hop
    // aside when the goal route is blocked). False = stay inside.
    bool depart_onto(Vehicle& v, Cell g) {
        if (!cell_clear_for_appear(g)) return false;
        VehicleExt& e = ext[static_cast<size_t>(v.id)];
        std::optional<SpaceTimePath> route = plan_goal_route(v, g);
        bool aside = false;
        if (route && route->steps.size() == 1) {
            // already at the goal gate: nothing sensible to do this tick
            route.reset();
        }
        if (!route) {
            route = plan_hop(v, g, /*toward_goal=*/false);
            aside = true;
        }
        if (!route) return false;
        v.on_grid = true;
        v.pos = g;
        table.commit(*route, v.id, aside ? 1 : 0);
        v.path = route;
        e.path_dwell = aside ? 1 : 0;
        e.stepping_aside = aside;
        e.standing = false;
        e.was_blocked = false;
        record_pos(v.id, g);
        return true;
    }

    // ---- orchestrated pass ---------------------------------------------------

    void orchestrated_pass() {
        // Every vehicle not actively serving: movers, parked vehicles and
        // vehicles whose service finished but have not yet left the bay.
        std::vector<Vehicle*> candidates;
        for (Vehicle& v : vehicles) {
            const VehicleExt& e = ext[static_cast<size_t>(v.id)];
            if (v.status == VehicleStatus::Moving ||
                v.status == VehicleStatus::Parked ||
                (v.status == VehicleStatus::Serving && e.service_done &&
                 !e.pending_impound))
                candidates.push_back(&v);
        }
        if (candidates.empty()) return;

        ReplanResult rr = replan_assignments(candidates, world, now_s(),
                                             expected_circuit, cfg.weights);
        if (rr.impossible) {
            strand(vehicles[static_cast<size_t>(rr.stranded_vehicle)]);
            return;
        }
        for (auto& [vid, a] : rr.assignments) {
            Vehicle& v = vehicles[static_cast<size_t>(vid)];
            VehicleExt& e = ext[static_cast<size_t>(vid)];
            GoalKind old_goal = v.goal;
            StationKind old_station = v.goal_station;
            v.goal = a.kind;
            if (a.kind == GoalKind::Station) v.goal_station = a.station;

            bool changed = old_goal != v.goal ||
                           (v.goal == GoalKind::Station &&
                            old_station != v.goal_station);
            if (changed)
                log(EventKind::Assigned, vid, static_cast<int>(v.goal),
                    static_cast<int>(v.goal_station));

            if (v.status == VehicleStatus::Parked) {
                set_parked_pending(v, v.goal == GoalKind::Station ||
                                          v.goal == GoalKind::ExitYard);
                continue;
            }
            if (v.status == VehicleStatus::Serving) continue;  // departs later
            // On grid: keep the current route when it already ends at the
            // (unchanged) goal; a gate-clearing hop also runs to completion.
            Cell want = goal_cell(v);
            if (v.path && (e.stepping_aside || v.path->goal() == want))
                continue;
            if (v.path) become_standing(v);
            request_plan(vid);
        }
    }

    // ---- route planning --------------------------------------------------------

    void plan_routes() {
        if (plan_queue.empty()) return;
        std::vector<Vehicle*> todo;
        for (VehicleId vid : plan_queue) {
            Vehicle& v = vehicles[static_cast<size_t>(vid)];
            ext[static_cast<size_t>(vid)].plan_requested = false;
            if (v.on_grid && !v.terminal() && v.goal != GoalKind::None &&
                !v.path)
                todo.push_back(&v);
        }
        plan_queue.clear();
        if (todo.empty()) return;

        if (ctrl == ControllerKind::Orchestrated) {
            std::vector<const Vehicle*> refs(todo.begin(), todo.end());
            auto ranked = rank_vehicles(std::move(refs), now_s(),
                                        expected_circuit, cfg.weights);
            todo.clear();
            for (const Vehicle* v : ranked)
                todo.push_back(const_cast<Vehicle*>(v));
        } else {
            std::sort(todo.begin(), todo.end(),
                      [](const Vehicle* a, const Vehicle* b) {
                          return a->id < b->id;
                      });
        }

        for (Vehicle* vp : todo) {
            Vehicle& v = *vp;
            VehicleExt& e = ext[static_cast<size_t>(v.id)];
            if (v.path || !v.on_grid || v.terminal())
                continue;  // routed meanwhile (make-way push)
            std::optional<SpaceTimePath> path = plan_goal_route(v, v.pos);
            if (path && path->steps.size() == 1) {
                // Already at the goal: treat as an immediate arrival.
                leave_standing(v);
                v.path = path;
                e.path_dwell = 0;
                table.commit(*path, v.id, 0);
                e.was_blocked = false;
                handle_route_end(v);
                if (failed) return;
                continue;
            }
            bool aside = false;
            if (!path) {
                // A vehicle squatting a gate seals it for everyone: hop
                // onto any nearby road cell. On plain road, queue up: hop
                // strictly closer to the goal so jams drain toward gates.
                path = plan_hop(v, v.pos,
                                /*toward_goal=*/!layout.is_stopping(v.pos));
                aside = true;
            }
            if (!path && layout.is_stopping(v.pos)) {
                // Every mouth is squatted by queued vehicles; push them
                // back one cell and squeeze out behind them.
                make_way_around(v, 3);
                path = plan_hop(v, v.pos, false);
                aside = true;
            }
            if (path) {
                leave_standing(v);
                table.commit(*path, v.id, aside ? 1 : 0);
                v.path = path;
                e.path_dwell = aside ? 1 : 0;
                e.stepping_aside = aside;
                e.was_blocked = false;
                continue;
            }
            if (!e.standing) become_standing(v);
            if (!e.was_blocked) {
                log(EventKind::Blocked, v.id);
                e.was_blocked = true;
            }
        }
    }

    // Timed route to the vehicle's goal from `from`, or nullopt. Cheap
    // refusals first: a stander on the goal cell, or no static route around
    // the standing obstacles (the timed search would only fail after
    // exhausting its whole bound).
    std::optional<SpaceTimePath> plan_goal_route(const Vehicle& v, Cell from) {
        Cell goal = goal_cell(v);
        if (standing_on(goal) && !(goal == from)) return std::nullopt;
        if (v.goal == GoalKind::Station || v.goal == GoalKind::Park) {
            StationKind k = v.goal == GoalKind::Park ? StationKind::Parking
                                                     : v.goal_station;
            if (waiting_departures[static_cast<size_t>(static_cast<int>(k))] > 0)
                return std::nullopt;  // outbound traffic owns the gate
        }
        if (!statically_reachable(from, goal)) return std::nullopt;
        PlanOptions opts;
        opts.forbidden = &forbidden;
        opts.respect_stopping_cells = true;
        return plan_path(layout, from, goal, now, table, v.id, field_for(v),
                         opts);
    }

    // Breadth-first reachability honoring standing obstacles and the
    // goal-or-start-only rule for stopping cells.
    bool statically_reachable(Cell from, Cell to) {
        if (from == to) return true;
        bfs_seen.assign(static_cast<size_t>(layout.cell_count()), 0);
        bfs_queue.clear();
        bfs_queue.push_back(from);
        bfs_seen[static_cast<size_t>(layout.index(from))] = 1;
        size_t head = 0;
        while (head < bfs_queue.size()) {
            Cell c = bfs_queue[head++];
            const Cell neighbors[4] = {{c.x + 1, c.y}, {c.x - 1, c.y},
                                       {c.x, c.y + 1}, {c.x, c.y - 1}};
            for (Cell n : neighbors) {
                if (!layout.in_bounds(n)) continue;
                if (n == to) return true;
                if (!layout.traversable(n)) continue;
                if (forbidden[static_cast<size_t>(layout.index(n))]) continue;
                if (layout.is_stopping(n)) continue;
                uint8_t& seen = bfs_seen[static_cast<size_t>(layout.index(n))];
                if (seen) continue;
                seen = 1;
                bfs_queue.push_back(n);
            }
        }
        return false;
    }

    // Forces the standing vehicles around `v` to retreat-hop so a trapped
    // vehicle can squeeze off its cell. Recursive with a small depth: a
    // queued vehicle whose own escape is walled in pushes its neighbors
    // first. Only path-less standers move; committed routes stay intact.
    void make_way_around(Vehicle& v, int depth) {
        if (depth <= 0) return;
        const Cell neighbors[4] = {{v.pos.x + 1, v.pos.y},
                                   {v.pos.x - 1, v.pos.y},
                                   {v.pos.x, v.pos.y + 1},
                                   {v.pos.x, v.pos.y - 1}};
        for (Cell n : neighbors) {
            if (!layout.in_bounds(n) || !layout.traversable(n)) continue;
            if (!forbidden[static_cast<size_t>(layout.index(n))]) continue;
            Vehicle* blocker = nullptr;
            for (Vehicle& w : vehicles) {
                if (w.on_grid && !w.terminal() && w.pos == n &&
                    ext[static_cast<size_t>(w.id)].standing) {
                    blocker = &w;
                    break;
                }
            }
            if (!blocker) continue;
            VehicleExt& be = ext[static_cast<size_t>(blocker->id)];
            if (be.pushed) continue;  // one push per tick
            be.pushed = true;
            auto hop = plan_hop(*blocker, blocker->pos, false);
            if (!hop) {
                make_way_around(*blocker, depth - 1);
                hop = plan_hop(*blocker, blocker->pos, false);
            }
            if (hop) {
                leave_standing(*blocker);
                table.commit(*hop, blocker->id, 1);
                blocker->path = hop;
                be.path_dwell = 1;
                be.stepping_aside = true;
                be.was_blocked = false;
            }
        }
    }

    // A short hop onto a clear nearby road cell, committed by the caller
    // with a one-tick dwell. toward_goal restricts candidates to cells that
    // strictly lower the static distance to the goal (queuing); otherwise
    // any nearby road cell clears a gate.
    std::optional<SpaceTimePath> plan_hop(const Vehicle& v, Cell from,
                                          bool toward_goal) {
        const DistanceField& field = field_for(v);
        int32_t here = field.at(from);
        if (toward_goal && here <= 0) return std::nullopt;

        bfs_seen.assign(static_cast<size_t>(layout.cell_count()), 0);
        bfs_queue.clear();
        bfs_queue.push_back(from);
        bfs_seen[static_cast<size_t>(layout.index(from))] = 1;
        std::vector<int> depth = {0};
        size_t head = 0;
        const int depth_limit = 6;
        std::vector<std::pair<int32_t, Cell>> candidates;
        while (head < bfs_queue.size()) {
            Cell c = bfs_queue[head];
            int d = depth[head];
            ++head;
            if (d >= depth_limit) continue;
            const Cell neighbors[4] = {{c.x + 1, c.y}, {c.x - 1, c.y},
                                       {c.x, c.y + 1}, {c.x, c.y - 1}};
            for (Cell n : neighbors) {
                if (!layout.traversable(n) || layout.is_stopping(n)) continue;
                if (forbidden[static_cast<size_t>(layout.index(n))]) continue;
                uint8_t& seen = bfs_seen[static_cast<size_t>(layout.index(n))];
                if (seen) continue;
                seen = 1;
                bfs_queue.push_back(n);
                depth.push_back(d + 1);
                int32_t dn = field.at(n);
                if (toward_goal) {
                    if (dn >= 0 && dn < here) candidates.emplace_back(dn, n);
                } else {
                    candidates.emplace_back(d + 1, n);
                }
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [&](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first < b.first;
                      return layout.index(a.second) < layout.index(b.second);
                  });
        PlanOptions opts;
        opts.forbidden = &forbidden;
        opts.respect_stopping_cells = true;
        int attempts = 0;
        for (const auto& [key, cell] : candidates) {
            if (++attempts > 4) break;
            if (!table.future_vertex_owners(cell, now).empty()) continue;
            DistanceField f = distance_field(layout, cell);
            auto hop = plan_path(layout, from, cell, now, table, v.id, f,
                                 opts);
            if (hop && hop->steps.size() >= 2) return hop;
        }
        return std::nullopt;
    }

    // ---- per-tick skeleton ---------------------------------------------------

    void move_phase() {
        for (Vehicle& v : vehicles) {
            if (!v.on_grid || v.terminal()) continue;
            VehicleExt& e = ext[static_cast<size_t>(v.id)];
            if (v.path && v.path->covers(now)) {
                v.pos = v.path->at(now);
                record_pos(v.id, v.pos);
            } else if (e.standing) {
                extend_hold(v);
                record_pos(v.id, v.pos);
                request_plan(v.id);  // blocked vehicles retry every tick
            } else if (v.path) {
                die("route does not cover the current tick");
            }
        }
    }

    void route_end_phase() {
        for (Vehicle& v : vehicles) {
            if (failed) return;
            if (!v.on_grid || v.terminal() || !v.path) continue;
            if (v.path->arrival_tick() == now) handle_route_end(v);
        }
    }

    bool all_resolved() const {
        if (next_arrival < arrival_times.size()) return false;
        for (const Vehicle& v : vehicles) {
            if (v.status == VehicleStatus::Moving ||
                v.status == VehicleStatus::Serving ||
                v.status == VehicleStatus::Parked)
                return false;
            if (ext[static_cast<size_t>(v.id)].pending_impound) return false;
        }
        return true;
    }

    RunOutcome execute() {
        for (now = 0;; ++now) {
            if (now_s() > cfg.max_sim_time_s) {
                out.status = RunStatus::TimeCap;
                break;
            }
            for (VehicleExt& e : ext) e.pushed = false;

            move_phase();
            route_end_phase();
            if (failed) break;
            service_completions();
            reentries();
            try_spawns();
            // Alternate pass, route planning and departures until nothing
            // has work left; a departure frees a berth, which can trigger
            // another pass within the same tick.
            size_t guard = 0;
            for (;;) {
                if (ctrl == ControllerKind::Orchestrated && trigger) {
                    trigger = false;
                    orchestrated_pass();
                    if (failed) break;
                } else if (!plan_queue.empty()) {
                    plan_routes();
                    if (failed) break;
                } else if (!reentries()) {
                    break;
                }
                if (++guard > 20 * vehicles.size() + 200)
                    die("replan loop did not settle");
            }
            if (failed) break;

            if (all_resolved()) {
                out.status = RunStatus::Completed;
                break;
            }
            if (std::getenv("YS_DEBUG") && now % 2000 == 0 && now > 0) {
                std::fprintf(stderr, "tick %lld:\n", (long long)now);
                for (const Vehicle& v : vehicles) {
                    if (v.terminal()) continue;
                    const VehicleExt& e = ext[static_cast<size_t>(v.id)];
                    std::fprintf(stderr,
                                 "  v%d %s pos(%d,%d) goal=%d/%d standing=%d "
                                 "aside=%d path=%d svc_done=%d pend_dep=%d "
                                 "pend_imp=%d\n",
                                 v.id, to_string(v.status), v.pos.x, v.pos.y,
                                 (int)v.goal, (int)v.goal_station, e.standing,
                                 e.stepping_aside, (bool)v.path,
                                 e.service_done, e.pending_depart,
                                 e.pending_impound);
                }
                int nf = 0;
                for (size_t i = 0; i < forbidden.size(); ++i)
                    if (forbidden[i]) {
                        ++nf;
                        std::fprintf(stderr, "  forbidden (%d,%d)\n",
                                     (int)(i % layout.width),
                                     (int)(i / layout.width));
                    }
                std::fprintf(stderr, "  forbidden count %d, horizon %lld\n",
                             nf, (long long)table.horizon());
            }
        }
        out.end_tick = now;
        for (const Vehicle& v : vehicles)
            if (!v.terminal())
                out.vehicles[static_cast<size_t>(v.id)].final_status = v.status;
        if (cfg.collect_trajectories) {
            for (const Vehicle& v : vehicles) {
                VehicleTrajectory t;
                t.id = v.id;
                t.segments = std::move(ext[static_cast<size_t>(v.id)].segments);
                out.trajectories.push_back(std::move(t));
            }
        }
        return std::move(out);
    }
};

}  // namespace

RunOutcome run(const SimConfig& config) {
    config.validate();
    Engine engine(config);
    return engine.execute();
}

std::vector<std::string> audit_conflicts(
    const std::vector<VehicleTrajectory>& trajectories) {
    std::vector<std::string> out;
    std::unordered_map<uint64_t, VehicleId> occupied;   // (tick, cell)
    std::unordered_map<uint64_t, VehicleId> moves;      // (tick, from, to)
    // Exact packings: ticks < 2^24, packed cells < 2^20.
    auto pack = [](Cell c) {
        return static_cast<uint64_t>(static_cast<uint32_t>(c.y)) * 1024u +
               static_cast<uint64_t>(static_cast<uint32_t>(c.x));
    };
    auto vkey = [&](Tick t, Cell c) {
        return (static_cast<uint64_t>(t) << 20) | pack(c);
    };
    auto ekey = [&](Tick t, Cell a, Cell b) {
        return (static_cast<uint64_t>(t) << 40) | (pack(a) << 20) | pack(b);
    };
    for (const auto& traj : trajectories) {
        for (const auto& seg : traj.segments) {
            for (size_t i = 0; i < seg.cells.size(); ++i) {
                Tick t = seg.start_tick + static_cast<Tick>(i);
                Cell c = seg.cells[i];
                auto [it, inserted] = occupied.try_emplace(vkey(t, c), traj.id);
                if (!inserted && it->second != traj.id) {
                    std::ostringstream os;
                    os << "vertex conflict at (" << c.x << "," << c.y
                       << ") tick " << t << ": vehicles " << it->second
                       << " and " << traj.id;
                    out.push_back(os.str());
                }
                if (i > 0 && !(seg.cells[i - 1] == c)) {
                    Cell p = seg.cells[i - 1];
                    moves.emplace(ekey(t - 1, p, c), traj.id);
                    auto rev = moves.find(ekey(t - 1, c, p));
                    if (rev != moves.end() && rev->second != traj.id) {
                        std::ostringstream os;
                        os << "edge swap at tick " << t - 1 << " between ("
                           << p.x << "," << p.y << ") and (" << c.x << ","
                           << c.y << "): vehicles " << rev->second << " and "
                           << traj.id;
                        out.push_back(os.str());
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace yardsim
