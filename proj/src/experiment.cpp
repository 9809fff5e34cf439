#include "yardsim/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace yardsim {

void MatrixSpec::validate() const {
    if (sizes.empty()) throw std::invalid_argument("matrix: no yard sizes");
    for (YardSize s : sizes) {
        auto it = demands.find(s);
        if (it == demands.end() || it->second.empty())
            throw std::invalid_argument(std::string("matrix: no demands for ") +
                                        to_string(s));
        for (double d : it->second)
            if (d < 0)
                throw std::invalid_argument("matrix: negative demand");
    }
    if (replications <= 0)
        throw std::invalid_argument("matrix: replications <= 0");
    if (workers <= 0) throw std::invalid_argument("matrix: workers <= 0");
    if (window_s <= 0) throw std::invalid_argument("matrix: window <= 0");
    if (inspection_fail_rate < 0 || inspection_fail_rate > 1)
        throw std::invalid_argument("matrix: inspection_fail_rate outside [0,1]");
    for (const auto& d : service)
        if (d.mean_s < 0 || d.sd_s < 0)
            throw std::invalid_argument("matrix: negative service parameter");
}

uint64_t replication_seed(uint64_t base_seed, YardSize size, double demand,
                          int rep) {
    // Depends only on the cell key and rep index, so growing the
    // replication count never changes earlier runs.
    uint64_t demand_bits;
    static_assert(sizeof(demand_bits) == sizeof(demand));
    std::memcpy(&demand_bits, &demand, sizeof(demand_bits));
    return mix_seed({base_seed, 0xCE11ULL,
                     static_cast<uint64_t>(static_cast<int>(size)), demand_bits,
                     static_cast<uint64_t>(rep)});
}

double throughput(const RunOutcome& outcome) {
    if (outcome.exited <= 0 || outcome.last_exit_s <= 0) return 0;
    return static_cast<double>(outcome.exited) / (outcome.last_exit_s / 3600.0);
}

double failure_rate(const std::vector<RunRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("failure_rate: empty run list");
    int failures = 0;
    for (const RunRecord& r : records)
        if (r.status == RunStatus::FacilityFailure) ++failures;
    return static_cast<double>(failures) / static_cast<double>(records.size());
}

namespace {

struct MeanSd {
    double mean = 0;
    double sd = 0;
    int n = 0;
};

MeanSd mean_sd(const std::vector<double>& xs) {
    MeanSd out;
    out.n = static_cast<int>(xs.size());
    if (xs.empty()) return out;
    double sum = 0;
    for (double x : xs) sum += x;
    out.mean = sum / xs.size();
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(ss / (xs.size() - 1));
    }
    return out;
}

}  // namespace

AggregateStats aggregate(const std::vector<RunRecord>& records) {
    AggregateStats stats;
    // Group by (size, demand); paired deltas need both controllers.
    std::map<std::pair<int, double>, std::vector<const RunRecord*>> groups;
    for (const RunRecord& r : records)
        groups[{static_cast<int>(r.size), r.demand}].push_back(&r);

    for (auto& [key, rows] : groups) {
        std::map<int, const RunRecord*> orch, iso;
        std::vector<double> orch_thr, iso_thr;
        int orch_runs = 0, iso_runs = 0, orch_fail = 0, iso_fail = 0,
            orch_cap = 0, iso_cap = 0;
        for (const RunRecord* r : rows) {
            bool is_orch = r->controller == ControllerKind::Orchestrated;
            (is_orch ? orch : iso)[r->rep] = r;
            (is_orch ? orch_runs : iso_runs) += 1;
            if (r->status == RunStatus::FacilityFailure)
                (is_orch ? orch_fail : iso_fail) += 1;
            if (r->status == RunStatus::TimeCap)
                (is_orch ? orch_cap : iso_cap) += 1;
            if (r->status == RunStatus::Completed)
                (is_orch ? orch_thr : iso_thr).push_back(r->throughput);
        }
        std::vector<double> deltas;
        for (auto& [rep, ro] : orch) {
            auto it = iso.find(rep);
            if (it == iso.end()) continue;
            if (ro->status == RunStatus::Completed &&
                it->second->status == RunStatus::Completed)
                deltas.push_back(ro->throughput - it->second->throughput);
        }
        MeanSd delta_ms = mean_sd(deltas);

        for (ControllerKind ctrl :
             {ControllerKind::Orchestrated, ControllerKind::Isolated}) {
            bool is_orch = ctrl == ControllerKind::Orchestrated;
            CellStats cell;
            cell.size = static_cast<YardSize>(key.first);
            cell.demand = key.second;
            cell.controller = ctrl;
            cell.runs = is_orch ? orch_runs : iso_runs;
            cell.completed = static_cast<int>(
                (is_orch ? orch_thr : iso_thr).size());
            cell.failures = is_orch ? orch_fail : iso_fail;
            cell.timecaps = is_orch ? orch_cap : iso_cap;
            cell.failure_rate =
                cell.runs > 0
                    ? static_cast<double>(cell.failures) / cell.runs
                    : 0;
            MeanSd thr = mean_sd(is_orch ? orch_thr : iso_thr);
            cell.throughput_mean = thr.mean;
            cell.throughput_sd = thr.sd;
            cell.paired_delta_mean = delta_ms.mean;
            cell.paired_delta_sd = delta_ms.sd;
            cell.paired_count = delta_ms.n;
            if (cell.runs > 0) stats.cells.push_back(cell);
        }
    }
    return stats;
}

namespace {

RunRecord make_record(YardSize size, double demand, ControllerKind ctrl,
                      int rep, const MatrixSpec& spec) {
    SimConfig cfg;
    cfg.layout = &builtin_layout(size);
    cfg.controller = ctrl;
    cfg.demand = demand;
    cfg.window_s = spec.window_s;
    cfg.seed = replication_seed(spec.base_seed, size, demand, rep);
    cfg.service = spec.service;
    cfg.inspection_fail_rate = spec.inspection_fail_rate;
    cfg.weights = spec.weights;
    cfg.max_sim_time_s = spec.max_sim_time_s;
    cfg.collect_events = false;

    RunOutcome out = run(cfg);

    RunRecord rec;
    rec.size = size;
    rec.demand = demand;
    rec.controller = ctrl;
    rec.rep = rep;
    rec.seed = cfg.seed;
    rec.status = out.status;
    rec.arrivals = out.arrivals;
    rec.exits = out.exited;
    rec.exits_in_window = out.exits_in_window;
    rec.throughput = out.status == RunStatus::Completed ? throughput(out) : 0;
    rec.failure_time_s = out.failure_time_s;
    rec.last_exit_s = out.last_exit_s;
    return rec;
}

std::string csv_double(double x) {
    if (x < 0) return "";  // not applicable (failure_time / last_exit)
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

}  // namespace

std::string runs_csv_header() {
    return "size,demand,controller,rep,seed,status,arrivals,exits,throughput,"
           "failure_time_s,exits_in_window,last_exit_s\n";
}

std::string run_record_csv_line(const RunRecord& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%.0f,%s,%d,%llu,%s,%d,%d,%s,%s,%d,%s\n",
                  to_string(r.size), r.demand, to_string(r.controller), r.rep,
                  static_cast<unsigned long long>(r.seed), to_string(r.status),
                  r.arrivals, r.exits, csv_double(r.throughput).c_str(),
                  csv_double(r.failure_time_s).c_str(), r.exits_in_window,
                  csv_double(r.last_exit_s).c_str());
    return buf;
}

std::string runs_csv(const std::vector<RunRecord>& records) {
    std::string out = runs_csv_header();
    for (const RunRecord& r : records) out += run_record_csv_line(r);
    return out;
}

std::string summary_csv(const AggregateStats& stats) {
    std::string out =
        "size,demand,controller,runs,completed,failures,timecaps,failure_rate,"
        "throughput_mean,throughput_sd,paired_delta_mean,paired_delta_sd,"
        "paired_count\n";
    for (const CellStats& c : stats.cells) {
        char buf[320];
        std::snprintf(buf, sizeof(buf),
                      "%s,%.0f,%s,%d,%d,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%d\n",
                      to_string(c.size), c.demand, to_string(c.controller),
                      c.runs, c.completed, c.failures, c.timecaps,
                      c.failure_rate, c.throughput_mean, c.throughput_sd,
                      c.paired_delta_mean, c.paired_delta_sd, c.paired_count);
        out += buf;
    }
    return out;
}

MatrixResult run_matrix(const MatrixSpec& spec, const std::string& out_dir) {
    spec.validate();

    struct Task {
        YardSize size;
        double demand;
        ControllerKind controller;
        int rep;
    };
    std::vector<Task> tasks;
    for (YardSize size : spec.sizes)
        for (double demand : spec.demands.at(size))
            for (ControllerKind ctrl :
                 {ControllerKind::Orchestrated, ControllerKind::Isolated})
                for (int rep = 0; rep < spec.replications; ++rep)
                    tasks.push_back(Task{size, demand, ctrl, rep});

    std::vector<RunRecord> records(tasks.size());
    std::vector<uint8_t> done(tasks.size(), 0);

    std::ofstream runs_file;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        runs_file.open(out_dir + "/runs.csv", std::ios::trunc);
        if (!runs_file)
            throw std::runtime_error("matrix: cannot write " + out_dir +
                                     "/runs.csv");
        runs_file << runs_csv_header();
        runs_file.flush();
    }

    std::mutex emit_mutex;
    size_t emitted = 0;
    auto emit_ready = [&]() {
        // Flush the contiguous finished prefix in canonical order.
        while (emitted < tasks.size() && done[emitted]) {
            if (runs_file.is_open())
                runs_file << run_record_csv_line(records[emitted]);
            ++emitted;
        }
        if (runs_file.is_open()) runs_file.flush();
    };

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            RunRecord rec =
                make_record(t.size, t.demand, t.controller, t.rep, spec);
            std::lock_guard<std::mutex> lock(emit_mutex);
            records[i] = rec;
            done[i] = 1;
            emit_ready();
        }
    };

    int nworkers = std::max(1, spec.workers);
    if (nworkers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    MatrixResult result;
    result.runs = std::move(records);
    result.stats = aggregate(result.runs);

    if (!out_dir.empty()) {
        std::ofstream summary(out_dir + "/summary.csv", std::ios::trunc);
        if (!summary)
            throw std::runtime_error("matrix: cannot write " + out_dir +
                                     "/summary.csv");
        summary << summary_csv(result.stats);
    }
    return result;
}

MatrixSpec parse_matrix_config(const std::string& json_text) {
    MatrixSpec spec;
    if (json_text.empty()) return spec;

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: not an object");

    auto parse_size = [](const std::string& s) {
        auto v = yard_size_from_string(s);
        if (!v) throw std::invalid_argument("config: unknown yard size " + s);
        return *v;
    };

    for (auto& [key, value] : j.items()) {
        if (key == "sizes") {
            spec.sizes.clear();
            for (const auto& s : value)
                spec.sizes.push_back(parse_size(s.get<std::string>()));
        } else if (key == "demands") {
            if (!value.is_object())
                throw std::invalid_argument("config: demands must map sizes");
            spec.demands.clear();
            for (auto& [sz, arr] : value.items())
                spec.demands[parse_size(sz)] = arr.get<std::vector<double>>();
        } else if (key == "replications") {
            spec.replications = value.get<int>();
        } else if (key == "base_seed") {
            spec.base_seed = value.get<uint64_t>();
        } else if (key == "workers") {
            spec.workers = value.get<int>();
        } else if (key == "window_s") {
            spec.window_s = value.get<double>();
        } else if (key == "inspection_fail_rate") {
            spec.inspection_fail_rate = value.get<double>();
        } else if (key == "max_sim_time_s") {
            spec.max_sim_time_s = value.get<double>();
        } else if (key == "service") {
            if (!value.is_object())
                throw std::invalid_argument("config: service must be a map");
            for (auto& [kind_name, dist] : value.items()) {
                auto kind = station_kind_from_string(kind_name);
                if (!kind)
                    throw std::invalid_argument(
                        "config: unknown station kind " + kind_name);
                for (auto& [field, num] : dist.items()) {
                    if (field == "mean_s")
                        spec.service[static_cast<int>(*kind)].mean_s =
                            num.get<double>();
                    else if (field == "sd_s")
                        spec.service[static_cast<int>(*kind)].sd_s =
                            num.get<double>();
                    else
                        throw std::invalid_argument(
                            "config: unknown service field " + field);
                }
            }
        } else if (key == "weights") {
            for (auto& [field, num] : value.items()) {
                if (field == "charge")
                    spec.weights.charge = num.get<double>();
                else if (field == "circuit")
                    spec.weights.circuit = num.get<double>();
                else if (field == "lateness")
                    spec.weights.lateness = num.get<double>();
                else if (field == "trust")
                    spec.weights.trust = num.get<double>();
                else
                    throw std::invalid_argument(
                        "config: unknown weight field " + field);
            }
        } else {
            throw std::invalid_argument("config: unknown key " + key);
        }
    }
    spec.validate();
    return spec;
}

}  // namespace yardsim
