#ifndef YARDSIM_EXPERIMENT_HPP
#define YARDSIM_EXPERIMENT_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "yardsim/engine.hpp"

namespace yardsim {

// The experiment grid: yard sizes x per-size demand levels x both
// controllers x replications, with paired seeds across controllers.
struct MatrixSpec {
    std::vector<YardSize> sizes = {YardSize::Small, YardSize::Medium,
                                   YardSize::Large};
    std::map<YardSize, std::vector<double>> demands = {
        {YardSize::Small, {60, 80, 100}},
        {YardSize::Medium, {80, 160, 225}},
        {YardSize::Large, {160, 225, 340}},
    };
    int replications = 30;
    uint64_t base_seed = 1;
    int workers = 1;
    double window_s = 18000.0;
    double inspection_fail_rate = 0.005;
    std::array<ServiceDist, kStationKindCount> service = default_service_dists();
    ScoreWeights weights;
    double max_sim_time_s = 86400.0;

    void validate() const;  // throws std::invalid_argument
};

// Orchestrated and isolated replications of one cell share this seed.
uint64_t replication_seed(uint64_t base_seed, YardSize size, double demand,
                          int rep);

struct RunRecord {
    YardSize size = YardSize::Small;
    double demand = 0;
    ControllerKind controller = ControllerKind::Orchestrated;
    int rep = 0;
    uint64_t seed = 0;
    RunStatus status = RunStatus::Completed;
    int arrivals = 0;
    int exits = 0;
    int exits_in_window = 0;
    double throughput = 0;  // veh/h; 0 for non-completed runs
    double failure_time_s = -1;
    double last_exit_s = -1;
};

struct CellStats {
    YardSize size = YardSize::Small;
    double demand = 0;
    ControllerKind controller = ControllerKind::Orchestrated;
    int runs = 0;
    int completed = 0;
    int failures = 0;
    int timecaps = 0;
    double failure_rate = 0;
    // Over completed runs only.
    double throughput_mean = 0;
    double throughput_sd = 0;
    // Orchestrated minus isolated on shared seeds, over pairs where both
    // completed; identical on both controller rows of a (size, demand) cell.
    double paired_delta_mean = 0;
    double paired_delta_sd = 0;
    int paired_count = 0;
};

struct AggregateStats {
    std::vector<CellStats> cells;
};

// Vehicles per hour: exits / time of last exit. 0 when nothing exited.
// Only meaningful for completed runs.
double throughput(const RunOutcome& outcome);

// FacilityFailure runs / all runs. Empty input is a usage error.
double failure_rate(const std::vector<RunRecord>& records);

// Recomputes aggregate statistics from a run table (canonical order not
// required). Throughput statistics exclude failed and time-capped runs.
AggregateStats aggregate(const std::vector<RunRecord>& records);

struct MatrixResult {
    std::vector<RunRecord> runs;  // canonical order: size, demand, controller, rep
    AggregateStats stats;
};

// Executes the whole grid. Deterministic given base_seed regardless of
// worker count. When out_dir is nonempty, runs.csv is appended in canonical
// order as results complete (partial output survives interruption) and
// summary.csv is written at the end.
MatrixResult run_matrix(const MatrixSpec& spec, const std::string& out_dir = "");

std::string runs_csv(const std::vector<RunRecord>& records);
std::string summary_csv(const AggregateStats& stats);
std::string runs_csv_header();
std::string run_record_csv_line(const RunRecord& r);

// JSON config with explicit keys mirroring the matrix fields; unknown keys
// are errors. Empty text = defaults.
MatrixSpec parse_matrix_config(const std::string& json_text);

}  // namespace yardsim

#endif
