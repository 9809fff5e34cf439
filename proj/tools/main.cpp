// yardsim command line: run / matrix / validate / oracle.
// Links the C API only.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "yardsim.h"

namespace {

constexpr size_t kErrCap = 1024;

int fail(ys_status st, const char* err) {
    std::fprintf(stderr, "yardsim: %s%s%s\n", ys_status_name(st),
                 err[0] ? ": " : "", err);
    return 1;
}

// "small" | "medium" | "large" load the shipped layouts; anything else is a
// file path.
int load_layout(const std::string& spec, ys_layout** out, char* err) {
    if (ys_layout_builtin(spec.c_str(), out) == YS_OK) return 0;
    ys_status st = ys_layout_load_file(spec.c_str(), out, err, kErrCap);
    if (st != YS_OK) return fail(st, err);
    return 0;
}

const char* status_word(int status) {
    switch (status) {
        case YS_RUN_COMPLETED: return "completed";
        case YS_RUN_FACILITY_FAILURE: return "facility_failure";
        case YS_RUN_TIME_CAP: return "time_cap";
    }
    return "?";
}

uint64_t mix_rep_seed(uint64_t seed, int rep) {
    // Distinct per-replication seeds for `run --reps N`.
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(rep) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"marshaling yard autonomy simulator"};
    app.require_subcommand(1);
    char err[kErrCap] = {0};

    // ---- run -------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
    std::string run_layout, run_controller = "orchestrated", run_out;
    double run_demand = 0, run_window_hours = 5.0;
    uint64_t run_seed = 0;
    int run_reps = 1;
    run_cmd->add_option("--layout", run_layout,
                        "layout file or small|medium|large")->required();
    run_cmd->add_option("--controller", run_controller,
                        "orchestrated|isolated")
        ->check(CLI::IsMember({"orchestrated", "isolated"}));
    run_cmd->add_option("--demand", run_demand, "expected vehicles")->required();
    run_cmd->add_option("--seed", run_seed, "random seed")->required();
    run_cmd->add_option("--window-hours", run_window_hours, "arrival window");
    run_cmd->add_option("--reps", run_reps, "replications");
    run_cmd->add_option("--out", run_out, "output directory");

    // ---- matrix ----------------------------------------------------------
    auto* matrix_cmd =
        app.add_subcommand("matrix", "run the full experiment grid");
    std::string matrix_config, matrix_out;
    int matrix_reps = 0, matrix_workers = 0;
    uint64_t matrix_seed = 0;
    matrix_cmd->add_option("--config", matrix_config, "JSON config file");
    matrix_cmd->add_option("--reps", matrix_reps, "replications per cell");
    matrix_cmd->add_option("--seed", matrix_seed, "base seed");
    matrix_cmd->add_option("--workers", matrix_workers, "parallel workers");
    matrix_cmd->add_option("--out", matrix_out, "output directory")->required();

    // ---- validate ----------------------------------------------------------
    auto* validate_cmd =
        app.add_subcommand("validate", "check a layout file");
    std::string validate_layout_arg;
    validate_cmd->add_option("--layout", validate_layout_arg,
                             "layout file or small|medium|large")->required();

    // ---- oracle ------------------------------------------------------------
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "run the brute-force assignment/pathing oracles");
    std::string oracle_scenario;
    oracle_cmd->add_option("--scenario", oracle_scenario, "scenario JSON file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        ys_layout* layout = nullptr;
        if (int rc = load_layout(run_layout, &layout, err)) return rc;

        if (!run_out.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(run_out, ec);
            if (ec) {
                ys_layout_free(layout);
                return fail(YS_EIO, "cannot create output directory");
            }
        }

        std::FILE* runs = nullptr;
        if (!run_out.empty()) {
            std::string path = run_out + "/runs.csv";
            runs = std::fopen(path.c_str(), "w");
            if (!runs) {
                ys_layout_free(layout);
                return fail(YS_EIO, "cannot write runs.csv");
            }
            std::fprintf(runs,
                         "rep,seed,status,arrivals,exits,throughput,"
                         "failure_time_s,exits_in_window,last_exit_s\n");
        }

        int rc = 0;
        for (int rep = 0; rep < run_reps; ++rep) {
            ys_run_params params;
            ys_run_params_init(&params);
            params.controller = run_controller == "isolated"
                                    ? YS_CONTROLLER_ISOLATED
                                    : YS_CONTROLLER_ORCHESTRATED;
            params.demand = run_demand;
            params.window_seconds = run_window_hours * 3600.0;
            params.seed = run_reps == 1 ? run_seed
                                        : mix_rep_seed(run_seed, rep);
            std::string events_path;
            if (!run_out.empty()) {
                events_path = run_out + "/events_" + std::to_string(rep) +
                              ".ndjson";
                params.events_path = events_path.c_str();
            }
            ys_outcome* outcome = nullptr;
            ys_status st = ys_run(layout, &params, &outcome, err, kErrCap);
            if (st != YS_OK) {
                rc = fail(st, err);
                break;
            }
            std::printf(
                "rep %d seed %" PRIu64 ": %s arrivals=%d exits=%d "
                "throughput=%.3f veh/h\n",
                rep, params.seed, status_word(ys_outcome_status(outcome)),
                ys_outcome_arrivals(outcome), ys_outcome_exits(outcome),
                ys_outcome_throughput(outcome));
            if (runs) {
                double ft = ys_outcome_failure_seconds(outcome);
                double le = ys_outcome_last_exit_seconds(outcome);
                std::fprintf(runs, "%d,%" PRIu64 ",%s,%d,%d,%.6f,", rep,
                             params.seed,
                             status_word(ys_outcome_status(outcome)),
                             ys_outcome_arrivals(outcome),
                             ys_outcome_exits(outcome),
                             ys_outcome_throughput(outcome));
                if (ft >= 0) std::fprintf(runs, "%.6f", ft);
                std::fprintf(runs, ",%d,", ys_outcome_exits_in_window(outcome));
                if (le >= 0) std::fprintf(runs, "%.6f", le);
                std::fprintf(runs, "\n");
            }
            ys_outcome_free(outcome);
        }
        if (runs) std::fclose(runs);
        ys_layout_free(layout);
        return rc;
    }

    if (matrix_cmd->parsed()) {
        std::string config_text;
        if (!matrix_config.empty()) {
            std::FILE* f = std::fopen(matrix_config.c_str(), "rb");
            if (!f) return fail(YS_EIO, "cannot open config file");
            char buf[4096];
            size_t n;
            while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0)
                config_text.append(buf, n);
            std::fclose(f);
        }
        ys_status st = ys_matrix_run(
            config_text.empty() ? nullptr : config_text.c_str(),
            matrix_out.c_str(), matrix_reps, matrix_seed, matrix_workers, err,
            kErrCap);
        if (st != YS_OK) return fail(st, err);
        std::printf("wrote %s/runs.csv and %s/summary.csv\n",
                    matrix_out.c_str(), matrix_out.c_str());
        return 0;
    }

    if (validate_cmd->parsed()) {
        ys_layout* layout = nullptr;
        if (int rc = load_layout(validate_layout_arg, &layout, err)) return rc;
        char report[4096] = {0};
        int violations = ys_layout_validate(layout, report, sizeof(report));
        if (violations == 0) {
            std::printf("ok: %dx%d, berths C=%d I=%d W=%d L=%d P=%d\n",
                        ys_layout_width(layout), ys_layout_height(layout),
                        ys_layout_berths(layout, YS_STATION_CHARGING),
                        ys_layout_berths(layout, YS_STATION_INSPECTION),
                        ys_layout_berths(layout, YS_STATION_CLEANING),
                        ys_layout_berths(layout, YS_STATION_LOADING),
                        ys_layout_berths(layout, YS_STATION_PARKING));
            ys_layout_free(layout);
            return 0;
        }
        std::fprintf(stderr, "%d violation(s):\n%s", violations, report);
        ys_layout_free(layout);
        return 1;
    }

    if (oracle_cmd->parsed()) {
        char* report = nullptr;
        ys_status st =
            ys_oracle_run(oracle_scenario.c_str(), &report, err, kErrCap);
        if (st != YS_OK) return fail(st, err);
        std::fputs(report, stdout);
        ys_string_free(report);
        return 0;
    }
    return 1;
}
