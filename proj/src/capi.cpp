#include "yardsim.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "yardsim/engine.hpp"
#include "yardsim/experiment.hpp"
#include "yardsim/layout.hpp"
#include "yardsim/oracles.hpp"

using yardsim::RunOutcome;
using yardsim::YardLayout;

struct ys_layout {
    YardLayout impl;
};

struct ys_outcome {
    RunOutcome impl;
    double throughput = 0;
};

namespace {

void set_err(char* err, size_t errcap, const std::string& msg) {
    if (!err || errcap == 0) return;
    size_t n = std::min(errcap - 1, msg.size());
    std::memcpy(err, msg.data(), n);
    err[n] = '\0';
}

template <typename Fn>
ys_status guarded(char* err, size_t errcap, Fn&& fn) {
    try {
        return fn();
    } catch (const yardsim::LayoutError& e) {
        set_err(err, errcap, e.what());
        return YS_EPARSE;
    } catch (const nlohmann::json::exception& e) {
        set_err(err, errcap, e.what());
        return YS_EPARSE;
    } catch (const std::invalid_argument& e) {
        set_err(err, errcap, e.what());
        return YS_EINVAL;
    } catch (const std::bad_alloc&) {
        set_err(err, errcap, "out of memory");
        return YS_EINTERNAL;
    } catch (const std::exception& e) {
        set_err(err, errcap, e.what());
        return YS_EINTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(::operator new(s.size() + 1));
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* ys_version(void) { return "1.0.0"; }

const char* ys_status_name(ys_status status) {
    switch (status) {
        case YS_OK: return "ok";
        case YS_EINVAL: return "invalid argument";
        case YS_EPARSE: return "parse error";
        case YS_EIO: return "io error";
        case YS_EINTERNAL: return "internal error";
    }
    return "?";
}

ys_status ys_layout_builtin(const char* name, ys_layout** out) {
    if (!name || !out) return YS_EINVAL;
    auto size = yardsim::yard_size_from_string(name);
    if (!size) return YS_EINVAL;
    *out = new ys_layout{yardsim::builtin_layout(*size)};
    return YS_OK;
}

ys_status ys_layout_parse(const char* text, ys_layout** out, char* err,
                          size_t errcap) {
    if (!text || !out) return YS_EINVAL;
    return guarded(err, errcap, [&]() {
        *out = new ys_layout{yardsim::parse_layout(text)};
        return YS_OK;
    });
}

ys_status ys_layout_load_file(const char* path, ys_layout** out, char* err,
                              size_t errcap) {
    if (!path || !out) return YS_EINVAL;
    std::ifstream in(path);
    if (!in) {
        set_err(err, errcap, std::string("cannot open ") + path);
        return YS_EIO;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return ys_layout_parse(buf.str().c_str(), out, err, errcap);
}

void ys_layout_free(ys_layout* layout) { delete layout; }

int ys_layout_width(const ys_layout* layout) { return layout->impl.width; }
int ys_layout_height(const ys_layout* layout) { return layout->impl.height; }

int ys_layout_berths(const ys_layout* layout, ys_station station) {
    if (station < 0 || station >= 5) return -1;
    return layout->impl.stations[static_cast<size_t>(station)].berth_count;
}

int ys_layout_validate(const ys_layout* layout, char* report,
                       size_t reportcap) {
    auto violations = yardsim::validate_layout(layout->impl);
    if (report && reportcap > 0) {
        std::string text;
        for (const auto& v : violations) {
            text += v;
            text += '\n';
        }
        set_err(report, reportcap, text);
    }
    return static_cast<int>(violations.size());
}

ys_status ys_layout_serialize(const ys_layout* layout, char** out) {
    if (!layout || !out) return YS_EINVAL;
    *out = dup_string(yardsim::serialize_layout(layout->impl));
    return YS_OK;
}

void ys_string_free(char* s) { ::operator delete(s); }

void ys_run_params_init(ys_run_params* params) {
    params->controller = YS_CONTROLLER_ORCHESTRATED;
    params->demand = 0;
    params->window_seconds = 18000.0;
    params->seed = 0;
    params->inspection_fail_rate = 0.005;
    params->max_sim_time_seconds = 86400.0;
    params->events_path = nullptr;
}

ys_status ys_run(const ys_layout* layout, const ys_run_params* params,
                 ys_outcome** out, char* err, size_t errcap) {
    if (!layout || !params || !out) return YS_EINVAL;
    return guarded(err, errcap, [&]() {
        yardsim::SimConfig cfg;
        cfg.layout = &layout->impl;
        cfg.controller = params->controller == YS_CONTROLLER_ISOLATED
                             ? yardsim::ControllerKind::Isolated
                             : yardsim::ControllerKind::Orchestrated;
        cfg.demand = params->demand;
        if (params->window_seconds > 0) cfg.window_s = params->window_seconds;
        cfg.seed = params->seed;
        if (params->inspection_fail_rate >= 0)
            cfg.inspection_fail_rate = params->inspection_fail_rate;
        if (params->max_sim_time_seconds > 0)
            cfg.max_sim_time_s = params->max_sim_time_seconds;
        cfg.collect_events = params->events_path != nullptr;

        RunOutcome outcome = yardsim::run(cfg);

        if (params->events_path) {
            std::ofstream events(params->events_path, std::ios::trunc);
            if (!events) {
                set_err(err, errcap,
                        std::string("cannot write ") + params->events_path);
                return YS_EIO;
            }
            for (const auto& ev : outcome.events)
                events << yardsim::event_to_line(ev, cfg.tick_seconds())
                       << '\n';
        }

        auto* o = new ys_outcome;
        o->throughput = outcome.status == yardsim::RunStatus::Completed
                            ? yardsim::throughput(outcome)
                            : 0;
        o->impl = std::move(outcome);
        *out = o;
        return YS_OK;
    });
}

void ys_outcome_free(ys_outcome* outcome) { delete outcome; }

int ys_outcome_status(const ys_outcome* o) {
    return static_cast<int>(o->impl.status);
}
int ys_outcome_arrivals(const ys_outcome* o) { return o->impl.arrivals; }
int ys_outcome_exits(const ys_outcome* o) { return o->impl.exited; }
int ys_outcome_exits_in_window(const ys_outcome* o) {
    return o->impl.exits_in_window;
}
double ys_outcome_last_exit_seconds(const ys_outcome* o) {
    return o->impl.last_exit_s;
}
double ys_outcome_failure_seconds(const ys_outcome* o) {
    return o->impl.failure_time_s;
}
double ys_outcome_throughput(const ys_outcome* o) { return o->throughput; }

ys_status ys_matrix_run(const char* config_json, const char* out_dir,
                        int reps, uint64_t seed, int workers, char* err,
                        size_t errcap) {
    if (!out_dir) return YS_EINVAL;
    return guarded(err, errcap, [&]() {
        yardsim::MatrixSpec spec = yardsim::parse_matrix_config(
            config_json ? std::string(config_json) : std::string());
        if (reps > 0) spec.replications = reps;
        if (seed != 0) spec.base_seed = seed;
        if (workers > 0) spec.workers = workers;
        yardsim::run_matrix(spec, out_dir);
        return YS_OK;
    });
}

ys_status ys_oracle_run(const char* scenario_path, char** report, char* err,
                        size_t errcap) {
    if (!scenario_path || !report) return YS_EINVAL;
    std::ifstream in(scenario_path);
    if (!in) {
        set_err(err, errcap, std::string("cannot open ") + scenario_path);
        return YS_EIO;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return guarded(err, errcap, [&]() {
        *report = dup_string(yardsim::oracle::run_scenario(buf.str()));
        return YS_OK;
    });
}

}  // extern "C"
