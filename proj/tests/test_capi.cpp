#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "yardsim.h"

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << text;
    return path.string();
}

}  // namespace

TEST_CASE("capi: builtin layouts and introspection") {
    ys_layout* layout = nullptr;
    REQUIRE(ys_layout_builtin("small", &layout) == YS_OK);
    CHECK(ys_layout_width(layout) == 37);
    CHECK(ys_layout_height(layout) == 14);
    CHECK(ys_layout_berths(layout, YS_STATION_CHARGING) == 14);
    CHECK(ys_layout_berths(layout, YS_STATION_PARKING) == 30);
    CHECK(ys_layout_validate(layout, nullptr, 0) == 0);

    char* text = nullptr;
    REQUIRE(ys_layout_serialize(layout, &text) == YS_OK);
    ys_layout* reparsed = nullptr;
    char err[256] = {0};
    REQUIRE(ys_layout_parse(text, &reparsed, err, sizeof(err)) == YS_OK);
    CHECK(ys_layout_berths(reparsed, YS_STATION_LOADING) == 16);
    ys_string_free(text);
    ys_layout_free(reparsed);
    ys_layout_free(layout);

    CHECK(ys_layout_builtin("gigantic", &layout) == YS_EINVAL);
}

TEST_CASE("capi: parse errors carry messages") {
    ys_layout* layout = nullptr;
    char err[256] = {0};
    CHECK(ys_layout_parse("CIWLP?\nciwlp.\nE....X\n", &layout, err,
                          sizeof(err)) == YS_EPARSE);
    CHECK(std::strstr(err, "unknown character") != nullptr);

    CHECK(ys_layout_load_file("/no/such/file", &layout, err, sizeof(err)) ==
          YS_EIO);
}

TEST_CASE("capi: single run with event log") {
    ys_layout* layout = nullptr;
    REQUIRE(ys_layout_builtin("small", &layout) == YS_OK);

    auto events_path =
        std::filesystem::temp_directory_path() / "yardsim_capi_events.ndjson";
    std::filesystem::remove(events_path);

    ys_run_params params;
    ys_run_params_init(&params);
    params.controller = YS_CONTROLLER_ORCHESTRATED;
    params.demand = 5;
    params.seed = 321;
    std::string events_str = events_path.string();
    params.events_path = events_str.c_str();

    char err[256] = {0};
    ys_outcome* outcome = nullptr;
    REQUIRE(ys_run(layout, &params, &outcome, err, sizeof(err)) == YS_OK);
    CHECK(ys_outcome_status(outcome) == YS_RUN_COMPLETED);
    CHECK(ys_outcome_exits(outcome) + 0 <= ys_outcome_arrivals(outcome));
    if (ys_outcome_exits(outcome) > 0) {
        CHECK(ys_outcome_throughput(outcome) > 0);
        CHECK(ys_outcome_last_exit_seconds(outcome) > 0);
    }
    CHECK(ys_outcome_failure_seconds(outcome) < 0);
    CHECK(std::filesystem::exists(events_path));
    ys_outcome_free(outcome);

    // determinism through the C surface
    params.events_path = nullptr;
    ys_outcome* again = nullptr;
    REQUIRE(ys_run(layout, &params, &again, err, sizeof(err)) == YS_OK);
    CHECK(ys_outcome_exits(again) > 0);
    ys_outcome_free(again);
    ys_layout_free(layout);
    std::filesystem::remove(events_path);
}

TEST_CASE("capi: matrix into a directory") {
    auto dir = std::filesystem::temp_directory_path() / "yardsim_capi_matrix";
    std::filesystem::remove_all(dir);
    const char* config =
        R"({"sizes":["small"],"demands":{"small":[3]},"replications":1})";
    char err[256] = {0};
    REQUIRE(ys_matrix_run(config, dir.string().c_str(), 0, 7, 1, err,
                          sizeof(err)) == YS_OK);
    CHECK(std::filesystem::exists(dir / "runs.csv"));
    CHECK(std::filesystem::exists(dir / "summary.csv"));

    CHECK(ys_matrix_run(R"({"bogus":true})", dir.string().c_str(), 0, 0, 0,
                        err, sizeof(err)) == YS_EINVAL);
    std::filesystem::remove_all(dir);
}

TEST_CASE("capi: oracle scenario run") {
    std::string scenario = write_temp("yardsim_capi_oracle.json", R"({
      "grid": ["....", "....", "...."],
      "pathing": [
        {"start": [0,0], "goal": [3,0], "start_tick": 0,
         "reservations": {"vertices": [[1,0,1]]}}
      ]
    })");
    char* report = nullptr;
    char err[256] = {0};
    REQUIRE(ys_oracle_run(scenario.c_str(), &report, err, sizeof(err)) ==
            YS_OK);
    CHECK(std::strstr(report, "pathing[0]") != nullptr);
    ys_string_free(report);

    CHECK(ys_oracle_run("/no/such/scenario", &report, err, sizeof(err)) ==
          YS_EIO);
}
