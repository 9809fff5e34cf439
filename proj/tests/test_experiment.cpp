#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "yardsim/experiment.hpp"

using namespace yardsim;

namespace {

MatrixSpec tiny_spec() {
    MatrixSpec spec;
    spec.sizes = {YardSize::Small};
    spec.demands = {{YardSize::Small, {4}}};
    spec.replications = 2;
    spec.base_seed = 314;
    spec.workers = 1;
    return spec;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("throughput: empty and simple cases") {
    RunOutcome none;
    none.status = RunStatus::Completed;
    CHECK(throughput(none) == 0);

    RunOutcome ten;
    ten.status = RunStatus::Completed;
    ten.exited = 10;
    ten.last_exit_s = 5 * 3600.0;
    CHECK(throughput(ten) == doctest::Approx(2.0));
}

TEST_CASE("failure_rate: fractions and the empty-list error") {
    std::vector<RunRecord> rs(30);
    CHECK(failure_rate(rs) == 0.0);
    std::vector<RunRecord> mixed(10);
    for (int i = 0; i < 3; ++i)
        mixed[static_cast<size_t>(i)].status = RunStatus::FacilityFailure;
    CHECK(failure_rate(mixed) == doctest::Approx(0.3));
    CHECK_THROWS_AS(failure_rate({}), std::invalid_argument);
}

TEST_CASE("replication seeds: stable and controller-shared") {
    uint64_t a = replication_seed(1, YardSize::Small, 60, 0);
    uint64_t b = replication_seed(1, YardSize::Small, 60, 0);
    CHECK(a == b);
    CHECK(replication_seed(1, YardSize::Small, 60, 1) != a);
    CHECK(replication_seed(1, YardSize::Small, 80, 0) != a);
    CHECK(replication_seed(1, YardSize::Medium, 60, 0) != a);
    CHECK(replication_seed(2, YardSize::Small, 60, 0) != a);
}

TEST_CASE("paired runs consume identical per-vehicle randomness") {
    uint64_t seed = replication_seed(9, YardSize::Small, 10, 0);
    SimConfig cfg;
    cfg.layout = &builtin_layout(YardSize::Small);
    cfg.demand = 10;
    cfg.seed = seed;

    cfg.controller = ControllerKind::Orchestrated;
    RunOutcome orch = run(cfg);
    cfg.controller = ControllerKind::Isolated;
    RunOutcome iso = run(cfg);

    REQUIRE(orch.arrivals == iso.arrivals);
    REQUIRE(orch.vehicles.size() == iso.vehicles.size());
    for (size_t i = 0; i < orch.vehicles.size(); ++i) {
        const VehicleRecord& a = orch.vehicles[i];
        const VehicleRecord& b = iso.vehicles[i];
        CHECK(a.arrival_time_s == b.arrival_time_s);
        CHECK(a.charge_s == b.charge_s);
        CHECK(a.trust == b.trust);
        CHECK(a.inspection_fails == b.inspection_fails);
        for (int k = 0; k < kStationKindCount; ++k)
            CHECK(a.service_s[static_cast<size_t>(k)] == b.service_s[static_cast<size_t>(k)]);
    }
}

TEST_CASE("run_matrix: canonical order, determinism, incremental files") {
    MatrixSpec spec = tiny_spec();
    auto dir = std::filesystem::temp_directory_path() / "yardsim_matrix_test";
    std::filesystem::remove_all(dir);

    MatrixResult r1 = run_matrix(spec, dir.string());
    CHECK(r1.runs.size() == 4);  // 1 size x 1 demand x 2 controllers x 2 reps
    // canonical: orchestrated reps first, then isolated
    CHECK(r1.runs[0].controller == ControllerKind::Orchestrated);
    CHECK(r1.runs[0].rep == 0);
    CHECK(r1.runs[1].rep == 1);
    CHECK(r1.runs[2].controller == ControllerKind::Isolated);

    // paired seeds across controllers
    CHECK(r1.runs[0].seed == r1.runs[2].seed);
    CHECK(r1.runs[1].seed == r1.runs[3].seed);

    MatrixResult r2 = run_matrix(spec);
    CHECK(runs_csv(r1.runs) == runs_csv(r2.runs));
    CHECK(summary_csv(r1.stats) == summary_csv(r2.stats));

    CHECK(slurp((dir / "runs.csv").string()) == runs_csv(r1.runs));
    CHECK(slurp((dir / "summary.csv").string()) == summary_csv(r1.stats));
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_matrix: worker count does not change results") {
    MatrixSpec spec = tiny_spec();
    MatrixResult serial = run_matrix(spec);
    spec.workers = 4;
    MatrixResult parallel = run_matrix(spec);
    CHECK(runs_csv(serial.runs) == runs_csv(parallel.runs));
}

TEST_CASE("adding replications never changes earlier runs") {
    MatrixSpec two = tiny_spec();
    MatrixSpec three = tiny_spec();
    three.replications = 3;
    MatrixResult r2 = run_matrix(two);
    MatrixResult r3 = run_matrix(three);
    // canonical order groups by controller; compare per (controller, rep)
    for (const RunRecord& a : r2.runs) {
        bool matched = false;
        for (const RunRecord& b : r3.runs) {
            if (a.controller == b.controller && a.rep == b.rep) {
                CHECK(a.seed == b.seed);
                CHECK(a.exits == b.exits);
                CHECK(a.throughput == b.throughput);
                matched = true;
            }
        }
        CHECK(matched);
    }
}

TEST_CASE("aggregate: self-consistency with emitted statistics") {
    MatrixResult r = run_matrix(tiny_spec());
    AggregateStats again = aggregate(r.runs);
    CHECK(summary_csv(again) == summary_csv(r.stats));

    REQUIRE(!r.stats.cells.empty());
    for (const CellStats& c : r.stats.cells) {
        CHECK(c.runs == 2);
        CHECK(c.completed + c.failures + c.timecaps == c.runs);
    }
}

TEST_CASE("matrix config: overrides and unknown-key rejection") {
    MatrixSpec spec = parse_matrix_config(
        R"({"sizes":["small"],"demands":{"small":[5,7]},"replications":4,)"
        R"("base_seed":99,"service":{"cleaning":{"mean_s":900}},)"
        R"("weights":{"lateness":2.5}})");
    CHECK(spec.sizes.size() == 1);
    CHECK(spec.demands.at(YardSize::Small) == std::vector<double>{5, 7});
    CHECK(spec.replications == 4);
    CHECK(spec.base_seed == 99);
    CHECK(spec.service[static_cast<int>(StationKind::Cleaning)].mean_s == 900);
    CHECK(spec.weights.lateness == 2.5);

    CHECK_THROWS_AS(parse_matrix_config(R"({"bogus":1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_matrix_config(R"({"demands":{"tiny":[1]}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_matrix_config("not json"), std::invalid_argument);
    CHECK_THROWS_AS(
        parse_matrix_config(R"({"service":{"cleaning":{"mode":1}}})"),
        std::invalid_argument);
}

TEST_CASE("default matrix shape: 540 runs") {
    MatrixSpec spec;
    size_t cells = 0;
    for (YardSize s : spec.sizes) cells += spec.demands.at(s).size();
    CHECK(cells == 9);
    CHECK(cells * 2 * static_cast<size_t>(spec.replications) == 540);
}
