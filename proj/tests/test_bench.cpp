#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bench.hpp"
#include "doctest.h"
#include "instance.hpp"
#include "oracles.hpp"
#include "serialize.hpp"

using namespace hqts;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Materializes a generated instance as a file the runner can load.
std::string write_instance(const fs::path& dir, const CvrpInstance& inst) {
    fs::create_directories(dir);
    const fs::path p = dir / (inst.name + ".vrp");
    std::ofstream out(p, std::ios::binary);
    out << to_tsplib(inst);
    REQUIRE(out.good());
    return p.string();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("hqts_bench_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

SearchParams fast_params() {
    SearchParams p;
    p.non_improve_stop = 120;
    p.resequence_trigger = 40;
    p.rng_seed = 10;
    return p;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("variant names round-trip") {
    CHECK(std::string(to_string(Variant::tabu)) == "ts");
    CHECK(std::string(to_string(Variant::tabu_oscillating)) == "ts_so");
    CHECK(std::string(to_string(Variant::clarke_wright)) == "cw");
    CHECK(variant_from_string("ts") == Variant::tabu);
    CHECK(variant_from_string("ts_so") == Variant::tabu_oscillating);
    CHECK(variant_from_string("cw") == Variant::clarke_wright);
    CHECK_THROWS_AS(variant_from_string("annealing"), ValidationError);
}

TEST_CASE("a benchmark run leaves a full audit trail") {
    TempDir dir("trail");
    CvrpInstance small = oracle::random_instance(601, 8);
    CvrpInstance tiny = oracle::random_instance(602, 6);

    RunConfig config;
    config.instance_paths = {write_instance(dir.path / "in", small),
                             write_instance(dir.path / "in", tiny)};
    config.variant = Variant::tabu_oscillating;
    config.search = fast_params();
    config.repetitions = 2;
    config.out_dir = (dir.path / "out").string();

    BenchReport report = run_benchmark(config);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.variant == Variant::tabu_oscillating);

    // rows come back sorted by instance name regardless of input order
    CHECK(report.rows[0].instance <= report.rows[1].instance);

    for (const auto& row : report.rows) {
        CHECK(row.error.empty());
        CHECK(row.customers > 0);
        CHECK(row.distance > 0.0);
        CHECK(row.vehicles_used >= 1);
        CHECK(row.stop_reason == "non_improving_limit");
        CHECK(row.wallclock_seconds >= 0.0);
        CHECK_FALSE(row.bks.has_value());   // generated instances carry none
        CHECK_FALSE(row.deviation_pct.has_value());
    }

    // per-repetition artifacts: solution json + per-iteration stats
    double best_seen = 1e300;
    for (const CvrpInstance* inst : {&small, &tiny}) {
        double best_cost = 1e300;
        for (uint64_t seed = 10; seed < 12; ++seed) {
            const fs::path stem = dir.path / "out" /
                                  (inst->name + "_ts_so_seed" + std::to_string(seed));
            const fs::path json_path = stem.string() + ".json";
            const fs::path csv_path = stem.string() + "_stats.csv";
            REQUIRE(fs::exists(json_path));
            REQUIRE(fs::exists(csv_path));
            LoadedSolution loaded = solution_from_json(slurp(json_path), *inst);
            CHECK(loaded.seed == seed);
            CHECK(check_feasibility(loaded.solution, *inst).feasible);
            CHECK(oracle::check_stats_csv(slurp(csv_path)).empty());
            best_cost = std::min(best_cost, loaded.solution.total_cost);
        }
        for (const auto& row : report.rows)
            if (row.instance == inst->name) {
                CHECK(row.distance == doctest::Approx(best_cost));   // best of reps
                best_seen = best_cost;
            }
    }
    CHECK(best_seen < 1e300);

    // the summary files land next to the artifacts
    CHECK(fs::exists(dir.path / "out" / "report.csv"));
    CHECK(fs::exists(dir.path / "out" / "report_meta.csv"));
    CHECK(fs::exists(dir.path / "out" / "deviation_summary.csv"));
    CHECK(slurp(dir.path / "out" / "report.csv") == report_to_csv(report));
}

TEST_CASE("identical configurations report identical bytes") {
    TempDir dir("bytes");
    CvrpInstance inst = oracle::random_instance(603, 7);
    RunConfig config;
    config.instance_paths = {write_instance(dir.path / "in", inst)};
    config.variant = Variant::tabu;
    config.search = fast_params();
    config.repetitions = 2;

    const std::string a = report_to_csv(run_benchmark(config));
    const std::string b = report_to_csv(run_benchmark(config));
    CHECK(a == b);
    CHECK(a.find("wallclock") == std::string::npos);   // timing lives elsewhere
    CHECK(a.rfind("instance,customers,variant,bks,distance,deviation_pct,"
                  "vehicles_initial,vehicles_used,best_seed,stop_reason,error\n",
                  0) == 0);
}

TEST_CASE("one broken path does not sink the fleet") {
    TempDir dir("broken");
    CvrpInstance inst = oracle::random_instance(604, 6);
    RunConfig config;
    config.instance_paths = {(dir.path / "missing.vrp").string(),
                             write_instance(dir.path / "in", inst)};
    config.variant = Variant::clarke_wright;
    config.repetitions = 1;

    BenchReport report = run_benchmark(config);
    REQUIRE(report.rows.size() == 2);
    int failed = 0, succeeded = 0;
    for (const auto& row : report.rows) {
        if (!row.error.empty()) {
            ++failed;
            CHECK(row.distance == 0.0);
        } else {
            ++succeeded;
            CHECK(row.distance > 0.0);
        }
    }
    CHECK(failed == 1);
    CHECK(succeeded == 1);

    // the error row still renders without derailing the csv shape
    const std::string csv = report_to_csv(report);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("an empty run yields an empty report") {
    RunConfig config;
    config.repetitions = 1;
    BenchReport report = run_benchmark(config);
    CHECK(report.rows.empty());
    CHECK(report_to_csv(report) ==
          "instance,customers,variant,bks,distance,deviation_pct,vehicles_initial,"
          "vehicles_used,best_seed,stop_reason,error\n");
    CHECK(report_meta_csv(report) == "instance,variant,total_wallclock_seconds\n");
}

TEST_CASE("construction-only runs write solutions but no trajectories") {
    TempDir dir("cw");
    CvrpInstance inst = oracle::random_instance(605, 7);
    RunConfig config;
    config.instance_paths = {write_instance(dir.path / "in", inst)};
    config.variant = Variant::clarke_wright;
    config.repetitions = 3;   // collapses to one deterministic run per instance
    config.out_dir = (dir.path / "out").string();

    BenchReport report = run_benchmark(config);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].best_seed == 0);
    const fs::path stem = dir.path / "out" / (inst.name + "_cw_seed0");
    CHECK(fs::exists(stem.string() + ".json"));
    CHECK_FALSE(fs::exists(stem.string() + "_stats.csv"));
}

TEST_CASE("deviation summary averages only what has a reference") {
    BenchReport report;
    report.variant = Variant::tabu;
    BenchRow a;
    a.instance = "alpha";
    a.distance = 110.0;
    a.bks = 100.0;
    a.deviation_pct = 100.0 * (110.0 - 100.0) / 100.0;
    BenchRow b;
    b.instance = "beta";
    b.distance = 121.0;
    b.bks = 100.0;
    b.deviation_pct = 100.0 * (121.0 - 100.0) / 100.0;
    BenchRow c;
    c.instance = "gamma";   // no best known: excluded from the mean
    c.distance = 50.0;
    report.rows = {a, b, c};

    const std::string csv = deviation_summary_csv({report});
    CHECK(csv ==
          "instance,variant,distance,deviation_pct\n"
          "alpha,ts,110.00,10.00\n"
          "beta,ts,121.00,21.00\n"
          "gamma,ts,50.00,\n"
          "MEAN,ts,,15.50\n");
}

TEST_CASE("matching the reference exactly reads as zero") {
    BenchReport report;
    report.variant = Variant::clarke_wright;
    BenchRow r;
    r.instance = "spot";
    r.distance = 524.61;
    r.bks = 524.61;
    r.deviation_pct = 0.0;
    report.rows = {r};
    const std::string csv = deviation_summary_csv({report});
    CHECK(csv.find("MEAN,cw,,0.00\n") != std::string::npos);
    CHECK(csv.find("spot,cw,524.61,0.00\n") != std::string::npos);
}

TEST_CASE("percent deviations follow the reference formula") {
    // a 537 result against a 524.61 reference sits near 2.38 percent
    const double dev = 100.0 * (537.0 - 524.61) / 524.61;
    CHECK(std::abs(dev - 2.38) < 0.05);

    BenchReport report;
    report.variant = Variant::tabu;
    BenchRow r;
    r.instance = "spot";
    r.distance = 537.0;
    r.bks = 524.61;
    r.deviation_pct = dev;
    report.rows = {r};
    CHECK(deviation_summary_csv({report}).find("spot,ts,537.00,2.36\n") != std::string::npos);
}

TEST_CASE("timing stays in the side table") {
    BenchReport report;
    report.variant = Variant::tabu;
    BenchRow r;
    r.instance = "spot";
    r.wallclock_seconds = 1.5;
    report.rows = {r};
    CHECK(report_meta_csv(report) ==
          "instance,variant,total_wallclock_seconds\n"
          "spot,ts,1.500000\n");
}

}  // TEST_SUITE
