#pragma once

#include <optional>
#include <string>
#include <vector>

#include "instance.hpp"
#include "sampler.hpp"
#include "tabu.hpp"

namespace hqts {

enum class Variant { tabu, tabu_oscillating, clarke_wright };

const char* to_string(Variant v);                 // "ts" / "ts_so" / "cw"
Variant variant_from_string(const std::string&);  // throws ValidationError

struct RunConfig {
    std::vector<std::string> instance_paths;
    Variant variant = Variant::tabu_oscillating;
    SearchParams search;        // rng_seed is the base; repetition r adds r
    RouteSolver solver;
    int repetitions = 3;
    std::string out_dir;        // when set, per-run artifacts land here
};

struct BenchRow {
    std::string instance;
    int customers = 0;
    std::optional<double> bks;
    double distance = 0.0;
    std::optional<double> deviation_pct;   // vs best known, feasible runs only
    int vehicles_initial = 0;
    int vehicles_used = 0;
    uint64_t best_seed = 0;
    std::string stop_reason;
    double wallclock_seconds = 0.0;        // summed over repetitions
    std::string error;                     // per-instance failures land here
};

struct BenchReport {
    Variant variant = Variant::tabu_oscillating;
    std::vector<BenchRow> rows;            // ordered by instance name
};

// Runs every (instance, repetition) job in a small worker pool sized to the
// hardware, then assembles rows deterministically. A failing instance gets
// its error recorded without stopping the rest.
BenchReport run_benchmark(const RunConfig& config);

// Result table without timing columns, so identical configurations produce
// identical bytes.
std::string report_to_csv(const BenchReport& report);

// Wallclock per instance, kept out of the main table on purpose.
std::string report_meta_csv(const BenchReport& report);

// Per-instance deviations for each variant plus a MEAN row per variant.
std::string deviation_summary_csv(const std::vector<BenchReport>& reports);

}  // namespace hqts
