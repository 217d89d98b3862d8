#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "serialize.hpp"

namespace hqts {

const char* to_string(Variant v) {
    switch (v) {
        case Variant::tabu: return "ts";
        case Variant::tabu_oscillating: return "ts_so";
        case Variant::clarke_wright: return "cw";
    }
    return "unknown";
}

Variant variant_from_string(const std::string& s) {
    if (s == "ts") return Variant::tabu;
    if (s == "ts_so") return Variant::tabu_oscillating;
    if (s == "cw") return Variant::clarke_wright;
    throw ValidationError("unknown variant '" + s + "' (expected ts, ts_so or cw)");
}

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fixed2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct RunOutcome {
    bool ok = false;
    std::string error;
    double cost = 0.0;
    bool feasible = false;
    int vehicles_initial = 0;
    int vehicles_used = 0;
    uint64_t seed = 0;
    std::string stop_reason;
    double wallclock = 0.0;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << content;
}

}  // namespace

BenchReport run_benchmark(const RunConfig& config) {
    BenchReport report;
    report.variant = config.variant;
    if (config.repetitions < 1) throw ValidationError("repetitions must be positive");
    if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

    const int reps = config.variant == Variant::clarke_wright ? 1 : config.repetitions;
    const int n_instances = static_cast<int>(config.instance_paths.size());

    struct Job {
        int instance = 0;
        int rep = 0;
    };
    std::vector<Job> jobs;
    for (int i = 0; i < n_instances; ++i)
        for (int r = 0; r < reps; ++r) jobs.push_back({i, r});

    // parse instances up front so every repetition shares one copy
    std::vector<std::optional<CvrpInstance>> instances(n_instances);
    std::vector<std::string> load_errors(n_instances);
    for (int i = 0; i < n_instances; ++i) {
        try {
            instances[i] = load_instance(config.instance_paths[i]);
        } catch (const Error& e) {
            load_errors[i] = e.what();
        }
    }

    std::vector<RunOutcome> outcomes(jobs.size());
    std::atomic<size_t> next{0};
    std::mutex io_mutex;

    auto run_job = [&](size_t job_index) {
        const Job job = jobs[job_index];
        RunOutcome& out = outcomes[job_index];
        if (!instances[job.instance]) {
            out.error = load_errors[job.instance];
            return;
        }
        const CvrpInstance& inst = *instances[job.instance];
        const auto t0 = std::chrono::steady_clock::now();
        try {
            Solution solution;
            SearchStats stats;
            uint64_t seed = config.search.rng_seed + static_cast<uint64_t>(job.rep);
            if (config.variant == Variant::clarke_wright) {
                solution = clarke_wright(inst);
                seed = 0;
            } else {
                SearchParams params = config.search;
                params.oscillation = config.variant == Variant::tabu_oscillating;
                params.rng_seed = seed;
                SearchResult res = run_search(inst, params, config.solver);
                solution = std::move(res.best);
                stats = std::move(res.stats);
                out.stop_reason = to_string(stats.stop_reason);
            }
            out.wallclock =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            out.cost = solution.total_cost;
            out.feasible = check_feasibility(solution, inst).feasible;
            out.vehicles_initial = config.variant == Variant::clarke_wright
                                       ? solution.vehicles_used()
                                       : stats.initial_vehicles;
            out.vehicles_used = solution.vehicles_used();
            out.seed = seed;
            out.ok = true;

            if (!config.out_dir.empty()) {
                const std::string stem = config.out_dir + "/" + inst.name + "_" +
                                         to_string(config.variant) + "_seed" +
                                         std::to_string(seed);
                const std::string json = solution_to_json(solution, inst, seed, out.wallclock);
                std::lock_guard lock(io_mutex);
                write_file(stem + ".json", json);
                if (config.variant != Variant::clarke_wright)
                    write_file(stem + "_stats.csv", stats_to_csv(stats));
            }
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    };

    const unsigned pool = std::max(1u, std::min(std::thread::hardware_concurrency(),
                                                static_cast<unsigned>(jobs.size())));
    if (pool <= 1) {
        for (size_t i = 0; i < jobs.size(); ++i) run_job(i);
    } else {
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < pool; ++w)
            workers.emplace_back([&] {
                while (true) {
                    const size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) return;
                    run_job(i);
                }
            });
        for (auto& t : workers) t.join();
    }

    // assemble one row per instance: best feasible cost wins, lowest seed
    // breaks ties
    for (int i = 0; i < n_instances; ++i) {
        BenchRow row;
        row.instance = instances[i] ? instances[i]->name
                                    : std::filesystem::path(config.instance_paths[i])
                                          .stem()
                                          .string();
        if (!instances[i]) {
            row.error = load_errors[i];
            report.rows.push_back(std::move(row));
            continue;
        }
        row.customers = instances[i]->num_customers();
        if (instances[i]->bks) row.bks = instances[i]->bks->distance;

        const RunOutcome* best = nullptr;
        for (size_t jindex = 0; jindex < jobs.size(); ++jindex) {
            if (jobs[jindex].instance != i) continue;
            const RunOutcome& o = outcomes[jindex];
            row.wallclock_seconds += o.wallclock;
            if (!o.ok) {
                if (row.error.empty()) row.error = o.error;
                continue;
            }
            if (!best || std::make_tuple(!o.feasible, o.cost, o.seed) <
                             std::make_tuple(!best->feasible, best->cost, best->seed))
                best = &o;
        }
        if (best) {
            row.distance = best->cost;
            row.vehicles_initial = best->vehicles_initial;
            row.vehicles_used = best->vehicles_used;
            row.best_seed = best->seed;
            row.stop_reason = best->stop_reason;
            if (best->feasible) {
                row.error.clear();
                if (row.bks && *row.bks > 0)
                    row.deviation_pct = 100.0 * (best->cost - *row.bks) / *row.bks;
            } else if (row.error.empty()) {
                row.error = "no feasible solution found";
            }
        }
        report.rows.push_back(std::move(row));
    }

    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const BenchRow& a, const BenchRow& b) { return a.instance < b.instance; });

    if (!config.out_dir.empty()) {
        write_file(config.out_dir + "/report.csv", report_to_csv(report));
        write_file(config.out_dir + "/report_meta.csv", report_meta_csv(report));
        write_file(config.out_dir + "/deviation_summary.csv", deviation_summary_csv({report}));
    }
    return report;
}

std::string report_to_csv(const BenchReport& report) {
    std::string out =
        "instance,customers,variant,bks,distance,deviation_pct,vehicles_initial,"
        "vehicles_used,best_seed,stop_reason,error\n";
    for (const auto& r : report.rows) {
        out += csv_cell(r.instance);
        out += ',';
        out += std::to_string(r.customers);
        out += ',';
        out += to_string(report.variant);
        out += ',';
        out += r.bks ? fixed2(*r.bks) : std::string();
        out += ',';
        out += r.error.empty() || r.distance > 0 ? fixed2(r.distance) : std::string();
        out += ',';
        out += r.deviation_pct ? fixed2(*r.deviation_pct) : std::string();
        out += ',';
        out += std::to_string(r.vehicles_initial);
        out += ',';
        out += std::to_string(r.vehicles_used);
        out += ',';
        out += std::to_string(r.best_seed);
        out += ',';
        out += csv_cell(r.stop_reason);
        out += ',';
        out += csv_cell(r.error);
        out += '\n';
    }
    return out;
}

std::string report_meta_csv(const BenchReport& report) {
    std::string out = "instance,variant,total_wallclock_seconds\n";
    for (const auto& r : report.rows) {
        out += csv_cell(r.instance);
        out += ',';
        out += to_string(report.variant);
        out += ',';
        out += fixed6(r.wallclock_seconds);
        out += '\n';
    }
    return out;
}

std::string deviation_summary_csv(const std::vector<BenchReport>& reports) {
    std::string out = "instance,variant,distance,deviation_pct\n";
    for (const auto& report : reports) {
        double sum = 0.0;
        int counted = 0;
        for (const auto& r : report.rows) {
            out += csv_cell(r.instance);
            out += ',';
            out += to_string(report.variant);
            out += ',';
            out += r.error.empty() ? fixed2(r.distance) : std::string();
            out += ',';
            if (r.deviation_pct) {
                out += fixed2(*r.deviation_pct);
                sum += *r.deviation_pct;
                ++counted;
            }
            out += '\n';
        }
        out += "MEAN,";
        out += to_string(report.variant);
        out += ",,";
        out += counted > 0 ? fixed2(sum / counted) : std::string();
        out += '\n';
    }
    return out;
}

}  // namespace hqts
