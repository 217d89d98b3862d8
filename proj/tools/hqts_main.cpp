// Command-line front end; talks to the solver library through its C API only.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hqts.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInstance = 2;
constexpr int kExitRuntime = 3;

struct ParamsDeleter {
    void operator()(hqts_params* p) const { hqts_params_free(p); }
};
struct InstanceDeleter {
    void operator()(hqts_instance* i) const { hqts_instance_free(i); }
};
struct ResultDeleter {
    void operator()(hqts_result* r) const { hqts_result_free(r); }
};
using ParamsPtr = std::unique_ptr<hqts_params, ParamsDeleter>;
using InstancePtr = std::unique_ptr<hqts_instance, InstanceDeleter>;
using ResultPtr = std::unique_ptr<hqts_result, ResultDeleter>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    hqts_string_free(s);
    return out;
}

int exit_code_for(hqts_status status) {
    switch (status) {
        case HQTS_OK: return kExitOk;
        case HQTS_ERROR_INVALID_ARGUMENT: return kExitUsage;
        case HQTS_ERROR_PARSE:
        case HQTS_ERROR_VALIDATION: return kExitInstance;
        case HQTS_ERROR_RUNTIME: return kExitRuntime;
    }
    return kExitRuntime;
}

[[noreturn]] void die(hqts_status status, const std::string& context) {
    std::cerr << "error: " << context << ": " << hqts_last_error() << "\n";
    std::exit(exit_code_for(status));
}

void must(hqts_status status, const std::string& context) {
    if (status != HQTS_OK) die(status, context);
}

// CLI flags override config-file values, which override the environment.
struct CommonOptions {
    std::string config;
    std::string variant;
    std::string sampler;
    std::string seed;
    std::string time_limit;
    std::string fleet;
    std::string out_dir;
    std::string reps;

    ParamsPtr build() const {
        ParamsPtr params(hqts_params_create());
        if (const char* env = std::getenv("HQTS_REMOTE_ENDPOINT"); env && *env)
            must(hqts_params_set(params.get(), "remote_endpoint", env), "remote endpoint");
        if (!config.empty())
            must(hqts_params_load_file(params.get(), config.c_str()), "config '" + config + "'");
        auto apply = [&](const char* key, const std::string& v) {
            if (!v.empty()) must(hqts_params_set(params.get(), key, v.c_str()), key);
        };
        apply("variant", variant);
        apply("sampler", sampler);
        apply("seed", seed);
        apply("time_limit", time_limit);
        apply("fleet", fleet);
        apply("out_dir", out_dir);
        apply("reps", reps);
        return params;
    }
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config, "key=value configuration file");
    cmd->add_option("--variant", opts.variant, "algorithm: ts, ts_so or cw")
        ->check(CLI::IsMember({"ts", "ts_so", "cw"}));
    cmd->add_option("--sampler", opts.sampler, "tour sampler: sa, remote or brute")
        ->check(CLI::IsMember({"sa", "remote", "brute"}));
    cmd->add_option("--seed", opts.seed, "base random seed");
    cmd->add_option("--time-limit", opts.time_limit, "per-run time limit in seconds");
    cmd->add_option("--fleet", opts.fleet, "vehicle count (0 = instance default)");
    cmd->add_option("--out", opts.out_dir, "output directory");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open '" << path << "'\n";
        std::exit(kExitInstance);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot write '" << path << "'\n";
        std::exit(kExitRuntime);
    }
    f << content;
}

std::string param_or(const hqts_params* params, const char* key, const char* fallback) {
    const char* v = hqts_params_get(params, key);
    return v && *v ? v : fallback;
}

int run_solve(const std::string& instance_path, const CommonOptions& opts) {
    ParamsPtr params = opts.build();

    hqts_instance* raw_inst = nullptr;
    must(hqts_instance_load(instance_path.c_str(), &raw_inst), instance_path);
    InstancePtr inst(raw_inst);

    hqts_result* raw_result = nullptr;
    must(hqts_solve(inst.get(), params.get(), &raw_result), "solve");
    ResultPtr result(raw_result);

    const std::string variant = param_or(params.get(), "variant", "ts_so");
    const std::string out_dir = param_or(params.get(), "out_dir", "hqts_out");
    std::filesystem::create_directories(out_dir);

    std::string stem = out_dir + "/" + hqts_instance_name(inst.get()) + "_" + variant;
    if (variant != "cw") stem += "_seed" + std::to_string(hqts_result_seed(result.get()));

    char* json = nullptr;
    must(hqts_result_to_json(result.get(), &json), "serialize solution");
    write_file(stem + ".json", take_string(json));

    if (variant != "cw") {
        char* csv = nullptr;
        must(hqts_result_stats_csv(result.get(), &csv), "serialize stats");
        write_file(stem + "_stats.csv", take_string(csv));
    }

    std::printf("instance        %s\n", hqts_instance_name(inst.get()));
    std::printf("variant         %s\n", variant.c_str());
    std::printf("cost            %.2f\n", hqts_result_cost(result.get()));
    std::printf("feasible        %s\n", hqts_result_feasible(result.get()) ? "yes" : "no");
    std::printf("vehicles        %d\n", hqts_result_vehicles_used(result.get()));
    if (hqts_instance_has_best_known(inst.get())) {
        const double bks = hqts_instance_best_known_distance(inst.get());
        std::printf("best known      %.2f (deviation %.2f%%)\n", bks,
                    100.0 * (hqts_result_cost(result.get()) - bks) / bks);
    }
    if (variant != "cw") {
        std::printf("iterations      %ld\n", hqts_result_iterations(result.get()));
        std::printf("stop reason     %s\n", hqts_result_stop_reason(result.get()));
        std::printf("wallclock       %.1fs\n", hqts_result_wallclock_seconds(result.get()));
    }
    std::printf("solution        %s.json\n", stem.c_str());
    return kExitOk;
}

int run_bench(const std::vector<std::string>& targets, const CommonOptions& opts,
              const std::string& reps) {
    CommonOptions merged = opts;
    merged.reps = reps;
    if (merged.out_dir.empty()) merged.out_dir = "hqts_bench";
    ParamsPtr params = merged.build();

    std::vector<std::string> paths;
    for (const auto& t : targets) {
        if (std::filesystem::is_directory(t)) {
            for (const auto& entry : std::filesystem::directory_iterator(t))
                if (entry.path().extension() == ".vrp") paths.push_back(entry.path().string());
        } else {
            paths.push_back(t);
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) {
        std::cerr << "error: no instances found\n";
        return kExitUsage;
    }

    std::vector<const char*> c_paths;
    for (const auto& p : paths) c_paths.push_back(p.c_str());

    char* report = nullptr;
    must(hqts_benchmark(c_paths.data(), static_cast<int>(c_paths.size()), params.get(), &report),
         "benchmark");
    const std::string csv = take_string(report);
    std::printf("%s", csv.c_str());
    std::printf("artifacts in %s\n", param_or(params.get(), "out_dir", "hqts_bench").c_str());
    return kExitOk;
}

int run_plot(const std::string& solution_path, const std::string& instance_path,
             const CommonOptions& opts) {
    hqts_instance* raw_inst = nullptr;
    must(hqts_instance_load(instance_path.c_str(), &raw_inst), instance_path);
    InstancePtr inst(raw_inst);

    const std::string json = read_file(solution_path);
    char* svg = nullptr;
    must(hqts_solution_json_render_svg(inst.get(), json.c_str(), &svg), solution_path);

    std::filesystem::path out_path(solution_path);
    out_path.replace_extension(".svg");
    if (!opts.out_dir.empty()) {
        std::filesystem::create_directories(opts.out_dir);
        out_path = std::filesystem::path(opts.out_dir) / out_path.filename();
    }
    write_file(out_path.string(), take_string(svg));
    std::printf("wrote %s\n", out_path.string().c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabu-search solver for capacitated vehicle routing"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string instance_path, solution_path, plot_instance, reps = "";
    std::vector<std::string> bench_targets;

    CommonOptions solve_opts, bench_opts, plot_opts;

    CLI::App* solve = app.add_subcommand("solve", "solve one instance");
    solve->add_option("instance", instance_path, "instance file")->required();
    add_common(solve, solve_opts);

    CLI::App* bench = app.add_subcommand("bench", "run a benchmark sweep");
    bench->add_option("targets", bench_targets, "instance files or directories")->required();
    bench->add_option("--reps", reps, "repetitions per instance");
    add_common(bench, bench_opts);

    CLI::App* plot = app.add_subcommand("plot", "render a solution to SVG");
    plot->add_option("solution", solution_path, "solution json")->required();
    plot->add_option("instance", plot_instance, "instance file")->required();
    plot->add_option("--out", plot_opts.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return run_solve(instance_path, solve_opts);
        if (bench->parsed()) return run_bench(bench_targets, bench_opts, reps);
        if (plot->parsed()) return run_plot(solution_path, plot_instance, plot_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
