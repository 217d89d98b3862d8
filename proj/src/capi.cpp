#include "hqts.h"

#include <cstring>
#include <fstream>
#include <map>
#include <string>

#include "bench.hpp"
#include "construct.hpp"
#include "instance.hpp"
#include "sampler.hpp"
#include "serialize.hpp"
#include "svg.hpp"
#include "tabu.hpp"

using namespace hqts;

struct hqts_instance {
    CvrpInstance inner;
};

struct hqts_params {
    std::map<std::string, std::string> values;
};

struct hqts_result {
    Solution solution;
    SearchStats stats;
    const hqts_instance* owner = nullptr;   // instance the solve ran against
    uint64_t seed = 0;
    bool has_stats = false;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

hqts_status classify(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return HQTS_ERROR_PARSE;
    if (dynamic_cast<const ValidationError*>(&e)) return HQTS_ERROR_VALIDATION;
    return HQTS_ERROR_RUNTIME;
}

template <typename Fn>
hqts_status guarded(Fn&& fn) {
    try {
        set_error("");
        return fn();
    } catch (const std::exception& e) {
        set_error(e.what());
        return classify(e);
    } catch (...) {
        set_error("unknown failure");
        return HQTS_ERROR_RUNTIME;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

hqts_status require(bool ok, const char* msg) {
    if (ok) return HQTS_OK;
    set_error(msg);
    return HQTS_ERROR_INVALID_ARGUMENT;
}

const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> d = {
        {"variant", "ts_so"},  {"sampler", "sa"},      {"seed", "1"},
        {"fleet", "0"},        {"tenure", "15"},       {"time_limit", "3600"},
        {"non_improve_stop", "5000"}, {"resequence_trigger", "1000"},
        {"x_low", "0.6"},      {"x_high", "1.1"},      {"reps", "3"},
        {"num_reads", "32"},   {"sweeps", "1000"},     {"beta_initial", "0.1"},
        {"beta_final", "10"},  {"penalty_a", ""},      {"penalty_b", "1"},
        {"remote_endpoint", ""}, {"remote_timeout", "30"}, {"out_dir", ""},
    };
    return d;
}

std::string get_or_default(const hqts_params* params, const std::string& key) {
    if (params) {
        auto it = params->values.find(key);
        if (it != params->values.end()) return it->second;
    }
    return defaults().at(key);
}

double to_real(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ValidationError("parameter '" + key + "' needs a number, got '" + v + "'");
    }
    if (pos != v.size())
        throw ValidationError("parameter '" + key + "' needs a number, got '" + v + "'");
    return out;
}

long to_integer(const std::string& key, const std::string& v) {
    size_t pos = 0;
    long out;
    try {
        out = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw ValidationError("parameter '" + key + "' needs an integer, got '" + v + "'");
    }
    if (pos != v.size())
        throw ValidationError("parameter '" + key + "' needs an integer, got '" + v + "'");
    return out;
}

uint64_t to_seed(const std::string& key, const std::string& v) {
    size_t pos = 0;
    uint64_t out;
    try {
        out = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw ValidationError("parameter '" + key + "' needs an unsigned integer, got '" + v +
                              "'");
    }
    if (pos != v.size())
        throw ValidationError("parameter '" + key + "' needs an unsigned integer, got '" + v +
                              "'");
    return out;
}

SearchParams search_params_from(const hqts_params* p) {
    SearchParams s;
    s.fleet = static_cast<int>(to_integer("fleet", get_or_default(p, "fleet")));
    s.tenure = static_cast<int>(to_integer("tenure", get_or_default(p, "tenure")));
    s.time_limit_seconds = to_real("time_limit", get_or_default(p, "time_limit"));
    s.non_improve_stop = to_integer("non_improve_stop", get_or_default(p, "non_improve_stop"));
    s.resequence_trigger =
        to_integer("resequence_trigger", get_or_default(p, "resequence_trigger"));
    s.x_low = to_real("x_low", get_or_default(p, "x_low"));
    s.x_high = to_real("x_high", get_or_default(p, "x_high"));
    s.rng_seed = to_seed("seed", get_or_default(p, "seed"));
    s.oscillation = get_or_default(p, "variant") == "ts_so";
    s.validate();
    return s;
}

RouteSolver route_solver_from(const hqts_params* p) {
    RouteSolver solver;
    const std::string sampler = get_or_default(p, "sampler");
    if (sampler == "sa")
        solver.kind = RouteSolver::Kind::anneal;
    else if (sampler == "remote")
        solver.kind = RouteSolver::Kind::remote;
    else if (sampler == "brute")
        solver.kind = RouteSolver::Kind::brute;
    else
        throw ValidationError("unknown sampler '" + sampler + "' (expected sa, remote or brute)");

    solver.anneal.num_reads = static_cast<int>(to_integer("num_reads", get_or_default(p, "num_reads")));
    solver.anneal.sweeps_per_read =
        static_cast<int>(to_integer("sweeps", get_or_default(p, "sweeps")));
    solver.anneal.beta_initial = to_real("beta_initial", get_or_default(p, "beta_initial"));
    solver.anneal.beta_final = to_real("beta_final", get_or_default(p, "beta_final"));
    const std::string pa = get_or_default(p, "penalty_a");
    if (!pa.empty()) solver.encoding.penalty_a = to_real("penalty_a", pa);
    solver.encoding.penalty_b = to_real("penalty_b", get_or_default(p, "penalty_b"));
    solver.endpoint = get_or_default(p, "remote_endpoint");
    solver.timeout_seconds = to_real("remote_timeout", get_or_default(p, "remote_timeout"));
    if (solver.kind == RouteSolver::Kind::remote && solver.endpoint.empty())
        throw ValidationError("remote sampler needs remote_endpoint");
    return solver;
}

}  // namespace

extern "C" {

const char* hqts_version(void) { return "1.0.0"; }

const char* hqts_last_error(void) { return g_last_error.c_str(); }

void hqts_string_free(char* s) { delete[] s; }

hqts_status hqts_instance_load(const char* path, hqts_instance** out) {
    if (auto rc = require(path && out, "path and out must not be NULL")) return rc;
    return guarded([&] {
        auto* handle = new hqts_instance{load_instance(path)};
        *out = handle;
        return HQTS_OK;
    });
}

hqts_status hqts_instance_parse(const char* text, hqts_instance** out) {
    if (auto rc = require(text && out, "text and out must not be NULL")) return rc;
    return guarded([&] {
        auto* handle = new hqts_instance{parse_instance(std::string(text))};
        *out = handle;
        return HQTS_OK;
    });
}

void hqts_instance_free(hqts_instance* inst) { delete inst; }

const char* hqts_instance_name(const hqts_instance* inst) {
    return inst ? inst->inner.name.c_str() : "";
}
int hqts_instance_num_locations(const hqts_instance* inst) {
    return inst ? inst->inner.num_locations() : 0;
}
int hqts_instance_num_customers(const hqts_instance* inst) {
    return inst ? inst->inner.num_customers() : 0;
}
double hqts_instance_capacity(const hqts_instance* inst) {
    return inst ? inst->inner.capacity : 0.0;
}
int hqts_instance_fleet_size(const hqts_instance* inst) {
    return inst ? inst->inner.fleet_size : 0;
}
int hqts_instance_has_coords(const hqts_instance* inst) {
    return inst && inst->inner.has_coords() ? 1 : 0;
}
int hqts_instance_has_best_known(const hqts_instance* inst) {
    return inst && inst->inner.bks ? 1 : 0;
}
double hqts_instance_best_known_distance(const hqts_instance* inst) {
    return inst && inst->inner.bks ? inst->inner.bks->distance : 0.0;
}
int hqts_instance_best_known_vehicles(const hqts_instance* inst) {
    return inst && inst->inner.bks ? inst->inner.bks->vehicles : 0;
}
double hqts_instance_cost(const hqts_instance* inst, int i, int j) {
    if (!inst) return -1.0;
    const int n = inst->inner.num_locations();
    if (i < 0 || j < 0 || i >= n || j >= n) return -1.0;
    return inst->inner.cost(i, j);
}

hqts_status hqts_instance_to_text(const hqts_instance* inst, char** out) {
    if (auto rc = require(inst && out, "inst and out must not be NULL")) return rc;
    return guarded([&] {
        *out = dup_string(to_tsplib(inst->inner));
        return HQTS_OK;
    });
}

hqts_params* hqts_params_create(void) { return new hqts_params; }

void hqts_params_free(hqts_params* params) { delete params; }

hqts_status hqts_params_set(hqts_params* params, const char* key, const char* value) {
    if (auto rc = require(params && key && value, "params, key and value must not be NULL"))
        return rc;
    return guarded([&]() -> hqts_status {
        const std::string k(key);
        if (!defaults().count(k)) {
            set_error("unknown parameter '" + k + "'");
            return HQTS_ERROR_INVALID_ARGUMENT;
        }
        params->values[k] = value;
        return HQTS_OK;
    });
}

hqts_status hqts_params_load_file(hqts_params* params, const char* path) {
    if (auto rc = require(params && path, "params and path must not be NULL")) return rc;
    return guarded([&]() -> hqts_status {
        std::ifstream f(path);
        if (!f) throw ParseError(std::string("cannot open config file '") + path + "'");
        std::string line;
        int line_no = 0;
        while (std::getline(f, line)) {
            ++line_no;
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            const auto e = line.find_last_not_of(" \t\r");
            line = line.substr(b, e - b + 1);
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(std::string(path) + ":" + std::to_string(line_no) +
                                 ": expected key=value");
            auto trim = [](std::string s) {
                const auto x = s.find_first_not_of(" \t");
                const auto y = s.find_last_not_of(" \t");
                return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
            };
            const std::string k = trim(line.substr(0, eq));
            const std::string v = trim(line.substr(eq + 1));
            if (!defaults().count(k))
                throw ValidationError(std::string(path) + ":" + std::to_string(line_no) +
                                      ": unknown parameter '" + k + "'");
            params->values[k] = v;
        }
        return HQTS_OK;
    });
}

const char* hqts_params_get(const hqts_params* params, const char* key) {
    if (!params || !key) return nullptr;
    auto it = params->values.find(key);
    return it == params->values.end() ? nullptr : it->second.c_str();
}

hqts_status hqts_solve(const hqts_instance* inst, const hqts_params* params,
                       hqts_result** out) {
    if (auto rc = require(inst && out, "inst and out must not be NULL")) return rc;
    return guarded([&]() -> hqts_status {
        const std::string variant = get_or_default(params, "variant");
        if (variant == "cw") return hqts_clarke_wright(inst, out);
        if (variant != "ts" && variant != "ts_so")
            throw ValidationError("unknown variant '" + variant + "'");
        SearchParams sp = search_params_from(params);
        RouteSolver solver = route_solver_from(params);
        SearchResult res = run_search(inst->inner, sp, solver);
        auto* handle = new hqts_result;
        handle->solution = std::move(res.best);
        handle->stats = std::move(res.stats);
        handle->owner = inst;
        handle->seed = sp.rng_seed;
        handle->has_stats = true;
        *out = handle;
        return HQTS_OK;
    });
}

hqts_status hqts_clarke_wright(const hqts_instance* inst, hqts_result** out) {
    if (auto rc = require(inst && out, "inst and out must not be NULL")) return rc;
    return guarded([&] {
        auto* handle = new hqts_result;
        handle->solution = clarke_wright(inst->inner);
        handle->owner = inst;
        *out = handle;
        return HQTS_OK;
    });
}

void hqts_result_free(hqts_result* result) { delete result; }

double hqts_result_cost(const hqts_result* result) {
    return result ? result->solution.total_cost : 0.0;
}
int hqts_result_feasible(const hqts_result* result) {
    if (!result || !result->owner) return 0;
    return check_feasibility(result->solution, result->owner->inner).feasible ? 1 : 0;
}
int hqts_result_vehicles_used(const hqts_result* result) {
    return result ? result->solution.vehicles_used() : 0;
}
int hqts_result_num_routes(const hqts_result* result) {
    return result ? static_cast<int>(result->solution.routes.size()) : 0;
}
int hqts_result_route_size(const hqts_result* result, int route) {
    if (!result || route < 0 || route >= static_cast<int>(result->solution.routes.size()))
        return -1;
    return result->solution.routes[route].size();
}
int hqts_result_route_stops(const hqts_result* result, int route, int* buffer, int buffer_len) {
    if (!result || !buffer || route < 0 ||
        route >= static_cast<int>(result->solution.routes.size()))
        return -1;
    const auto& stops = result->solution.routes[route].stops;
    if (buffer_len < static_cast<int>(stops.size())) return -1;
    for (size_t i = 0; i < stops.size(); ++i)
        buffer[i] = result->owner->inner.file_ids[stops[i]];
    return static_cast<int>(stops.size());
}
uint64_t hqts_result_seed(const hqts_result* result) { return result ? result->seed : 0; }
const char* hqts_result_stop_reason(const hqts_result* result) {
    return result && result->has_stats ? to_string(result->stats.stop_reason) : "";
}
double hqts_result_wallclock_seconds(const hqts_result* result) {
    return result && result->has_stats ? result->stats.wallclock_seconds : 0.0;
}
long hqts_result_iterations(const hqts_result* result) {
    return result && result->has_stats ? result->stats.iterations : 0;
}
long hqts_result_cache_hits(const hqts_result* result) {
    return result && result->has_stats ? result->stats.resequence.cache_hits : 0;
}
long hqts_result_cache_misses(const hqts_result* result) {
    return result && result->has_stats ? result->stats.resequence.cache_misses : 0;
}
long hqts_result_sampler_calls(const hqts_result* result) {
    return result && result->has_stats ? result->stats.resequence.sampler_calls : 0;
}

hqts_status hqts_result_to_json(const hqts_result* result, char** out) {
    if (auto rc = require(result && out, "result and out must not be NULL")) return rc;
    return guarded([&] {
        *out = dup_string(solution_to_json(result->solution, result->owner->inner, result->seed,
                                           result->has_stats
                                               ? result->stats.wallclock_seconds
                                               : 0.0));
        return HQTS_OK;
    });
}

hqts_status hqts_result_stats_csv(const hqts_result* result, char** out) {
    if (auto rc = require(result && out, "result and out must not be NULL")) return rc;
    return guarded([&]() -> hqts_status {
        if (!result->has_stats)
            throw ValidationError("this result carries no iteration statistics");
        *out = dup_string(stats_to_csv(result->stats));
        return HQTS_OK;
    });
}

hqts_status hqts_result_render_svg(const hqts_result* result, char** out) {
    if (auto rc = require(result && out, "result and out must not be NULL")) return rc;
    return guarded([&] {
        *out = dup_string(render_routes_svg(result->solution, result->owner->inner));
        return HQTS_OK;
    });
}

hqts_status hqts_solution_json_validate(const hqts_instance* inst, const char* json,
                                        double* cost_out, int* feasible_out) {
    if (auto rc = require(inst && json, "inst and json must not be NULL")) return rc;
    return guarded([&] {
        LoadedSolution loaded = solution_from_json(json, inst->inner);
        if (cost_out) *cost_out = loaded.solution.total_cost;
        if (feasible_out)
            *feasible_out = check_feasibility(loaded.solution, inst->inner).feasible ? 1 : 0;
        return HQTS_OK;
    });
}

hqts_status hqts_solution_json_render_svg(const hqts_instance* inst, const char* json,
                                          char** out) {
    if (auto rc = require(inst && json && out, "inst, json and out must not be NULL")) return rc;
    return guarded([&] {
        LoadedSolution loaded = solution_from_json(json, inst->inner);
        *out = dup_string(render_routes_svg(loaded.solution, inst->inner));
        return HQTS_OK;
    });
}

hqts_status hqts_benchmark(const char* const* instance_paths, int num_paths,
                           const hqts_params* params, char** report_csv_out) {
    if (auto rc = require(instance_paths && num_paths > 0,
                          "at least one instance path is required"))
        return rc;
    return guarded([&] {
        RunConfig config;
        for (int i = 0; i < num_paths; ++i) {
            if (!instance_paths[i]) throw ValidationError("instance path must not be NULL");
            config.instance_paths.push_back(instance_paths[i]);
        }
        config.variant = variant_from_string(get_or_default(params, "variant"));
        config.search = search_params_from(params);
        config.solver = route_solver_from(params);
        config.repetitions = static_cast<int>(to_integer("reps", get_or_default(params, "reps")));
        config.out_dir = get_or_default(params, "out_dir");
        BenchReport report = run_benchmark(config);
        if (report_csv_out) *report_csv_out = dup_string(report_to_csv(report));
        return HQTS_OK;
    });
}

}  // extern "C"
