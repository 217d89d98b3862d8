#include "serialize.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace hqts {

namespace {
std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}
}  // namespace

std::string solution_to_json(const Solution& s, const CvrpInstance& inst, uint64_t seed,
                             double wallclock_seconds) {
    nlohmann::ordered_json j;
    j["instance_name"] = inst.name;
    j["total_cost"] = std::stod(fixed6(s.total_cost));
    j["vehicles_used"] = s.vehicles_used();
    j["feasible"] = check_feasibility(s, inst).feasible;
    j["seed"] = seed;
    j["wallclock_seconds"] = static_cast<int64_t>(std::llround(wallclock_seconds));
    nlohmann::ordered_json routes = nlohmann::ordered_json::array();
    for (const auto& r : s.routes) {
        if (r.empty()) continue;
        nlohmann::ordered_json stops = nlohmann::ordered_json::array();
        for (int c : r.stops) stops.push_back(inst.file_ids[c]);
        routes.push_back(std::move(stops));
    }
    j["routes"] = std::move(routes);
    return j.dump(2) + "\n";
}

LoadedSolution solution_from_json(const std::string& text, const CvrpInstance& inst) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad solution json: ") + e.what());
    }

    LoadedSolution out;
    try {
        out.instance_name = j.at("instance_name").get<std::string>();
        out.stated_cost = j.at("total_cost").get<double>();
        out.stated_feasible = j.at("feasible").get<bool>();
        out.seed = j.value("seed", 0ULL);

        Solution s = make_empty_solution(inst, inst.fleet_size);
        const auto& routes = j.at("routes");
        if (static_cast<int>(routes.size()) > inst.fleet_size)
            s.routes.resize(routes.size());
        int idx = 0;
        for (const auto& route : routes) {
            for (const auto& stop : route) {
                const int file_id = stop.get<int>();
                const int internal = inst.internal_id(file_id);
                if (internal <= 0)
                    throw ValidationError("solution references unknown stop id " +
                                          std::to_string(file_id));
                s.routes[idx].stops.push_back(internal);
            }
            ++idx;
        }
        refresh_caches(s, inst);
        out.solution = std::move(s);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad solution json: ") + e.what());
    }

    if (std::abs(out.solution.total_cost - out.stated_cost) > 0.01)
        throw ValidationError("stated cost " + std::to_string(out.stated_cost) +
                              " disagrees with recomputed cost " +
                              std::to_string(out.solution.total_cost));
    return out;
}

std::string stats_to_csv(const SearchStats& stats) {
    std::string out = "iteration,current_cost,best_cost,feasible,phase\n";
    for (const auto& p : stats.trajectory) {
        out += std::to_string(p.iteration);
        out += ',';
        out += fixed6(p.current_cost);
        out += ',';
        out += fixed6(p.best_cost);
        out += ',';
        out += p.feasible ? '1' : '0';
        out += ',';
        out += p.phase_feasible ? "feasible" : "infeasible";
        out += '\n';
    }
    return out;
}

}  // namespace hqts
