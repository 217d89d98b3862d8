#pragma once

#include <cstdint>
#include <string>

#include "instance.hpp"
#include "solution.hpp"
#include "tabu.hpp"

namespace hqts {

// Stable JSON for a finished run. Route stops use the ids from the instance
// file. wallclock is stored in whole seconds so identical runs serialize
// identically.
std::string solution_to_json(const Solution& s, const CvrpInstance& inst, uint64_t seed,
                             double wallclock_seconds);

struct LoadedSolution {
    Solution solution;
    std::string instance_name;
    double stated_cost = 0.0;
    bool stated_feasible = true;
    uint64_t seed = 0;
};

// Parses and re-validates against the instance: ids must map, and the stated
// cost must match a from-scratch recomputation within 0.01.
LoadedSolution solution_from_json(const std::string& text, const CvrpInstance& inst);

// One row per iteration: iteration, current cost, incumbent cost, whether the
// walking solution was within capacity, and the selection branch in force.
std::string stats_to_csv(const SearchStats& stats);

}  // namespace hqts
