#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "construct.hpp"
#include "instance.hpp"
#include "sampler.hpp"
#include "solution.hpp"

namespace hqts {

struct SearchParams {
    int fleet = 0;                      // 0 = use the instance's vehicle bound
    int tenure = 15;                    // iterations an attribute stays tabu
    bool oscillation = false;           // allow guided excursions through overload
    double x_low = 0.6;                 // stagnation window, multiples of |V|
    double x_high = 1.1;
    long non_improve_stop = 5000;       // stop after this many non-improving moves
    double time_limit_seconds = 3600.0;
    long resequence_trigger = 1000;     // re-optimize best's tours this often; 0 = off
    uint64_t rng_seed = 1;

    void validate() const;   // throws ValidationError on nonsense
};

// Attribute memory: (customer, route) pairs with an expiry iteration.
// A pair is tabu at iteration t while expiry > t.
class TabuList {
public:
    bool active(int customer, int route, long iteration) const {
        auto it = entries_.find(key(customer, route));
        return it != entries_.end() && it->second > iteration;
    }
    void mark(int customer, int route, long expiry) { entries_[key(customer, route)] = expiry; }
    void clear() { entries_.clear(); }
    size_t size() const { return entries_.size(); }

private:
    static uint64_t key(int customer, int route) {
        return (static_cast<uint64_t>(static_cast<uint32_t>(customer)) << 32) |
               static_cast<uint32_t>(route);
    }
    std::unordered_map<uint64_t, long> entries_;
};

// A move is tabu when any customer it displaces would re-enter a route it
// recently left.
bool is_tabu(const Move& m, const TabuList& tabu, long iteration);

// Marks the routes the displaced customers are leaving.
void update_tabu(const Move& m, TabuList& tabu, long iteration, int tenure);

// All candidate moves around the current solution: relocations of each
// customer toward routes holding one of its neighbors, in-route swaps
// (unless suppressed), and cross-route swaps where each destination route
// holds a neighbor of its incoming customer. Moves carry exact cost and
// overload deltas.
std::vector<Move> generate_neighborhood(const Solution& s, const CvrpInstance& inst,
                                        const NeighborLists& neighbors, bool allow_intra_swap);

struct MoveChoice {
    std::optional<Move> step;     // move the walk takes; may be tabu when forced
    std::optional<Move> record;   // cheapest capacity-feasible candidate, tabu or not
    bool forced = false;          // everything admissible was tabu
};

// Plain selection: only capacity-preserving moves are admissible; a tabu move
// wins only when it beats the global best (aspiration).
MoveChoice select_move_basic(const std::vector<Move>& moves, const Solution& current,
                             const CvrpInstance& inst, double global_best_cost,
                             const TabuList& tabu, long iteration);

// Oscillating selection: from a feasible solution, the best non-tabu move by
// cost regardless of which side of the capacity boundary it lands on; from an
// infeasible one, the move minimizing resulting overload (cost breaks ties).
// `record` is the cheapest move that lands feasible, ignoring tabu status.
MoveChoice select_move_oscillating(const std::vector<Move>& moves, const Solution& current,
                                   const CvrpInstance& inst, double global_best_cost,
                                   const TabuList& tabu, long iteration);

// Stagnation-driven cycle: widen the neighborhood, then refocus on the best
// solution, then restore. The window is redrawn uniformly from
// [x_low*|V|, x_high*|V|] at every transition.
class PhaseMachine {
public:
    enum class Action { none, widen, refocus, restore };

    void reset(std::mt19937_64& rng, int num_locations, const SearchParams& p);
    // Call once per iteration; advances the cycle after `window` stagnant
    // iterations. Improvement restarts the countdown but keeps the stage.
    Action note(bool improved, std::mt19937_64& rng, int num_locations, const SearchParams& p);

    bool widened() const { return stage_ != 0; }
    int stage() const { return stage_; }
    double window() const { return window_; }
    long changes() const { return changes_; }
    // Forces the widened stage (used when the normal neighborhood dries up).
    void force_widen(std::mt19937_64& rng, int num_locations, const SearchParams& p);

private:
    void redraw(std::mt19937_64& rng, int num_locations, const SearchParams& p);
    int stage_ = 0;       // 0 normal, 1 widened, 2 widened after refocus
    long counter_ = 0;
    double window_ = 0.0;
    long changes_ = 0;
};

enum class StopReason { non_improving, time_limit, exhausted };
const char* to_string(StopReason r);

struct TrajectoryPoint {
    long iteration = 0;
    double current_cost = 0.0;
    double best_cost = 0.0;
    bool feasible = true;       // current solution, after the move
    bool phase_feasible = true; // branch the selection ran under (before the move)
};

struct SearchStats {
    long iterations = 0;
    long forced_moves = 0;
    long resequence_rounds = 0;
    long phase_changes = 0;
    long infeasible_iterations = 0;
    double initial_cost = 0.0;
    int initial_vehicles = 0;
    double wallclock_seconds = 0.0;
    StopReason stop_reason = StopReason::non_improving;
    ResequenceStats resequence;
    std::vector<TrajectoryPoint> trajectory;
};

struct SearchResult {
    Solution best;
    SearchStats stats;
};

// Full search: seeded construction, tabu walk with the stagnation cycle,
// periodic tour re-optimization of the incumbent. The incumbent is always
// capacity-feasible. Deterministic for fixed instance, params and solver
// (unless the time limit fires first).
SearchResult run_search(const CvrpInstance& inst, const SearchParams& params,
                        const RouteSolver& solver);

}  // namespace hqts
