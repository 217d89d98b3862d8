#pragma once

#include <string>
#include <vector>

#include "instance.hpp"

namespace hqts {

struct Route {
    std::vector<int> stops;   // customer ids in visit order, depot implicit at both ends
    double load = 0.0;
    double cost = 0.0;

    bool empty() const { return stops.empty(); }
    int size() const { return static_cast<int>(stops.size()); }
};

struct Solution {
    std::vector<Route> routes;
    double total_cost = 0.0;
    bool feasible = true;            // capacity dimension only: all loads within Q
    std::vector<int> route_of;       // customer id -> route index, -1 if unrouted

    int vehicles_used() const {
        int n = 0;
        for (const auto& r : routes)
            if (!r.empty()) ++n;
        return n;
    }
};

// Cost of one route under a matrix, depot (0) at both ends; empty -> 0.
double route_cost(const std::vector<int>& stops, const CostMatrix& costs);

// Sum of demands of the stops.
double route_load(const std::vector<int>& stops, const CvrpInstance& inst);

Solution make_empty_solution(const CvrpInstance& inst, int fleet);

// Recomputes every cached field (loads, costs, totals, feasible, route_of)
// from the stop sequences alone.
void refresh_caches(Solution& s, const CvrpInstance& inst);

// Ground-truth total cost, computed from scratch.
double solution_cost(const Solution& s, const CvrpInstance& inst);

// Sum over routes of max(0, load - capacity).
double infeasibility_measure(const Solution& s, const CvrpInstance& inst);

enum class MoveKind { relocate, intra_swap, inter_swap };

// A move records exact positions so it can be applied and inverted:
//   relocate:   customer_a leaves (route_a, pos_a), enters route_b at insert_a
//   intra_swap: stops at pos_a and pos_b of route_a exchange places
//   inter_swap: customer_a (route_a, pos_a) and customer_b (route_b, pos_b)
//               swap routes; insert_b is b's index in route_a after a left,
//               insert_a is a's index in route_b after b left
struct Move {
    MoveKind kind = MoveKind::relocate;
    int customer_a = -1;
    int route_a = -1;
    int pos_a = -1;
    int customer_b = -1;
    int route_b = -1;
    int pos_b = -1;
    int insert_a = -1;
    int insert_b = -1;
    double delta_cost = 0.0;
    double delta_infeasibility = 0.0;
};

// The exact undo of m; applying m then inverse_move(m) restores the solution.
Move inverse_move(const Move& m);

// Applies in place, updating caches incrementally. Throws Error when the
// recorded positions no longer match the solution (stale move).
void apply_move(Solution& s, const Move& m, const CvrpInstance& inst);

struct Violation {
    enum class Kind { missing_customer, duplicate_customer, overload, fleet };
    Kind kind;
    int subject = -1;      // customer id or route index
    double amount = 0.0;   // overload amount where applicable
    std::string describe() const;
};

struct FeasibilityReport {
    bool feasible = true;  // no violations of any kind
    std::vector<Violation> violations;
};

// Full check: every customer exactly once, loads within capacity, nonempty
// route count within the instance fleet bound.
FeasibilityReport check_feasibility(const Solution& s, const CvrpInstance& inst);

}  // namespace hqts
