#include "solution.hpp"

#include <algorithm>
#include <cmath>

namespace hqts {

namespace {
constexpr double kLoadEps = 1e-9;

[[noreturn]] void stale(const char* what) {
    throw Error(std::string("stale move: ") + what);
}
}  // namespace

double route_cost(const std::vector<int>& stops, const CostMatrix& costs) {
    if (stops.empty()) return 0.0;
    double c = costs.at(0, stops.front());
    for (size_t i = 0; i + 1 < stops.size(); ++i)
        c += costs.at(stops[i], stops[i + 1]);
    c += costs.at(stops.back(), 0);
    return c;
}

double route_load(const std::vector<int>& stops, const CvrpInstance& inst) {
    double l = 0.0;
    for (int s : stops) l += inst.demand(s);
    return l;
}

Solution make_empty_solution(const CvrpInstance& inst, int fleet) {
    Solution s;
    s.routes.resize(fleet);
    s.route_of.assign(inst.num_locations(), -1);
    return s;
}

void refresh_caches(Solution& s, const CvrpInstance& inst) {
    s.total_cost = 0.0;
    s.feasible = true;
    s.route_of.assign(inst.num_locations(), -1);
    for (int r = 0; r < static_cast<int>(s.routes.size()); ++r) {
        Route& route = s.routes[r];
        route.load = route_load(route.stops, inst);
        route.cost = route_cost(route.stops, inst.costs);
        s.total_cost += route.cost;
        if (route.load > inst.capacity + kLoadEps) s.feasible = false;
        for (int c : route.stops) s.route_of[c] = r;
    }
}

double solution_cost(const Solution& s, const CvrpInstance& inst) {
    double total = 0.0;
    for (const auto& r : s.routes) total += route_cost(r.stops, inst.costs);
    return total;
}

double infeasibility_measure(const Solution& s, const CvrpInstance& inst) {
    double excess = 0.0;
    for (const auto& r : s.routes) excess += std::max(0.0, r.load - inst.capacity);
    return excess;
}

Move inverse_move(const Move& m) {
    Move inv = m;
    switch (m.kind) {
        case MoveKind::relocate:
            inv.route_a = m.route_b;
            inv.pos_a = m.insert_a;
            inv.route_b = m.route_a;
            inv.insert_a = m.pos_a;
            break;
        case MoveKind::intra_swap:
            // the actors exchanged places; swap the labels so the position
            // checks still match
            inv.customer_a = m.customer_b;
            inv.customer_b = m.customer_a;
            break;
        case MoveKind::inter_swap:
            inv.route_a = m.route_b;
            inv.pos_a = m.insert_a;
            inv.route_b = m.route_a;
            inv.pos_b = m.insert_b;
            inv.insert_a = m.pos_a;
            inv.insert_b = m.pos_b;
            break;
    }
    inv.delta_cost = -m.delta_cost;
    inv.delta_infeasibility = -m.delta_infeasibility;
    return inv;
}

namespace {

void check_route_index(const Solution& s, int r, const char* what) {
    if (r < 0 || r >= static_cast<int>(s.routes.size())) stale(what);
}

void check_stop(const Solution& s, int route, int pos, int customer, const char* what) {
    const auto& stops = s.routes[route].stops;
    if (pos < 0 || pos >= static_cast<int>(stops.size()) || stops[pos] != customer) stale(what);
}

// Refreshes one route's cached cost/load after its stops changed and returns
// the cost delta it contributed.
double reseat_route(Solution& s, int r, const CvrpInstance& inst) {
    Route& route = s.routes[r];
    const double old_cost = route.cost;
    route.load = route_load(route.stops, inst);
    route.cost = route_cost(route.stops, inst.costs);
    for (int i = 0; i < route.size(); ++i) s.route_of[route.stops[i]] = r;
    return route.cost - old_cost;
}

}  // namespace

void apply_move(Solution& s, const Move& m, const CvrpInstance& inst) {
    switch (m.kind) {
        case MoveKind::relocate: {
            check_route_index(s, m.route_a, "relocate origin route");
            check_route_index(s, m.route_b, "relocate target route");
            if (m.route_a == m.route_b) stale("relocate within one route");
            check_stop(s, m.route_a, m.pos_a, m.customer_a, "relocate origin stop");
            auto& from = s.routes[m.route_a].stops;
            auto& to = s.routes[m.route_b].stops;
            if (m.insert_a < 0 || m.insert_a > static_cast<int>(to.size()))
                stale("relocate insertion position");
            from.erase(from.begin() + m.pos_a);
            to.insert(to.begin() + m.insert_a, m.customer_a);
            s.total_cost += reseat_route(s, m.route_a, inst);
            s.total_cost += reseat_route(s, m.route_b, inst);
            break;
        }
        case MoveKind::intra_swap: {
            check_route_index(s, m.route_a, "swap route");
            check_stop(s, m.route_a, m.pos_a, m.customer_a, "swap first stop");
            check_stop(s, m.route_a, m.pos_b, m.customer_b, "swap second stop");
            auto& stops = s.routes[m.route_a].stops;
            std::swap(stops[m.pos_a], stops[m.pos_b]);
            s.total_cost += reseat_route(s, m.route_a, inst);
            break;
        }
        case MoveKind::inter_swap: {
            check_route_index(s, m.route_a, "swap first route");
            check_route_index(s, m.route_b, "swap second route");
            if (m.route_a == m.route_b) stale("inter-route swap within one route");
            check_stop(s, m.route_a, m.pos_a, m.customer_a, "swap first stop");
            check_stop(s, m.route_b, m.pos_b, m.customer_b, "swap second stop");
            auto& ra = s.routes[m.route_a].stops;
            auto& rb = s.routes[m.route_b].stops;
            ra.erase(ra.begin() + m.pos_a);
            rb.erase(rb.begin() + m.pos_b);
            if (m.insert_b < 0 || m.insert_b > static_cast<int>(ra.size()))
                stale("swap insertion into first route");
            if (m.insert_a < 0 || m.insert_a > static_cast<int>(rb.size()))
                stale("swap insertion into second route");
            ra.insert(ra.begin() + m.insert_b, m.customer_b);
            rb.insert(rb.begin() + m.insert_a, m.customer_a);
            s.total_cost += reseat_route(s, m.route_a, inst);
            s.total_cost += reseat_route(s, m.route_b, inst);
            break;
        }
    }
    s.feasible = true;
    for (const auto& r : s.routes)
        if (r.load > inst.capacity + kLoadEps) {
            s.feasible = false;
            break;
        }
}

std::string Violation::describe() const {
    switch (kind) {
        case Kind::missing_customer:
            return "customer " + std::to_string(subject) + " is not visited";
        case Kind::duplicate_customer:
            return "customer " + std::to_string(subject) + " is visited more than once";
        case Kind::overload:
            return "route " + std::to_string(subject) + " exceeds capacity by " +
                   std::to_string(amount);
        case Kind::fleet:
            return "uses " + std::to_string(subject) + " vehicles, more than the fleet allows";
    }
    return "unknown violation";
}

FeasibilityReport check_feasibility(const Solution& s, const CvrpInstance& inst) {
    FeasibilityReport report;
    std::vector<int> seen(inst.num_locations(), 0);
    for (const auto& r : s.routes)
        for (int c : r.stops) {
            if (c >= 1 && c < inst.num_locations()) ++seen[c];
        }
    for (int c = 1; c < inst.num_locations(); ++c) {
        if (seen[c] == 0)
            report.violations.push_back({Violation::Kind::missing_customer, c, 0.0});
        else if (seen[c] > 1)
            report.violations.push_back({Violation::Kind::duplicate_customer, c, 0.0});
    }
    for (int r = 0; r < static_cast<int>(s.routes.size()); ++r) {
        const double load = route_load(s.routes[r].stops, inst);
        if (load > inst.capacity + kLoadEps)
            report.violations.push_back({Violation::Kind::overload, r, load - inst.capacity});
    }
    if (s.vehicles_used() > inst.fleet_size)
        report.violations.push_back({Violation::Kind::fleet, s.vehicles_used(), 0.0});
    report.feasible = report.violations.empty();
    return report;
}

}  // namespace hqts
