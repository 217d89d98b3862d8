#include "construct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hqts {

namespace {

// Cheapest insertion of customer c into the route; returns (delta, position).
std::pair<double, int> cheapest_insertion(const std::vector<int>& stops, int c,
                                          const CostMatrix& costs) {
    double best = std::numeric_limits<double>::infinity();
    int best_pos = 0;
    const int len = static_cast<int>(stops.size());
    for (int pos = 0; pos <= len; ++pos) {
        const int prev = pos == 0 ? 0 : stops[pos - 1];
        const int next = pos == len ? 0 : stops[pos];
        const double delta = costs.at(prev, c) + costs.at(c, next) - costs.at(prev, next);
        if (delta < best) {
            best = delta;
            best_pos = pos;
        }
    }
    return {best, best_pos};
}

}  // namespace

Solution build_seeded_solution(const CvrpInstance& inst, const NeighborLists& neighbors,
                               int fleet) {
    const int ncust = inst.num_customers();
    if (fleet < 1) throw ConstructError("fleet must hold at least one vehicle");
    if (inst.capacity * fleet < inst.total_demand())
        throw ConstructError("total demand exceeds combined vehicle capacity");

    Solution s = make_empty_solution(inst, fleet);

    // seeds: customers far from the depot, skipping anyone who is the nearest
    // neighbor of a seed already chosen (keeps seeds spread apart)
    std::vector<int> by_distance(ncust);
    std::iota(by_distance.begin(), by_distance.end(), 1);
    std::sort(by_distance.begin(), by_distance.end(), [&](int a, int b) {
        const double ca = inst.cost(0, a), cb = inst.cost(0, b);
        if (ca != cb) return ca > cb;
        return a < b;
    });

    std::vector<bool> placed(inst.num_locations(), false);
    std::vector<int> seeds;
    const int want = std::min(fleet, ncust);
    for (int c : by_distance) {
        if (static_cast<int>(seeds.size()) == want) break;
        bool shadows_seed = false;
        for (int seedc : seeds) {
            const auto& nb = neighbors.of(seedc);
            if (!nb.empty() && nb.front() == c) {
                shadows_seed = true;
                break;
            }
        }
        if (shadows_seed) continue;
        seeds.push_back(c);
    }
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
        s.routes[i].stops.push_back(seeds[i]);
        placed[seeds[i]] = true;
        s.route_of[seeds[i]] = i;
    }

    // remaining customers by descending demand
    std::vector<int> rest;
    for (int c = 1; c <= ncust; ++c)
        if (!placed[c]) rest.push_back(c);
    std::sort(rest.begin(), rest.end(), [&](int a, int b) {
        if (inst.demand(a) != inst.demand(b)) return inst.demand(a) > inst.demand(b);
        return a < b;
    });

    std::vector<double> loads(fleet, 0.0);
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) loads[i] = inst.demand(seeds[i]);

    for (int c : rest) {
        int best_route = -1, best_pos = 0;
        double best_delta = std::numeric_limits<double>::infinity();
        bool neighbor_round = true;
        for (int round = 0; round < 2 && best_route == -1; ++round) {
            neighbor_round = round == 0;
            for (int r = 0; r < fleet; ++r) {
                if (loads[r] + inst.demand(c) > inst.capacity) continue;
                if (neighbor_round) {
                    bool linked = false;
                    for (int nb : neighbors.of(c))
                        if (s.route_of[nb] == r) {
                            linked = true;
                            break;
                        }
                    if (!linked) continue;
                }
                auto [delta, pos] = cheapest_insertion(s.routes[r].stops, c, inst.costs);
                if (delta < best_delta) {
                    best_delta = delta;
                    best_route = r;
                    best_pos = pos;
                }
            }
        }
        if (best_route == -1)
            throw ConstructError("customer " + std::to_string(c) +
                                 " does not fit into any vehicle");
        s.routes[best_route].stops.insert(s.routes[best_route].stops.begin() + best_pos, c);
        loads[best_route] += inst.demand(c);
        s.route_of[c] = best_route;
    }

    refresh_caches(s, inst);
    return s;
}

Solution clarke_wright(const CvrpInstance& inst) {
    const int n = inst.num_locations();
    const int ncust = inst.num_customers();

    // one route per customer to start
    std::vector<std::vector<int>> routes(ncust + 1);
    std::vector<double> loads(ncust + 1, 0.0);
    std::vector<int> route_id(n, -1);
    for (int c = 1; c < n; ++c) {
        routes[c] = {c};
        loads[c] = inst.demand(c);
        route_id[c] = c;
    }

    struct Saving {
        double value;
        int i, j;
    };
    std::vector<Saving> savings;
    savings.reserve(static_cast<size_t>(ncust) * (ncust - 1) / 2);
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            savings.push_back({inst.cost(0, i) + inst.cost(0, j) - inst.cost(i, j), i, j});
    std::sort(savings.begin(), savings.end(), [](const Saving& a, const Saving& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    auto at_end = [&](int customer) {
        const auto& r = routes[route_id[customer]];
        return r.front() == customer || r.back() == customer;
    };
    // joins j's route onto the tail of i's route, orienting both as needed
    auto merge = [&](int i, int j) {
        const int ri = route_id[i], rj = route_id[j];
        auto& a = routes[ri];
        auto& b = routes[rj];
        if (a.front() == i) std::reverse(a.begin(), a.end());
        if (b.back() == j) std::reverse(b.begin(), b.end());
        for (int c : b) {
            route_id[c] = ri;
            a.push_back(c);
        }
        loads[ri] += loads[rj];
        b.clear();
        loads[rj] = 0.0;
    };

    int route_count = ncust;
    for (const Saving& sv : savings) {
        if (sv.value <= 0.0) break;
        const int ri = route_id[sv.i], rj = route_id[sv.j];
        if (ri == rj) continue;
        if (!at_end(sv.i) || !at_end(sv.j)) continue;
        if (loads[ri] + loads[rj] > inst.capacity) continue;
        merge(sv.i, sv.j);
        --route_count;
    }

    // over the fleet bound: force the cheapest end-joins that still fit
    while (route_count > inst.fleet_size) {
        double best_increase = std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;
        for (int i = 1; i < n; ++i) {
            if (!at_end(i)) continue;
            for (int j = 1; j < n; ++j) {
                if (i == j || route_id[i] == route_id[j] || !at_end(j)) continue;
                if (loads[route_id[i]] + loads[route_id[j]] > inst.capacity) continue;
                const double inc = inst.cost(i, j) - inst.cost(0, i) - inst.cost(0, j);
                if (inc < best_increase) {
                    best_increase = inc;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == -1) break;   // capacity blocks every join; fleet stays violated
        merge(bi, bj);
        --route_count;
    }

    Solution s = make_empty_solution(inst, std::max(inst.fleet_size, route_count));
    int slot = 0;
    for (int c = 1; c < n; ++c)
        if (!routes[c].empty()) s.routes[slot++].stops = routes[c];
    refresh_caches(s, inst);
    return s;
}

}  // namespace hqts
