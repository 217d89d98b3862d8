#include "tabu.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace hqts {

namespace {
constexpr double kEps = 1e-9;
}

void SearchParams::validate() const {
    if (fleet < 0) throw ValidationError("fleet cannot be negative");
    if (tenure < 1) throw ValidationError("tabu tenure must be positive");
    if (x_low <= 0.0 || x_high < x_low)
        throw ValidationError("stagnation window must satisfy 0 < low <= high");
    if (non_improve_stop < 1) throw ValidationError("non-improving stop must be positive");
    if (time_limit_seconds <= 0.0) throw ValidationError("time limit must be positive");
    if (resequence_trigger < 0) throw ValidationError("re-sequence trigger cannot be negative");
}

bool is_tabu(const Move& m, const TabuList& tabu, long iteration) {
    switch (m.kind) {
        case MoveKind::relocate:
            return tabu.active(m.customer_a, m.route_b, iteration);
        case MoveKind::intra_swap:
            return tabu.active(m.customer_a, m.route_a, iteration) ||
                   tabu.active(m.customer_b, m.route_a, iteration);
        case MoveKind::inter_swap:
            return tabu.active(m.customer_a, m.route_b, iteration) ||
                   tabu.active(m.customer_b, m.route_a, iteration);
    }
    return false;
}

void update_tabu(const Move& m, TabuList& tabu, long iteration, int tenure) {
    const long expiry = iteration + tenure;
    switch (m.kind) {
        case MoveKind::relocate:
            tabu.mark(m.customer_a, m.route_a, expiry);
            break;
        case MoveKind::intra_swap:
            tabu.mark(m.customer_a, m.route_a, expiry);
            tabu.mark(m.customer_b, m.route_a, expiry);
            break;
        case MoveKind::inter_swap:
            tabu.mark(m.customer_a, m.route_a, expiry);
            tabu.mark(m.customer_b, m.route_b, expiry);
            break;
    }
}

namespace {

double excess(double load, double capacity) { return load > capacity ? load - capacity : 0.0; }

// Cheapest place for c in the route, ignoring the stop at skip_pos (-1 keeps
// all). Positions refer to the route with the skipped stop removed.
std::pair<double, int> best_insertion(const std::vector<int>& stops, int skip_pos, int c,
                                      const CostMatrix& costs) {
    const int reduced_len = static_cast<int>(stops.size()) - (skip_pos >= 0 ? 1 : 0);
    auto at = [&](int k) { return stops[skip_pos >= 0 && k >= skip_pos ? k + 1 : k]; };
    double best = std::numeric_limits<double>::infinity();
    int best_pos = 0;
    for (int pos = 0; pos <= reduced_len; ++pos) {
        const int u = pos == 0 ? 0 : at(pos - 1);
        const int v = pos == reduced_len ? 0 : at(pos);
        const double delta = costs.at(u, c) + costs.at(c, v) - costs.at(u, v);
        if (delta < best) {
            best = delta;
            best_pos = pos;
        }
    }
    return {best, best_pos};
}

// Total order over moves used for every tie-break: customer first, then
// origin route, destination route, positions; kind only as a last resort.
bool move_identity_less(const Move& a, const Move& b) {
    if (a.customer_a != b.customer_a) return a.customer_a < b.customer_a;
    if (a.route_a != b.route_a) return a.route_a < b.route_a;
    if (a.route_b != b.route_b) return a.route_b < b.route_b;
    if (a.pos_a != b.pos_a) return a.pos_a < b.pos_a;
    if (a.pos_b != b.pos_b) return a.pos_b < b.pos_b;
    if (a.customer_b != b.customer_b) return a.customer_b < b.customer_b;
    if (a.insert_a != b.insert_a) return a.insert_a < b.insert_a;
    if (a.insert_b != b.insert_b) return a.insert_b < b.insert_b;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
}

struct Ranked {
    double primary = 0.0;
    double secondary = 0.0;
    const Move* move = nullptr;

    bool better_than(const Ranked& o) const {
        if (!o.move) return true;
        if (primary != o.primary) return primary < o.primary;
        if (secondary != o.secondary) return secondary < o.secondary;
        return move_identity_less(*move, *o.move);
    }
};

}  // namespace

std::vector<Move> generate_neighborhood(const Solution& s, const CvrpInstance& inst,
                                        const NeighborLists& neighbors, bool allow_intra_swap) {
    const int n = inst.num_locations();
    const int nroutes = static_cast<int>(s.routes.size());
    const double cap = inst.capacity;
    const CostMatrix& costs = inst.costs;

    std::vector<int> pos_of(n, -1);
    for (int r = 0; r < nroutes; ++r) {
        const auto& stops = s.routes[r].stops;
        for (int i = 0; i < static_cast<int>(stops.size()); ++i) pos_of[stops[i]] = i;
    }

    std::vector<Move> moves;
    moves.reserve(static_cast<size_t>(n) * 8);
    std::vector<int> targets;
    std::vector<char> seen(nroutes, 0);

    auto has_neighbor_in = [&](int c, int route) {
        for (int nb : neighbors.of(c))
            if (s.route_of[nb] == route) return true;
        return false;
    };

    for (int a = 1; a < n; ++a) {
        const int ra = s.route_of[a];
        if (ra < 0) continue;
        const auto& astops = s.routes[ra].stops;
        const int pa = pos_of[a];
        const int alen = static_cast<int>(astops.size());
        const double da = inst.demand(a);
        const double load_a = s.routes[ra].load;

        const int aprev = pa == 0 ? 0 : astops[pa - 1];
        const int anext = pa + 1 == alen ? 0 : astops[pa + 1];
        const double remove_a =
            costs.at(aprev, anext) - costs.at(aprev, a) - costs.at(a, anext);

        targets.clear();
        for (int nb : neighbors.of(a)) {
            const int rb = s.route_of[nb];
            if (rb < 0 || rb == ra || seen[rb]) continue;
            seen[rb] = 1;
            targets.push_back(rb);
        }
        std::sort(targets.begin(), targets.end());

        for (const int rb : targets) {
            seen[rb] = 0;
            const auto& bstops = s.routes[rb].stops;
            const double load_b = s.routes[rb].load;

            // relocation of a behind/ahead of one of its neighbors' routes
            {
                auto [delta_in, pos] = best_insertion(bstops, -1, a, costs);
                Move m;
                m.kind = MoveKind::relocate;
                m.customer_a = a;
                m.route_a = ra;
                m.pos_a = pa;
                m.route_b = rb;
                m.insert_a = pos;
                m.delta_cost = remove_a + delta_in;
                m.delta_infeasibility = excess(load_a - da, cap) - excess(load_a, cap) +
                                        excess(load_b + da, cap) - excess(load_b, cap);
                moves.push_back(m);
            }

            // cross-route swaps; enumerate each unordered pair once, both
            // destinations must hold a neighbor of their incoming customer
            for (int pb = 0; pb < static_cast<int>(bstops.size()); ++pb) {
                const int b = bstops[pb];
                if (b <= a) continue;
                if (!has_neighbor_in(a, rb)) continue;
                if (!has_neighbor_in(b, ra)) continue;

                const double db = inst.demand(b);
                const int bprev = pb == 0 ? 0 : bstops[pb - 1];
                const int bnext = pb + 1 == static_cast<int>(bstops.size()) ? 0 : bstops[pb + 1];
                const double remove_b =
                    costs.at(bprev, bnext) - costs.at(bprev, b) - costs.at(b, bnext);

                auto [in_b, pos_b_in_a] = best_insertion(astops, pa, b, costs);
                auto [in_a, pos_a_in_b] = best_insertion(bstops, pb, a, costs);

                Move m;
                m.kind = MoveKind::inter_swap;
                m.customer_a = a;
                m.route_a = ra;
                m.pos_a = pa;
                m.customer_b = b;
                m.route_b = rb;
                m.pos_b = pb;
                m.insert_a = pos_a_in_b;
                m.insert_b = pos_b_in_a;
                m.delta_cost = remove_a + remove_b + in_a + in_b;
                m.delta_infeasibility =
                    excess(load_a - da + db, cap) - excess(load_a, cap) +
                    excess(load_b - db + da, cap) - excess(load_b, cap);
                moves.push_back(m);
            }
        }
    }

    if (allow_intra_swap) {
        for (int r = 0; r < nroutes; ++r) {
            const auto& stops = s.routes[r].stops;
            const int len = static_cast<int>(stops.size());
            for (int pa = 0; pa < len; ++pa)
                for (int pb = pa + 1; pb < len; ++pb) {
                    const int a = stops[pa], b = stops[pb];
                    const int p = pa == 0 ? 0 : stops[pa - 1];
                    const int nx = pb + 1 == len ? 0 : stops[pb + 1];
                    double delta;
                    if (pb == pa + 1) {
                        delta = costs.at(p, b) + costs.at(a, nx) - costs.at(p, a) -
                                costs.at(b, nx);
                    } else {
                        const int q = stops[pa + 1];
                        const int r2 = stops[pb - 1];
                        delta = costs.at(p, b) + costs.at(b, q) + costs.at(r2, a) +
                                costs.at(a, nx) - costs.at(p, a) - costs.at(a, q) -
                                costs.at(r2, b) - costs.at(b, nx);
                    }
                    Move m;
                    m.kind = MoveKind::intra_swap;
                    m.customer_a = a;
                    m.route_a = r;
                    m.pos_a = pa;
                    m.customer_b = b;
                    m.route_b = r;
                    m.pos_b = pb;
                    m.delta_cost = delta;
                    moves.push_back(m);
                }
        }
    }

    return moves;
}

MoveChoice select_move_basic(const std::vector<Move>& moves, const Solution& current,
                             const CvrpInstance& inst, double global_best_cost,
                             const TabuList& tabu, long iteration) {
    const double current_inf = infeasibility_measure(current, inst);
    MoveChoice choice;
    Ranked best_allowed, best_any, best_aspiring;

    for (const Move& m : moves) {
        if (current_inf + m.delta_infeasibility > kEps) continue;   // would overload
        Ranked r{m.delta_cost, 0.0, &m};
        if (r.better_than(best_any)) best_any = r;
        if (!is_tabu(m, tabu, iteration)) {
            if (r.better_than(best_allowed)) best_allowed = r;
        } else if (current.total_cost + m.delta_cost < global_best_cost - kEps) {
            if (r.better_than(best_aspiring)) best_aspiring = r;
        }
    }

    // a tabu move may still win by beating the best solution ever seen
    Ranked* pick = nullptr;
    if (best_allowed.move && best_aspiring.move)
        pick = best_aspiring.better_than(best_allowed) ? &best_aspiring : &best_allowed;
    else if (best_allowed.move)
        pick = &best_allowed;
    else if (best_aspiring.move)
        pick = &best_aspiring;
    else if (best_any.move) {
        pick = &best_any;
        choice.forced = true;
    }
    if (pick) choice.step = *pick->move;
    return choice;
}

MoveChoice select_move_oscillating(const std::vector<Move>& moves, const Solution& current,
                                   const CvrpInstance& inst, double global_best_cost,
                                   const TabuList& tabu, long iteration) {
    (void)global_best_cost;
    const double current_inf = infeasibility_measure(current, inst);
    const bool from_feasible = current_inf <= kEps;

    MoveChoice choice;
    Ranked best_allowed, best_any, best_feasible;

    for (const Move& m : moves) {
        const double result_inf = current_inf + m.delta_infeasibility;
        const bool lands_feasible = result_inf <= kEps;

        // rank: cost-first out of feasible space, overload-first out of infeasible
        Ranked r;
        r.move = &m;
        if (from_feasible) {
            r.primary = m.delta_cost;
            r.secondary = lands_feasible ? 0.0 : 1.0;
        } else {
            r.primary = lands_feasible ? 0.0 : result_inf;
            r.secondary = m.delta_cost;
        }

        if (r.better_than(best_any)) best_any = r;
        if (!is_tabu(m, tabu, iteration) && r.better_than(best_allowed)) best_allowed = r;

        if (lands_feasible) {
            Ranked f{m.delta_cost, 0.0, &m};
            if (f.better_than(best_feasible)) best_feasible = f;
        }
    }

    if (best_allowed.move) {
        choice.step = *best_allowed.move;
    } else if (best_any.move) {
        choice.step = *best_any.move;
        choice.forced = true;
    }
    if (best_feasible.move) choice.record = *best_feasible.move;
    return choice;
}

void PhaseMachine::redraw(std::mt19937_64& rng, int num_locations, const SearchParams& p) {
    std::uniform_real_distribution<double> dist(p.x_low * num_locations,
                                                p.x_high * num_locations);
    window_ = dist(rng);
}

void PhaseMachine::reset(std::mt19937_64& rng, int num_locations, const SearchParams& p) {
    stage_ = 0;
    counter_ = 0;
    redraw(rng, num_locations, p);
}

void PhaseMachine::force_widen(std::mt19937_64& rng, int num_locations, const SearchParams& p) {
    stage_ = 1;
    counter_ = 0;
    ++changes_;
    redraw(rng, num_locations, p);
}

PhaseMachine::Action PhaseMachine::note(bool improved, std::mt19937_64& rng, int num_locations,
                                        const SearchParams& p) {
    if (improved) {
        counter_ = 0;   // restart the countdown; the stage itself stays put
        return Action::none;
    }
    if (++counter_ < static_cast<long>(window_)) return Action::none;
    counter_ = 0;
    ++changes_;
    redraw(rng, num_locations, p);
    if (stage_ == 0) {
        stage_ = 1;
        return Action::widen;
    }
    if (stage_ == 1) {
        stage_ = 2;
        return Action::refocus;
    }
    stage_ = 0;
    return Action::restore;
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::non_improving: return "non_improving_limit";
        case StopReason::time_limit: return "time_limit";
        case StopReason::exhausted: return "exhausted";
    }
    return "unknown";
}

namespace {

void spot_check_coverage(const Solution& s, const CvrpInstance& inst) {
    std::vector<char> seen(inst.num_locations(), 0);
    for (const auto& r : s.routes)
        for (int c : r.stops) {
            if (c < 1 || c >= inst.num_locations() || seen[c])
                throw Error("internal error: customer coverage corrupted during search");
            seen[c] = 1;
        }
    for (int c = 1; c < inst.num_locations(); ++c)
        if (!seen[c]) throw Error("internal error: customer coverage corrupted during search");
}

// Re-optimizes each tour of the incumbent; true when the total improved.
bool resequence_incumbent(Solution& best, const CvrpInstance& inst, ResequenceCache& cache,
                          const RouteSolver& solver, ResequenceStats& stats) {
    const double before = best.total_cost;
    for (auto& r : best.routes) {
        if (r.empty()) continue;
        Route out = resequence_route(r, inst, cache, solver, stats);
        if (out.cost < r.cost - 1e-12) r = out;
    }
    refresh_caches(best, inst);
    return best.total_cost < before - kEps;
}

}  // namespace

SearchResult run_search(const CvrpInstance& inst, const SearchParams& params,
                        const RouteSolver& solver) {
    params.validate();
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const int fleet = params.fleet > 0 ? params.fleet : inst.fleet_size;
    const int ncust = inst.num_customers();
    int k_base = inst.bks && inst.bks->vehicles > 0 ? inst.bks->vehicles : std::max(1, fleet - 1);
    k_base = std::max(1, std::min(k_base, ncust - 1));

    const NeighborLists narrow = nearest_neighbors(inst, k_base);
    const NeighborLists wide = nearest_neighbors(inst, std::max(1, std::min(2 * k_base, ncust - 1)));

    RouteSolver route_solver = solver;
    route_solver.anneal.rng_seed = params.rng_seed;

    SearchResult result;
    SearchStats& stats = result.stats;

    Solution current = build_seeded_solution(inst, narrow, fleet);
    stats.initial_cost = current.total_cost;
    stats.initial_vehicles = current.vehicles_used();

    Solution best = current;
    double best_cost = best.total_cost;

    TabuList tabu;
    std::mt19937_64 rng(params.rng_seed);
    PhaseMachine phases;
    phases.reset(rng, inst.num_locations(), params);

    ResequenceCache cache;
    long iteration = 0;
    long since_best = 0;
    StopReason reason = StopReason::non_improving;

    stats.trajectory.push_back({0, current.total_cost, best_cost, current.feasible, true});

    while (true) {
        if (since_best >= params.non_improve_stop) {
            reason = StopReason::non_improving;
            break;
        }
        if (elapsed() >= params.time_limit_seconds) {
            reason = StopReason::time_limit;
            break;
        }

        const NeighborLists& active = phases.widened() ? wide : narrow;
        const std::vector<Move> moves =
            generate_neighborhood(current, inst, active, !phases.widened());

        MoveChoice choice;
        if (!moves.empty()) {
            choice = params.oscillation
                         ? select_move_oscillating(moves, current, inst, best_cost, tabu,
                                                   iteration + 1)
                         : select_move_basic(moves, current, inst, best_cost, tabu,
                                             iteration + 1);
        }
        if (!choice.step) {
            if (!phases.widened()) {
                phases.force_widen(rng, inst.num_locations(), params);
                continue;
            }
            reason = StopReason::exhausted;
            break;
        }

        ++iteration;
        const bool branch_feasible = current.feasible;
        bool improved = false;

        // a capacity-feasible candidate can beat the incumbent even when the
        // walk itself steps elsewhere
        if (choice.record &&
            current.total_cost + choice.record->delta_cost < best_cost - kEps) {
            Solution candidate = current;
            apply_move(candidate, *choice.record, inst);
            if (candidate.feasible && candidate.total_cost < best_cost - kEps) {
                best = candidate;
                best_cost = best.total_cost;
                improved = true;
            }
        }

        update_tabu(*choice.step, tabu, iteration, params.tenure);
        apply_move(current, *choice.step, inst);
        if (choice.forced) ++stats.forced_moves;
        if (!current.feasible) ++stats.infeasible_iterations;

        if (current.feasible && current.total_cost < best_cost - kEps) {
            best = current;
            best_cost = best.total_cost;
            improved = true;
        }

        if (improved)
            since_best = 0;
        else
            ++since_best;

        const PhaseMachine::Action action =
            phases.note(improved, rng, inst.num_locations(), params);
        if (action == PhaseMachine::Action::refocus && !params.oscillation) {
            current = best;   // pull the walk back to the incumbent
        }
        stats.phase_changes = phases.changes();

        if (!improved && params.resequence_trigger > 0 &&
            since_best % params.resequence_trigger == 0) {
            ++stats.resequence_rounds;
            if (resequence_incumbent(best, inst, cache, route_solver, stats.resequence)) {
                best_cost = best.total_cost;
                since_best = 0;
                phases.note(true, rng, inst.num_locations(), params);
            }
        }

        stats.trajectory.push_back(
            {iteration, current.total_cost, best_cost, current.feasible, branch_feasible});

        if (iteration % 100 == 0) spot_check_coverage(current, inst);
    }

    stats.iterations = iteration;
    stats.stop_reason = reason;
    stats.wallclock_seconds = elapsed();
    result.best = best;
    return result;
}

}  // namespace hqts
