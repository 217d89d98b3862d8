#include "sampler.hpp"

#include <algorithm>
#include <cmath>

#include "remote.hpp"

namespace hqts {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Xoshiro {
    // splitmix-seeded xorshift; fast and reproducible across platforms
    uint64_t s;
    explicit Xoshiro(uint64_t seed) : s(splitmix64(seed ^ 0xd1b54a32d192ed03ULL)) {}
    uint64_t next() {
        s = splitmix64(s);
        return s;
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

// Dense mirror of the sparse QUBO for O(1) field updates during sweeps.
struct DenseQubo {
    int n;
    std::vector<double> diag;
    std::vector<std::vector<std::pair<int, double>>> adj;
    double max_abs = 0.0;

    explicit DenseQubo(const Qubo& q) : n(q.num_vars), diag(q.num_vars, 0.0), adj(q.num_vars) {
        for (const auto& [key, coeff] : q.coefficients) {
            if (coeff == 0.0) continue;
            max_abs = std::max(max_abs, std::abs(coeff));
            if (key.first == key.second) {
                diag[key.first] += coeff;
            } else {
                adj[key.first].push_back({key.second, coeff});
                adj[key.second].push_back({key.first, coeff});
            }
        }
        if (max_abs == 0.0) max_abs = 1.0;
    }
};

}  // namespace

std::vector<Sample> simulated_anneal(const Qubo& q, const AnnealParams& params) {
    if (params.num_reads < 1 || params.sweeps_per_read < 1)
        throw ValidationError("annealing needs at least one read and one sweep");
    if (params.beta_initial <= 0.0 || params.beta_final <= params.beta_initial)
        throw ValidationError("annealing schedule must satisfy 0 < initial < final");
    if (q.num_vars < 1) throw ValidationError("annealing needs at least one variable");

    const DenseQubo dense(q);
    const int n = dense.n;
    const int sweeps = params.sweeps_per_read;

    // schedule expressed relative to the coefficient scale
    std::vector<double> betas(sweeps);
    const double ratio = params.beta_final / params.beta_initial;
    for (int t = 0; t < sweeps; ++t) {
        const double frac = sweeps == 1 ? 1.0 : static_cast<double>(t) / (sweeps - 1);
        betas[t] = params.beta_initial * std::pow(ratio, frac) / dense.max_abs;
    }

    std::map<std::vector<uint8_t>, int> tally;
    std::vector<uint8_t> state(n), best(n);
    std::vector<double> field(n);

    for (int read = 0; read < params.num_reads; ++read) {
        Xoshiro rng(splitmix64(params.rng_seed) ^ splitmix64(0x9e3779b9ULL * (read + 1)));
        for (int v = 0; v < n; ++v) state[v] = rng.next() & 1;

        // field[v] = diag[v] + sum of couplings to active neighbors
        double energy = q.offset;
        for (int v = 0; v < n; ++v) {
            double f = dense.diag[v];
            for (const auto& [w, c] : dense.adj[v])
                if (state[w]) f += c;
            field[v] = f;
            if (state[v]) energy += dense.diag[v];
        }
        for (int v = 0; v < n; ++v)
            if (state[v])
                for (const auto& [w, c] : dense.adj[v])
                    if (state[w] && w > v) energy += c;

        best = state;
        double best_energy = energy;

        for (int t = 0; t < sweeps; ++t) {
            const double beta = betas[t];
            for (int v = 0; v < n; ++v) {
                const double delta = state[v] ? -field[v] : field[v];
                if (delta > 0.0 && rng.uniform() >= std::exp(-beta * delta)) continue;
                const int sign = state[v] ? -1 : 1;
                state[v] ^= 1;
                energy += delta;
                for (const auto& [w, c] : dense.adj[v]) field[w] += sign * c;
                if (energy < best_energy) {
                    best_energy = energy;
                    best = state;
                }
            }
        }
        ++tally[best];
    }

    std::vector<Sample> out;
    out.reserve(tally.size());
    for (auto& [assignment, count] : tally) {
        Sample s;
        s.energy = qubo_energy(q, assignment);   // exact, free of sweep drift
        s.assignment = assignment;
        s.occurrences = count;
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.assignment < b.assignment;
    });
    return out;
}

BruteTour brute_force_tsp(const std::vector<int>& stops, const CostMatrix& costs) {
    if (stops.empty()) throw ValidationError("cannot enumerate an empty route");
    if (stops.size() > 10)
        throw ValidationError("exhaustive tour search is capped at 10 stops");

    std::vector<int> perm(stops);
    std::sort(perm.begin(), perm.end());
    BruteTour best{perm, route_cost(perm, costs)};
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double c = route_cost(perm, costs);
        if (c < best.cost) {
            best.cost = c;
            best.stops = perm;
        }
    }
    return best;
}

namespace {

uint64_t stop_set_hash(const std::vector<int>& sorted_stops) {
    uint64_t h = 0x2545f4914f6cdd1dULL;
    for (int s : sorted_stops) h = splitmix64(h ^ static_cast<uint64_t>(s));
    return h;
}

// One sampler pass over the route's tour QUBO; empty when nothing decoded.
std::vector<int> sample_tour(const std::vector<int>& route_nodes, const CvrpInstance& inst,
                             const RouteSolver& solver, uint64_t call_seed,
                             ResequenceStats& stats) {
    TspQubo tq = build_tsp_qubo(route_nodes, inst.costs, solver.encoding);
    std::vector<Sample> samples;
    ++stats.sampler_calls;
    if (solver.kind == RouteSolver::Kind::remote) {
        try {
            samples = remote_sample(tq.qubo, solver.endpoint, solver.anneal.num_reads,
                                    solver.timeout_seconds);
        } catch (const Error&) {
            ++stats.remote_failures;
            AnnealParams local = solver.anneal;
            local.rng_seed = call_seed;
            samples = simulated_anneal(tq.qubo, local);
        }
    } else {
        AnnealParams local = solver.anneal;
        local.rng_seed = call_seed;
        samples = simulated_anneal(tq.qubo, local);
    }
    for (const Sample& s : samples) {
        DecodeResult d = decode_assignment(tq.encoding, s.assignment);
        if (d.ok) return d.stops;
    }
    ++stats.decode_failures;
    return {};
}

}  // namespace

Route resequence_route(const Route& route, const CvrpInstance& inst, ResequenceCache& cache,
                       const RouteSolver& solver, ResequenceStats& stats) {
    ++stats.calls;
    if (route.size() <= 1) return route;

    std::vector<int> key(route.stops);
    std::sort(key.begin(), key.end());

    const double input_cost = route_cost(route.stops, inst.costs);

    ResequenceCache::Entry entry;
    if (cache.find(key, entry)) {
        ++stats.cache_hits;
        if (entry.cost <= input_cost) {
            Route out = route;
            out.stops = entry.order;
            out.cost = entry.cost;
            return out;
        }
        // the caller found a better order than the cached one; remember it
        cache.store(key, {route.stops, input_cost});
        return route;
    }
    ++stats.cache_misses;

    std::vector<int> candidate;
    double candidate_cost = input_cost;

    if (solver.kind == RouteSolver::Kind::brute) {
        if (route.size() <= 10) {
            ++stats.brute_fallbacks;
            BruteTour t = brute_force_tsp(route.stops, inst.costs);
            candidate = t.stops;
            candidate_cost = t.cost;
        } else {
            ++stats.identity_fallbacks;
        }
    } else {
        std::vector<int> nodes;
        nodes.reserve(route.size() + 1);
        nodes.push_back(0);
        nodes.insert(nodes.end(), route.stops.begin(), route.stops.end());
        const uint64_t call_seed = splitmix64(solver.anneal.rng_seed ^ stop_set_hash(key));
        candidate = sample_tour(nodes, inst, solver, call_seed, stats);
        if (!candidate.empty()) {
            candidate_cost = route_cost(candidate, inst.costs);
        } else if (route.size() <= 10) {
            ++stats.brute_fallbacks;
            BruteTour t = brute_force_tsp(route.stops, inst.costs);
            candidate = t.stops;
            candidate_cost = t.cost;
        } else {
            ++stats.identity_fallbacks;
        }
    }

    Route out = route;
    if (!candidate.empty() && candidate_cost <= input_cost) {
        out.stops = std::move(candidate);
        out.cost = candidate_cost;
    } else {
        out.cost = input_cost;
    }
    cache.store(key, {out.stops, out.cost});
    return out;
}

}  // namespace hqts
