#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "qubo.hpp"
#include "solution.hpp"

namespace hqts {

struct AnnealParams {
    int num_reads = 32;
    int sweeps_per_read = 1000;
    double beta_initial = 0.1;   // in units of the largest |coefficient|
    double beta_final = 10.0;
    uint64_t rng_seed = 0;
};

struct Sample {
    std::vector<uint8_t> assignment;
    double energy = 0.0;
    int occurrences = 1;
};

// Independent single-flip Metropolis restarts over a geometric temperature
// ladder. Returns distinct states sorted by (energy, assignment), each
// energy recomputed exactly from the QUBO.
std::vector<Sample> simulated_anneal(const Qubo& q, const AnnealParams& params);

struct BruteTour {
    std::vector<int> stops;
    double cost = 0.0;
};

// Exact optimum over all stop orders (depot fixed at both ends); the
// lexicographically smallest optimal order wins ties. At most 10 stops.
BruteTour brute_force_tsp(const std::vector<int>& stops, const CostMatrix& costs);

// Best-known order per stop set, keyed by the sorted stop ids.
// Concurrent readers are allowed; writers take the exclusive lock.
class ResequenceCache {
public:
    struct Entry {
        std::vector<int> order;
        double cost = 0.0;
    };

    bool find(const std::vector<int>& key, Entry& out) const {
        std::shared_lock lock(mutex_);
        auto it = map_.find(key);
        if (it == map_.end()) return false;
        out = it->second;
        return true;
    }
    void store(const std::vector<int>& key, Entry entry) {
        std::unique_lock lock(mutex_);
        map_[key] = std::move(entry);
    }
    size_t size() const {
        std::shared_lock lock(mutex_);
        return map_.size();
    }

private:
    mutable std::shared_mutex mutex_;
    std::map<std::vector<int>, Entry> map_;
};

struct ResequenceStats {
    long calls = 0;
    long cache_hits = 0;
    long cache_misses = 0;
    long sampler_calls = 0;       // QUBO sampler invocations (local or remote)
    long remote_failures = 0;     // remote errors absorbed by falling back
    long decode_failures = 0;     // no valid tour among returned samples
    long brute_fallbacks = 0;     // exact enumeration stepped in
    long identity_fallbacks = 0;  // route too long to enumerate, kept as-is
};

// How the tour subproblem gets solved.
struct RouteSolver {
    enum class Kind { anneal, remote, brute };
    Kind kind = Kind::anneal;
    AnnealParams anneal;
    EncodingParams encoding;
    std::string endpoint;          // remote only
    double timeout_seconds = 30.0; // remote only
};

// Reorders one route's stops via the cyclic-tour QUBO (or exact enumeration),
// never returning a worse order than the input. Results are cached by stop
// set; a cache hit never invokes the solver.
Route resequence_route(const Route& route, const CvrpInstance& inst, ResequenceCache& cache,
                       const RouteSolver& solver, ResequenceStats& stats);

}  // namespace hqts
