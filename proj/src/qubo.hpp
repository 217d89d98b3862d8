#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "instance.hpp"

namespace hqts {

// Upper-triangular sparse QUBO: minimize offset + sum q_ii x_i + sum q_ij x_i x_j.
struct Qubo {
    int num_vars = 0;
    std::map<std::pair<int, int>, double> coefficients;   // keys (i, j) with i <= j
    double offset = 0.0;

    void add(int i, int j, double v) {
        if (i > j) std::swap(i, j);
        coefficients[{i, j}] += v;
    }
    size_t nonzeros() const {
        size_t n = 0;
        for (const auto& [k, v] : coefficients)
            if (v != 0.0) ++n;
        return n;
    }
};

// Node(x)position one-hot layout for a cyclic tour over `nodes`
// (depot first, then the route's stops). Variable (i, u) is on when node
// slot i sits at tour position u in 1..N.
struct RouteEncoding {
    std::vector<int> nodes;
    double penalty_a = 0.0;   // one-hot constraint weight
    double penalty_b = 1.0;   // tour-cost weight

    int n() const { return static_cast<int>(nodes.size()); }
    int var_index(int slot, int position) const { return slot * n() + (position - 1); }
};

struct EncodingParams {
    std::optional<double> penalty_a;   // default: twice the largest arc cost
    double penalty_b = 1.0;
};

struct TspQubo {
    Qubo qubo;
    RouteEncoding encoding;
};

// Builds the cyclic-tour QUBO over the given nodes (depot id first).
// A valid one-hot assignment has energy penalty_b * tour cost.
TspQubo build_tsp_qubo(const std::vector<int>& nodes, const CostMatrix& costs,
                       const EncodingParams& params = {});

double qubo_energy(const Qubo& q, const std::vector<uint8_t>& assignment);

// Decode outcome: either the stop order (depot removed, tour rotated so the
// depot leads) or the rows/columns that break the one-hot constraints.
struct DecodeResult {
    bool ok = false;
    std::vector<int> stops;
    std::vector<int> bad_slots;       // node slots without exactly one position
    std::vector<int> bad_positions;   // positions without exactly one node
};

DecodeResult decode_assignment(const RouteEncoding& enc, const std::vector<uint8_t>& assignment);

// Serialization for the wire protocol of external samplers.
std::string qubo_to_json(const Qubo& q, int num_reads);
Qubo qubo_from_json(const std::string& text, int* num_reads_out = nullptr);

}  // namespace hqts
