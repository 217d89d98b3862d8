#include "qubo.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace hqts {

TspQubo build_tsp_qubo(const std::vector<int>& nodes, const CostMatrix& costs,
                       const EncodingParams& params) {
    const int n = static_cast<int>(nodes.size());
    if (n < 2) throw ValidationError("tour encoding needs at least two nodes");
    if (std::set<int>(nodes.begin(), nodes.end()).size() != nodes.size())
        throw ValidationError("tour encoding needs distinct nodes");
    for (int id : nodes)
        if (id < 0 || id >= costs.size())
            throw ValidationError("tour node id outside the cost matrix");

    double max_arc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            max_arc = std::max(max_arc, costs.at(nodes[i], nodes[j]));

    double a = params.penalty_a ? *params.penalty_a : 2.0 * max_arc;
    if (params.penalty_a && *params.penalty_a <= 0.0)
        throw ValidationError("one-hot penalty must be positive");
    if (a <= 0.0) a = 1.0;   // degenerate all-zero costs: any positive weight works
    const double b = params.penalty_b;
    if (b <= 0.0) throw ValidationError("tour-cost weight must be positive");

    TspQubo out;
    out.encoding.nodes = nodes;
    out.encoding.penalty_a = a;
    out.encoding.penalty_b = b;
    Qubo& q = out.qubo;
    q.num_vars = n * n;
    q.offset = 2.0 * a * n;

    // each variable appears once in a row constraint and once in a column one
    const RouteEncoding& enc = out.encoding;
    for (int i = 0; i < n; ++i)
        for (int u = 1; u <= n; ++u)
            q.add(enc.var_index(i, u), enc.var_index(i, u), -2.0 * a);

    // one node per position and one position per node
    for (int i = 0; i < n; ++i)
        for (int u = 1; u <= n; ++u)
            for (int v = u + 1; v <= n; ++v)
                q.add(enc.var_index(i, u), enc.var_index(i, v), 2.0 * a);
    for (int u = 1; u <= n; ++u)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                q.add(enc.var_index(i, u), enc.var_index(j, u), 2.0 * a);

    // tour cost along consecutive (cyclic) positions
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double c = costs.at(nodes[i], nodes[j]);
            for (int u = 1; u <= n; ++u) {
                const int v = u == n ? 1 : u + 1;
                q.add(enc.var_index(i, u), enc.var_index(j, v), b * c);
            }
        }

    return out;
}

double qubo_energy(const Qubo& q, const std::vector<uint8_t>& assignment) {
    if (static_cast<int>(assignment.size()) != q.num_vars)
        throw ValidationError("assignment length does not match variable count");
    double e = q.offset;
    for (const auto& [key, coeff] : q.coefficients) {
        if (assignment[key.first] && assignment[key.second]) e += coeff;
    }
    return e;
}

DecodeResult decode_assignment(const RouteEncoding& enc, const std::vector<uint8_t>& assignment) {
    const int n = enc.n();
    DecodeResult res;
    if (static_cast<int>(assignment.size()) != n * n)
        throw ValidationError("assignment length does not match the encoding");

    std::vector<int> node_at(n + 1, -1);   // position -> slot
    for (int i = 0; i < n; ++i) {
        int count = 0;
        for (int u = 1; u <= n; ++u)
            if (assignment[enc.var_index(i, u)]) ++count;
        if (count != 1) res.bad_slots.push_back(i);
    }
    for (int u = 1; u <= n; ++u) {
        int count = 0;
        for (int i = 0; i < n; ++i)
            if (assignment[enc.var_index(i, u)]) {
                ++count;
                node_at[u] = i;
            }
        if (count != 1) res.bad_positions.push_back(u);
    }
    if (!res.bad_slots.empty() || !res.bad_positions.empty()) return res;

    int depot_pos = -1;
    for (int u = 1; u <= n; ++u)
        if (node_at[u] == 0) depot_pos = u;
    res.ok = true;
    res.stops.reserve(n - 1);
    for (int step = 1; step < n; ++step) {
        const int u = (depot_pos - 1 + step) % n + 1;
        res.stops.push_back(enc.nodes[node_at[u]]);
    }
    return res;
}

std::string qubo_to_json(const Qubo& q, int num_reads) {
    nlohmann::json j;
    j["num_vars"] = q.num_vars;
    j["offset"] = q.offset;
    j["num_reads"] = num_reads;
    nlohmann::json linear = nlohmann::json::object();
    nlohmann::json quadratic = nlohmann::json::object();
    for (const auto& [key, coeff] : q.coefficients) {
        if (coeff == 0.0) continue;
        if (key.first == key.second)
            linear[std::to_string(key.first)] = coeff;
        else
            quadratic[std::to_string(key.first) + "," + std::to_string(key.second)] = coeff;
    }
    j["linear"] = std::move(linear);
    j["quadratic"] = std::move(quadratic);
    return j.dump();
}

Qubo qubo_from_json(const std::string& text, int* num_reads_out) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad qubo json: ") + e.what());
    }
    try {
        Qubo q;
        q.num_vars = j.at("num_vars").get<int>();
        if (q.num_vars < 0) throw ParseError("negative num_vars");
        q.offset = j.value("offset", 0.0);
        if (num_reads_out) *num_reads_out = j.value("num_reads", 1);
        const nlohmann::json linear = j.value("linear", nlohmann::json::object());
        for (const auto& [k, v] : linear.items()) {
            const int i = std::stoi(k);
            if (i < 0 || i >= q.num_vars) throw ParseError("linear index out of range");
            q.add(i, i, v.get<double>());
        }
        const nlohmann::json quadratic = j.value("quadratic", nlohmann::json::object());
        for (const auto& [k, v] : quadratic.items()) {
            const auto comma = k.find(',');
            if (comma == std::string::npos) throw ParseError("quadratic key needs 'i,j'");
            const int i = std::stoi(k.substr(0, comma));
            const int jj = std::stoi(k.substr(comma + 1));
            if (i < 0 || jj < 0 || i >= q.num_vars || jj >= q.num_vars || i == jj)
                throw ParseError("quadratic index out of range");
            q.add(i, jj, v.get<double>());
        }
        return q;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad qubo json: ") + e.what());
    }
}

}  // namespace hqts
