#include "instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace hqts {

double CostMatrix::max_entry() const {
    double m = 0.0;
    for (double v : entries_) m = std::max(m, v);
    return m;
}

double CvrpInstance::total_demand() const {
    double s = 0.0;
    for (const auto& loc : locations) s += loc.demand;
    return s;
}

bool CvrpInstance::has_coords() const {
    return std::all_of(locations.begin(), locations.end(),
                       [](const Location& l) { return l.has_coords; });
}

int CvrpInstance::internal_id(int file_id) const {
    for (size_t i = 0; i < file_ids.size(); ++i)
        if (file_ids[i] == file_id) return static_cast<int>(i);
    return -1;
}

CostMatrix euclidean_costs(const std::vector<Location>& locations) {
    const int n = static_cast<int>(locations.size());
    for (const auto& l : locations)
        if (!l.has_coords)
            throw ValidationError("euclidean costs need coordinates for every location");
    CostMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double dx = locations[i].x - locations[j].x;
            const double dy = locations[i].y - locations[j].y;
            m.set(i, j, std::sqrt(dx * dx + dy * dy));
        }
    return m;
}

namespace {

std::string normalize_name(const std::string& raw) {
    std::string out;
    for (char c : raw)
        if (std::isalnum(static_cast<unsigned char>(c)))
            out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return out;
}

// Line-oriented reader that tracks line numbers for error messages.
struct Reader {
    std::istream& in;
    int line_no = 0;
    std::string line;
    bool pushed = false;

    explicit Reader(std::istream& s) : in(s) {}

    bool next() {
        if (pushed) {
            pushed = false;
            return true;
        }
        while (std::getline(in, line)) {
            ++line_no;
            // strip CR and surrounding whitespace
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
                line.pop_back();
            size_t b = line.find_first_not_of(" \t");
            if (b == std::string::npos) continue;   // skip blank lines
            if (b > 0) line.erase(0, b);
            return true;
        }
        return false;
    }

    void push_back() { pushed = true; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("line " + std::to_string(line_no) + ": " + msg);
    }
};

// Splits "KEY : VALUE" / "KEY: VALUE" / "KEY VALUE"; returns false for
// section headers (single token) and data rows.
bool split_keyword(const std::string& line, std::string& key, std::string& value) {
    size_t colon = line.find(':');
    std::string head = colon == std::string::npos ? line : line.substr(0, colon);
    // keyword = leading run of A-Z_ characters covering the whole head
    size_t e = 0;
    while (e < head.size() && (std::isupper(static_cast<unsigned char>(head[e])) || head[e] == '_'))
        ++e;
    size_t rest = head.find_first_not_of(" \t", e);
    if (e == 0) return false;
    if (colon == std::string::npos) {
        if (rest == std::string::npos) return false;   // bare section name
        key = head.substr(0, e);
        value = head.substr(rest);
        return true;
    }
    if (rest != std::string::npos) return false;       // junk between key and ':'
    key = head.substr(0, e);
    size_t vb = line.find_first_not_of(" \t", colon + 1);
    value = vb == std::string::npos ? "" : line.substr(vb);
    return true;
}

double parse_real(const std::string& tok, Reader& r, const char* what) {
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) r.fail(std::string("malformed ") + what + " '" + tok + "'");
        if (!std::isfinite(v)) r.fail(std::string(what) + " is not finite");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        r.fail(std::string("malformed ") + what + " '" + tok + "'");
    }
}

long parse_int(const std::string& tok, Reader& r, const char* what) {
    try {
        size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) r.fail(std::string("malformed ") + what + " '" + tok + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        r.fail(std::string("malformed ") + what + " '" + tok + "'");
    }
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

struct RawNode {
    int file_id;
    double x = 0, y = 0;
    bool has_coords = false;
    double demand = 0;
    bool has_demand = false;
    int order;   // position in the coord/demand listing
};

}  // namespace

CvrpInstance parse_instance(std::istream& in) {
    Reader r(in);

    std::string name, type, edge_weight_type, edge_weight_format;
    int dimension = -1;
    double capacity = -1;
    int vehicles = 0;
    std::optional<double> best_known;

    std::map<int, RawNode> nodes;
    int listing_order = 0;
    std::vector<double> matrix_values;
    bool saw_coords = false, saw_demands = false, saw_matrix = false, saw_eof = false;
    int depot_file_id = -1;

    auto require_dimension = [&](const char* section) {
        if (dimension <= 0)
            r.fail(std::string(section) + " before DIMENSION");
    };

    while (r.next()) {
        if (saw_eof) r.fail("content after EOF");
        std::string key, value;
        if (split_keyword(r.line, key, value)) {
            if (key == "NAME") name = value;
            else if (key == "TYPE") type = value;
            else if (key == "COMMENT") { /* informational */ }
            else if (key == "DIMENSION") {
                dimension = static_cast<int>(parse_int(value, r, "DIMENSION"));
                if (dimension < 2) r.fail("DIMENSION must be at least 2");
            } else if (key == "CAPACITY") {
                capacity = parse_real(value, r, "CAPACITY");
            } else if (key == "VEHICLES") {
                vehicles = static_cast<int>(parse_int(value, r, "VEHICLES"));
                if (vehicles < 1) r.fail("VEHICLES must be positive");
            } else if (key == "BEST_KNOWN") {
                best_known = parse_real(value, r, "BEST_KNOWN");
            } else if (key == "EDGE_WEIGHT_TYPE") {
                edge_weight_type = value;
                if (value != "EUC_2D" && value != "EXPLICIT")
                    r.fail("unsupported EDGE_WEIGHT_TYPE '" + value + "'");
            } else if (key == "EDGE_WEIGHT_FORMAT") {
                edge_weight_format = value;
                if (value != "FULL_MATRIX")
                    r.fail("unsupported EDGE_WEIGHT_FORMAT '" + value + "'");
            } else {
                r.fail("unknown keyword '" + key + "'");
            }
            continue;
        }

        const std::string& section = r.line;
        if (section == "NODE_COORD_SECTION") {
            require_dimension(section.c_str());
            saw_coords = true;
            for (int i = 0; i < dimension; ++i) {
                if (!r.next()) r.fail("unexpected end of NODE_COORD_SECTION");
                auto toks = tokens_of(r.line);
                if (toks.size() != 3) r.fail("expected 'id x y'");
                int id = static_cast<int>(parse_int(toks[0], r, "node id"));
                RawNode& n = nodes[id];
                if (n.has_coords) r.fail("duplicate coordinates for node " + std::to_string(id));
                if (!n.has_demand) { n.file_id = id; n.order = listing_order++; }
                n.x = parse_real(toks[1], r, "x coordinate");
                n.y = parse_real(toks[2], r, "y coordinate");
                n.has_coords = true;
            }
        } else if (section == "DEMAND_SECTION") {
            require_dimension(section.c_str());
            saw_demands = true;
            for (int i = 0; i < dimension; ++i) {
                if (!r.next()) r.fail("unexpected end of DEMAND_SECTION");
                auto toks = tokens_of(r.line);
                if (toks.size() != 2) r.fail("expected 'id demand'");
                int id = static_cast<int>(parse_int(toks[0], r, "node id"));
                RawNode& n = nodes[id];
                if (n.has_demand) r.fail("duplicate demand for node " + std::to_string(id));
                if (!n.has_coords) { n.file_id = id; n.order = listing_order++; }
                n.demand = parse_real(toks[1], r, "demand");
                n.has_demand = true;
            }
        } else if (section == "EDGE_WEIGHT_SECTION") {
            require_dimension(section.c_str());
            saw_matrix = true;
            const long need = static_cast<long>(dimension) * dimension;
            while (static_cast<long>(matrix_values.size()) < need) {
                if (!r.next()) r.fail("unexpected end of EDGE_WEIGHT_SECTION");
                for (const auto& t : tokens_of(r.line))
                    matrix_values.push_back(parse_real(t, r, "edge weight"));
            }
            if (static_cast<long>(matrix_values.size()) != need)
                r.fail("EDGE_WEIGHT_SECTION has too many values");
        } else if (section == "DEPOT_SECTION") {
            while (true) {
                if (!r.next()) r.fail("unexpected end of DEPOT_SECTION");
                auto toks = tokens_of(r.line);
                for (const auto& t : toks) {
                    long id = parse_int(t, r, "depot id");
                    if (id == -1) goto depot_done;
                    if (depot_file_id != -1) r.fail("multiple depots listed");
                    depot_file_id = static_cast<int>(id);
                }
            }
        depot_done:;
        } else if (section == "EOF") {
            saw_eof = true;
        } else {
            r.fail("unrecognized line '" + r.line + "'");
        }
    }

    // --- validation & assembly ---
    if (dimension <= 0) throw ParseError("missing DIMENSION");
    if (capacity < 0) throw ParseError("missing CAPACITY");
    if (capacity <= 0) throw ValidationError("CAPACITY must be positive");
    if (edge_weight_type.empty()) edge_weight_type = "EUC_2D";
    const bool explicit_matrix = edge_weight_type == "EXPLICIT";

    if (explicit_matrix && !saw_matrix)
        throw ParseError("EDGE_WEIGHT_TYPE EXPLICIT requires EDGE_WEIGHT_SECTION");
    if (!explicit_matrix && !saw_coords)
        throw ParseError("EDGE_WEIGHT_TYPE EUC_2D requires NODE_COORD_SECTION");
    if (!saw_demands) throw ParseError("missing DEMAND_SECTION");

    if (static_cast<int>(nodes.size()) != dimension)
        throw ValidationError("node listings cover " + std::to_string(nodes.size()) +
                              " ids but DIMENSION is " + std::to_string(dimension));
    for (const auto& [id, n] : nodes) {
        if (!n.has_demand)
            throw ValidationError("node " + std::to_string(id) + " has no demand entry");
        if (saw_coords && !n.has_coords)
            throw ValidationError("node " + std::to_string(id) + " has no coordinates");
        if (n.demand < 0)
            throw ValidationError("node " + std::to_string(id) + " has negative demand");
    }

    // depot defaults to the lowest file id when no DEPOT_SECTION is present
    if (depot_file_id == -1) depot_file_id = nodes.begin()->first;
    else if (!nodes.count(depot_file_id))
        throw ValidationError("depot id " + std::to_string(depot_file_id) + " is not a node");

    // order: depot first, then remaining nodes in listing order
    std::vector<const RawNode*> ordered;
    ordered.reserve(nodes.size());
    for (const auto& [id, n] : nodes)
        if (id != depot_file_id) ordered.push_back(&n);
    std::sort(ordered.begin(), ordered.end(),
              [](const RawNode* a, const RawNode* b) { return a->order < b->order; });
    ordered.insert(ordered.begin(), &nodes.at(depot_file_id));

    CvrpInstance inst;
    inst.name = name;
    inst.capacity = capacity;
    inst.locations.reserve(ordered.size());
    inst.file_ids.reserve(ordered.size());
    std::map<int, int> file_to_internal;
    for (int i = 0; i < static_cast<int>(ordered.size()); ++i) {
        const RawNode& n = *ordered[i];
        Location loc;
        loc.id = i;
        loc.x = n.x;
        loc.y = n.y;
        loc.has_coords = n.has_coords;
        loc.demand = n.demand;
        inst.locations.push_back(loc);
        inst.file_ids.push_back(n.file_id);
        file_to_internal[n.file_id] = i;
    }

    if (inst.locations[0].demand != 0)
        throw ValidationError("depot demand must be zero");
    for (int i = 1; i < inst.num_locations(); ++i)
        if (inst.locations[i].demand > capacity)
            throw ValidationError("demand of node " + std::to_string(inst.file_ids[i]) +
                                  " exceeds vehicle capacity");

    if (explicit_matrix) {
        const int n = dimension;
        CostMatrix m(n);
        // matrix rows follow ascending file id; remap to internal ids
        std::vector<int> by_file_order;
        for (const auto& [id, node] : nodes) by_file_order.push_back(file_to_internal.at(id));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double v = matrix_values[static_cast<size_t>(a) * n + b];
                int i = by_file_order[a], j = by_file_order[b];
                if (a == b) {
                    if (v != 0) throw ValidationError("cost matrix diagonal must be zero");
                    continue;
                }
                if (v < 0) throw ValidationError("negative cost entry");
                double mirror = matrix_values[static_cast<size_t>(b) * n + a];
                if (v != mirror) throw ValidationError("cost matrix is not symmetric");
                m.set(i, j, v);
            }
        inst.costs = std::move(m);
        inst.explicit_costs = true;
    } else {
        inst.costs = euclidean_costs(inst.locations);
    }

    if (best_known) {
        BestKnown bk;
        bk.distance = *best_known;
        bk.vehicles = 0;
        if (auto reg = bks_lookup(inst.name); reg && std::abs(reg->distance - bk.distance) < 1e-6)
            bk.vehicles = reg->vehicles;
        inst.bks = bk;
    } else {
        inst.bks = bks_lookup(inst.name);
    }

    inst.fleet_from_file = vehicles > 0;
    inst.fleet_size = vehicles > 0 ? vehicles : default_fleet(inst);
    (void)type;
    return inst;
}

CvrpInstance parse_instance(std::istream& in, InstanceFormat expected) {
    CvrpInstance inst = parse_instance(in);
    if (expected == InstanceFormat::explicit_matrix && !inst.explicit_costs)
        throw ValidationError("expected an explicit-matrix instance");
    if (expected == InstanceFormat::coord && inst.explicit_costs)
        throw ValidationError("expected a coordinate instance");
    return inst;
}

CvrpInstance parse_instance(const std::string& text) {
    std::istringstream ss(text);
    return parse_instance(ss);
}

CvrpInstance load_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open instance file '" + path + "'");
    try {
        CvrpInstance inst = parse_instance(f);
        if (inst.name.empty()) {
            // fall back to the file stem for registry lookups
            std::string stem = path;
            if (auto p = stem.find_last_of('/'); p != std::string::npos) stem.erase(0, p + 1);
            if (auto p = stem.find_last_of('.'); p != std::string::npos) stem.erase(p);
            inst.name = stem;
            if (!inst.bks) inst.bks = bks_lookup(inst.name);
            if (!inst.fleet_from_file) inst.fleet_size = default_fleet(inst);
        }
        return inst;
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string to_tsplib(const CvrpInstance& inst) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };

    out << "NAME : " << inst.name << "\n";
    out << "TYPE : CVRP\n";
    out << "DIMENSION : " << inst.num_locations() << "\n";
    const bool euc = inst.has_coords();
    out << "EDGE_WEIGHT_TYPE : " << (euc ? "EUC_2D" : "EXPLICIT") << "\n";
    if (!euc) out << "EDGE_WEIGHT_FORMAT : FULL_MATRIX\n";
    out << "CAPACITY : " << num(inst.capacity) << "\n";
    out << "VEHICLES : " << inst.fleet_size << "\n";
    if (inst.bks) out << "BEST_KNOWN : " << num(inst.bks->distance) << "\n";

    // emit in ascending file-id order so round-trips are stable
    std::vector<int> order(inst.num_locations());
    for (int i = 0; i < inst.num_locations(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return inst.file_ids[a] < inst.file_ids[b]; });

    if (euc) {
        out << "NODE_COORD_SECTION\n";
        for (int i : order)
            out << " " << inst.file_ids[i] << " " << num(inst.locations[i].x)
                << " " << num(inst.locations[i].y) << "\n";
    } else {
        out << "EDGE_WEIGHT_SECTION\n";
        for (int a : order) {
            out << " ";
            for (int b : order) out << num(inst.cost(a, b)) << " ";
            out << "\n";
        }
    }
    out << "DEMAND_SECTION\n";
    for (int i : order)
        out << " " << inst.file_ids[i] << " " << num(inst.locations[i].demand) << "\n";
    out << "DEPOT_SECTION\n " << inst.file_ids[0] << "\n -1\nEOF\n";
    return out.str();
}

NeighborLists nearest_neighbors(const CvrpInstance& inst, int k) {
    if (k < 1) throw ValidationError("neighbor list size must be positive");
    const int n = inst.num_locations();
    const int take = std::min(k, inst.num_customers() - 1);
    std::vector<std::vector<int>> lists(n);
    std::vector<int> others;
    for (int c = 1; c < n; ++c) {
        others.clear();
        for (int o = 1; o < n; ++o)
            if (o != c) others.push_back(o);
        std::sort(others.begin(), others.end(), [&](int a, int b) {
            double ca = inst.cost(c, a), cb = inst.cost(c, b);
            if (ca != cb) return ca < cb;
            return a < b;
        });
        if (take > 0)
            lists[c].assign(others.begin(), others.begin() + take);
    }
    return NeighborLists(k, std::move(lists));
}

std::optional<BestKnown> bks_lookup(const std::string& name) {
    static const std::map<std::string, BestKnown> registry = {
        {"CMT1", {524.61, 5}},  {"CMT2", {835.26, 10}}, {"CMT3", {826.14, 8}},
        {"CMT4", {1028.42, 12}}, {"CMT5", {1291.29, 17}},
        {"CMT11", {1042.12, 7}}, {"CMT12", {819.56, 10}},
    };
    auto it = registry.find(normalize_name(name));
    if (it == registry.end()) return std::nullopt;
    return it->second;
}

int default_fleet(const CvrpInstance& inst) {
    if (inst.bks && inst.bks->vehicles > 0) return inst.bks->vehicles + 1;
    const double load = inst.total_demand();
    return static_cast<int>(std::ceil(load / inst.capacity)) + 1;
}

}  // namespace hqts
