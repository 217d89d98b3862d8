#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqts {

// Error hierarchy shared across the library. ParseError covers malformed
// input text, ValidationError covers well-formed but inconsistent data.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

struct Location {
    int id = 0;          // dense internal id, depot is always 0
    double x = 0.0;
    double y = 0.0;
    bool has_coords = false;
    double demand = 0.0;
};

// Symmetric cost matrix with zero diagonal. set() mirrors automatically.
class CostMatrix {
public:
    CostMatrix() = default;
    explicit CostMatrix(int n) : n_(n), entries_(static_cast<size_t>(n) * n, 0.0) {}

    int size() const { return n_; }
    double at(int i, int j) const { return entries_[static_cast<size_t>(i) * n_ + j]; }
    void set(int i, int j, double v) {
        entries_[static_cast<size_t>(i) * n_ + j] = v;
        entries_[static_cast<size_t>(j) * n_ + i] = v;
    }
    double max_entry() const;

private:
    int n_ = 0;
    std::vector<double> entries_;
};

struct BestKnown {
    double distance = 0.0;
    int vehicles = 0;   // 0 = unknown
};

struct CvrpInstance {
    std::string name;
    std::vector<Location> locations;   // [0] is the depot
    CostMatrix costs;
    double capacity = 0.0;
    int fleet_size = 0;                // vehicle bound K
    bool fleet_from_file = false;      // K came from a VEHICLES keyword
    bool explicit_costs = false;       // matrix came from EDGE_WEIGHT_SECTION
    std::optional<BestKnown> bks;
    std::vector<int> file_ids;         // internal id -> id used in the source file

    int num_locations() const { return static_cast<int>(locations.size()); }
    int num_customers() const { return num_locations() - 1; }
    double demand(int i) const { return locations[i].demand; }
    double cost(int i, int j) const { return costs.at(i, j); }
    double total_demand() const;
    bool has_coords() const;
    int internal_id(int file_id) const;   // -1 if unknown
};

enum class InstanceFormat { coord, explicit_matrix };

// Parses the TSPLIB-style subset grammar. The overload taking a format checks
// that the file's EDGE_WEIGHT_TYPE matches the expectation.
CvrpInstance parse_instance(std::istream& in);
CvrpInstance parse_instance(std::istream& in, InstanceFormat expected);
CvrpInstance parse_instance(const std::string& text);
CvrpInstance load_instance(const std::string& path);

// Serializes back to the same grammar; parse(to_tsplib(x)) reproduces x.
std::string to_tsplib(const CvrpInstance& inst);

// Full-precision Euclidean distances; requires coordinates everywhere.
CostMatrix euclidean_costs(const std::vector<Location>& locations);

// Per-customer nearest-neighbor lists (customers only, ascending cost,
// ties by id). of(c) for a customer id in [1, n); the depot has no list.
class NeighborLists {
public:
    NeighborLists() = default;
    NeighborLists(int k, std::vector<std::vector<int>> lists)
        : k_(k), lists_(std::move(lists)) {}

    int k() const { return k_; }
    const std::vector<int>& of(int customer) const { return lists_[customer]; }

private:
    int k_ = 0;
    std::vector<std::vector<int>> lists_;   // index 0 unused
};

NeighborLists nearest_neighbors(const CvrpInstance& inst, int k);

// Registry of published best-known results, keyed by normalized name.
std::optional<BestKnown> bks_lookup(const std::string& name);

// Vehicle bound used when the file does not state one.
int default_fleet(const CvrpInstance& inst);

}  // namespace hqts
