#pragma once

#include <cstdint>

#include "instance.hpp"
#include "solution.hpp"

namespace hqts {

class ConstructError : public Error {
public:
    using Error::Error;
};

// Initial solution: one seed customer per vehicle (far from the depot,
// mutually non-adjacent), then remaining customers by descending demand into
// the cheapest insertion point of a route that already holds one of their
// neighbors. Falls back to any route with room; throws ConstructError when
// a customer cannot be placed at all. Deterministic for a given instance.
Solution build_seeded_solution(const CvrpInstance& inst, const NeighborLists& neighbors,
                               int fleet);

// Parallel savings construction: start with one round trip per customer and
// greedily join route ends by descending savings while capacity allows. If
// more than fleet_size routes remain, the cheapest end-joins are forced; a
// solution over the fleet bound is returned as-is (check_feasibility flags
// it). Deterministic.
Solution clarke_wright(const CvrpInstance& inst);

}  // namespace hqts
