#pragma once

#include <string>
#include <vector>

#include "qubo.hpp"

namespace hqts {

struct Sample;

// Posts the QUBO to an HTTP sampler endpoint (e.g. http://host:port/sample)
// and returns its samples sorted by (energy, assignment). Every reported
// energy is recomputed locally; any disagreement beyond 1e-6 rejects the
// whole response. Connection trouble, timeouts, non-200 statuses and
// malformed bodies all raise Error.
std::vector<Sample> remote_sample(const Qubo& q, const std::string& endpoint, int num_reads,
                                  double timeout_seconds);

}  // namespace hqts
