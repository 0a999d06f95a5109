#pragma once

#include <optional>
#include <string>

#include "cid/milp.hpp"

namespace cid {

struct BundledLimits {
  int max_binaries = 24;
  double time_s = 600.0;
};

// Exact optimum by depth-first enumeration of binary assignments with
// LP-relaxation bound pruning. Intended for oracle-grade verification of
// small models; larger models go through the external bridge. Throws
// std::invalid_argument when the model has more binaries than the limit
// allows. On time expiry the best incumbent is returned with TimeLimit
// status.
SolveResult solve_bundled(const MilpModel& model, const BundledLimits& limits = {});

}  // namespace cid
