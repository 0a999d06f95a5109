#pragma once

#include <vector>

#include "cid/milp.hpp"

namespace cid {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;  // structural variables only
  double objective = 0.0;
};

// Exact dense two-phase simplex on the model's LP relaxation (binaries become
// continuous within their bounds). Bland's rule throughout, so the iteration
// cannot cycle. Bound overrides, when given, replace the per-variable bounds;
// branch-and-bound uses them to fix binaries.
LpResult solve_lp(const MilpModel& model, const std::vector<double>* lb_override = nullptr,
                  const std::vector<double>* ub_override = nullptr);

constexpr double kLpTol = 1e-9;

}  // namespace cid
