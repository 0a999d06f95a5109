#pragma once

#include <string>
#include <vector>

#include "cid/datagen.hpp"
#include "cid/milp.hpp"
#include "cid/network.hpp"

namespace cid {

enum class PrefixBudgetPolicy { ConstantPerPrefix, LinearInPrefix };

struct BoUConfig {
  double gamma = 0.0;  // deviation budget per prefix
  PrefixBudgetPolicy gamma_policy = PrefixBudgetPolicy::ConstantPerPrefix;
};

struct DrccConfig {
  double theta = 0.0;    // displacement budget, kWh per sample
  double epsilon = 0.1;  // admissible violation probability
  double big_m = 25.0;
  const EnergySampleSet* samples = nullptr;
  PrefixBudgetPolicy theta_policy = PrefixBudgetPolicy::ConstantPerPrefix;
};

// Variable naming contract shared by the builders and extract_design:
//   x_s{stop}_{SS|FF}   placement binaries
//   z_k{line}           per-line battery capacity (kWh)
//   u_/v_, q_/r_/y_     per-prefix robust / chance-constraint blocks
//
// All three models share the cost objective and the per-stop one-type row.
// Energy constraints are cumulative from each line's terminal; the terminal
// visit itself contributes neither consumption nor charging (buses leave it
// full, so a charger there cannot add energy for that line).

// Deterministic model priced at mean consumption.
MilpModel build_cid(const NetworkInstance& inst);

// Robust counterpart with a per-prefix deviation budget. The worst-case
// deviation of each prefix enters the charge-cap row as a constant and the
// minimum-level row through a per-prefix dual pair (u, v).
MilpModel build_bou(const NetworkInstance& inst, const BoUConfig& cfg);

// Worst cumulative deviation of one prefix: continuous knapsack over the
// per-segment deviations with total weight at most `budget`, each segment
// contributing a fraction in [0,1]. Solved greedily; equals the LP optimum.
double worst_case_prefix_deviation(std::vector<double> devs, double budget);

// Data-driven chance-constrained counterpart. Each prefix carries a block of
// dual variables (q, r), violation flags y capped at floor(epsilon*N), and
// big-M rows tying sample-path slacks to q - r. Appends to `warnings` (when
// given) if big_m is not provably large enough for the instance.
MilpModel build_drcc(const NetworkInstance& inst, const DrccConfig& cfg,
                     std::vector<std::string>* warnings = nullptr);

// Reads a solved model back into a design: binaries rounded at 0.5, the
// objective recomputed from the rounded placement and raw capacities and
// checked against the solver's objective (1e-5 relative).
ChargingDesign extract_design(const NetworkInstance& inst, const MilpModel& model,
                              const SolveResult& result);

// Capacity upper bound used by every builder so all LPs are bounded:
// 2 * (worst-case total line consumption) / usable fraction.
double capacity_upper_bound(const NetworkInstance& inst, const LineSpec& line,
                            const EnergySampleSet* samples = nullptr);

double prefix_budget(PrefixBudgetPolicy policy, double base, std::size_t prefix_index);

}  // namespace cid
