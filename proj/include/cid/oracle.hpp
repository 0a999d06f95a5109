#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cid/builders.hpp"
#include "cid/datagen.hpp"
#include "cid/network.hpp"

namespace cid {

// Brute-force reference implementations built directly from the model
// definitions, used to certify the MILP formulations on small instances.
// Enumeration parallelizes over placements; the reduction uses a total order
// (cost, station count, placement index) so serial and parallel runs pick
// the same optimum.

enum class ExecMode { Serial, Parallel };

// All maps stop -> {none, SS, FF} over a fixed candidate set, in
// deterministic lexicographic order (digit 0 = none, 1 = SS, 2 = FF; the
// first candidate stop is the least significant digit).
class PlacementEnum {
 public:
  explicit PlacementEnum(std::vector<StopId> candidates);

  std::size_t size() const { return count_; }
  const std::vector<StopId>& candidates() const { return candidates_; }
  std::map<StopId, ChargerType> decode(std::size_t index) const;

  // Charger candidates of an instance: stops reachable after a terminal
  // departure and not excluded.
  static std::vector<StopId> candidate_stops(const NetworkInstance& inst);

 private:
  std::vector<StopId> candidates_;
  std::size_t count_;
};

enum class CapacityMode { Mean, BoU };

struct CapacityResult {
  std::map<LineId, double> z_kwh;
  std::vector<LineId> infeasible_lines;  // lines whose charge cap is violated
  bool feasible() const { return infeasible_lines.empty(); }
};

// Smallest feasible capacity per line for a fixed placement: the binding
// prefix of the cumulative energy requirement, divided by the usable battery
// fraction. BoU mode adds each prefix's worst-case deviation. A placement
// that violates a charge-cap row is reported infeasible for that line.
CapacityResult min_capacity_given_placement(const NetworkInstance& inst,
                                            const std::map<StopId, ChargerType>& placement,
                                            CapacityMode mode, const BoUConfig& bou = {});

// Direct evaluation of the chance-constrained feasibility of a design: per
// prefix, at most floor(epsilon*N) samples may strictly violate their path
// constraints and the (floor(epsilon*N)+1) smallest distances to the unsafe
// set must sum to at least theta*N.
bool drcc_feasible(const NetworkInstance& inst, const std::map<StopId, ChargerType>& placement,
                   const std::map<LineId, double>& z_kwh, const EnergySampleSet& samples,
                   double theta, double epsilon,
                   PrefixBudgetPolicy theta_policy = PrefixBudgetPolicy::ConstantPerPrefix);

// Exact optima by full placement enumeration. Throw when the candidate set
// is too large (8 stops for mean/BoU, 6 for the chance-constrained model).
ChargingDesign enumerate_optimal_cid(const NetworkInstance& inst,
                                     ExecMode exec = ExecMode::Parallel);
ChargingDesign enumerate_optimal_bou(const NetworkInstance& inst, const BoUConfig& cfg,
                                     ExecMode exec = ExecMode::Parallel);
ChargingDesign enumerate_optimal_drcc(const NetworkInstance& inst, const DrccConfig& cfg,
                                      ExecMode exec = ExecMode::Parallel);

// Smallest z (within 1e-6 kWh) making one line drcc-feasible under the
// placement, or nullopt when no capacity works. Monotone bisection.
std::optional<double> min_drcc_capacity_for_line(const NetworkInstance& inst,
                                                 const LineSpec& line,
                                                 const std::map<StopId, ChargerType>& placement,
                                                 const DrccConfig& cfg);

}  // namespace cid
