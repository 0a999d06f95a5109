#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cid/datagen.hpp"
#include "cid/network.hpp"

namespace cid {

enum class ChargingMode { LinearCapped, FullRechargeFF };

struct SimConfig {
  DistSpec dist;
  int scenarios_per_run = 100;
  int runs = 100;
  std::uint64_t seed = 0;
  ChargingMode mode = ChargingMode::LinearCapped;
};

struct TripResult {
  bool feasible = true;
  std::optional<std::size_t> violation_visit;  // first visit whose arrival is too low
};

struct SimulationReport {
  struct LineReport {
    LineId line = 0;
    double feasibility_pct = 0.0;
    std::vector<double> run_rates;             // per-run rates, for dispersion
    std::map<StopId, long> violations_by_stop;  // first-violation counts
  };
  std::vector<LineReport> lines;
  double network_avg_pct = 0.0;  // mean of the line rates
  int runs = 0;
  int scenarios_per_run = 0;
};

struct LifetimeReport {
  struct LineLifetime {
    LineId line = 0;
    double capacity_kwh = 0.0;
    double n_cycle = 0.0;
    double cost_per_cycle_eur = 0.0;
  };
  std::vector<LineLifetime> lines;
  double cycle_coeff = 0.0;     // g1 of the cycle-life fit
  double cycle_exponent = 0.0;  // g2 of the cycle-life fit
};

// One trip under realized per-segment draws: start full, charge at a stop
// before departing toward the next one (capped at the full level), subtract
// the draw, fail at the first arrival below the minimum level.
TripResult trip_feasible(const ChargingDesign& design, const LineSpec& line,
                         const std::vector<double>& draws_kwh, const CostParams& costs,
                         ChargingMode mode = ChargingMode::LinearCapped);

// Seeded Monte Carlo feasibility of a design. Every (run, scenario, line,
// segment) derives its own stream from the master seed, so results are
// identical for any thread count; the parallel path splits over runs and
// merges integer counts. ExecMode::Serial is the reference implementation.
SimulationReport run_monte_carlo(const ChargingDesign& design, const NetworkInstance& inst,
                                 const SimConfig& cfg, bool parallel = true);

// Charge-discharge cycle analysis on the mean-consumption trajectory:
// n_cycle = g1 * sum over stops of (DOD^-g2 + charge^-g2) with g1 = 1331 and
// g2 = 1.825; cost per cycle = battery unit cost * capacity / n_cycle.
LifetimeReport battery_lifetime(const ChargingDesign& design, const NetworkInstance& inst);

// Per-line relative cost-per-cycle difference against a benchmark design
// (percent), plus the network average, keyed by line id.
std::map<LineId, double> lifetime_relative_difference(const LifetimeReport& report,
                                                      const LifetimeReport& benchmark,
                                                      double* network_avg_pct = nullptr);

}  // namespace cid
