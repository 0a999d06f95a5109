#include "cid/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cid/rng.hpp"

namespace cid {

namespace {

constexpr double kCycleCoeff = 1331.0;
constexpr double kCycleExponent = 1.825;

std::vector<double> scenario_draws(const LineSpec& line, const SimConfig& cfg, int run,
                                   int scenario) {
  std::vector<double> draws(line.segment_count(), 0.0);
  for (std::size_t seg = 0; seg < line.segment_count(); ++seg) {
    const SegmentStat& stat = line.visits[seg + 1].segment;
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(run),
                        static_cast<std::uint64_t>(scenario),
                        static_cast<std::uint64_t>(line.id), seg));
    draws[seg] = std::max(0.0, cfg.dist.sample(rng, stat.mean_kwh, stat.max_kwh));
  }
  return draws;
}

}  // namespace

TripResult trip_feasible(const ChargingDesign& design, const LineSpec& line,
                         const std::vector<double>& draws_kwh, const CostParams& costs,
                         ChargingMode mode) {
  if (draws_kwh.size() != line.segment_count())
    throw std::invalid_argument("trip_feasible: draw count does not match segments");
  const double cap = design.capacity_kwh.at(line.id);
  const double full = costs.soc_upper * cap;
  const double floor_level = costs.soc_lower * cap;

  double level = full;
  for (std::size_t p = 1; p < line.visits.size(); ++p) {
    const Visit& depart = line.visits[p - 1];
    auto placed = design.placement.find(depart.stop);
    if (placed != design.placement.end()) {
      if (mode == ChargingMode::FullRechargeFF && placed->second == ChargerType::FastFeeding)
        level = full;
      else
        level = std::min(full, level + charge_gain_kwh(costs, placed->second, depart.dwell_s));
    }
    level -= draws_kwh[p - 1];
    if (level < floor_level - kLevelTolKwh) return TripResult{false, p};
  }
  return TripResult{true, std::nullopt};
}

SimulationReport run_monte_carlo(const ChargingDesign& design, const NetworkInstance& inst,
                                 const SimConfig& cfg, bool parallel) {
  if (cfg.runs < 1 || cfg.scenarios_per_run < 1)
    throw std::invalid_argument("run_monte_carlo: counts must be >= 1");
  for (const LineSpec& line : inst.lines)
    if (!design.capacity_kwh.count(line.id))
      throw std::invalid_argument("run_monte_carlo: design misses line " +
                                  std::to_string(line.id));

  const std::size_t n_lines = inst.lines.size();
  const std::size_t n_runs = static_cast<std::size_t>(cfg.runs);
  // feasible counts per (line, run); first-violation counts per (line, visit)
  std::vector<std::vector<long>> feasible(n_lines, std::vector<long>(n_runs, 0));
  std::vector<std::vector<std::vector<long>>> viol(n_lines);
  for (std::size_t li = 0; li < n_lines; ++li)
    viol[li].assign(n_runs, std::vector<long>(inst.lines[li].visits.size(), 0));

  // Runs are independent and write disjoint slots, so the parallel loop and
  // the serial reference produce identical counts.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int run = 0; run < cfg.runs; ++run) {
    for (int scenario = 0; scenario < cfg.scenarios_per_run; ++scenario) {
      for (std::size_t li = 0; li < n_lines; ++li) {
        const LineSpec& line = inst.lines[li];
        const std::vector<double> draws = scenario_draws(line, cfg, run, scenario);
        const TripResult res = trip_feasible(design, line, draws, inst.costs, cfg.mode);
        if (res.feasible) {
          ++feasible[li][static_cast<std::size_t>(run)];
        } else {
          ++viol[li][static_cast<std::size_t>(run)][*res.violation_visit];
        }
      }
    }
  }
#ifndef _OPENMP
  (void)parallel;
#endif

  SimulationReport report;
  report.runs = cfg.runs;
  report.scenarios_per_run = cfg.scenarios_per_run;
  double network_sum = 0.0;
  for (std::size_t li = 0; li < n_lines; ++li) {
    const LineSpec& line = inst.lines[li];
    SimulationReport::LineReport lr;
    lr.line = line.id;
    double rate_sum = 0.0;
    for (std::size_t run = 0; run < n_runs; ++run) {
      const double rate =
          100.0 * static_cast<double>(feasible[li][run]) / cfg.scenarios_per_run;
      lr.run_rates.push_back(rate);
      rate_sum += rate;
      for (std::size_t p = 0; p < line.visits.size(); ++p)
        if (viol[li][run][p] > 0) lr.violations_by_stop[line.visits[p].stop] += viol[li][run][p];
    }
    lr.feasibility_pct = rate_sum / static_cast<double>(n_runs);
    network_sum += lr.feasibility_pct;
    report.lines.push_back(std::move(lr));
  }
  report.network_avg_pct = n_lines == 0 ? 0.0 : network_sum / static_cast<double>(n_lines);
  return report;
}

LifetimeReport battery_lifetime(const ChargingDesign& design, const NetworkInstance& inst) {
  LifetimeReport report;
  report.cycle_coeff = kCycleCoeff;
  report.cycle_exponent = kCycleExponent;
  for (const LineSpec& line : inst.lines) {
    auto it = design.capacity_kwh.find(line.id);
    if (it == design.capacity_kwh.end() || it->second <= 0.0)
      throw std::invalid_argument("battery_lifetime: line " + std::to_string(line.id) +
                                  " has no positive capacity");
    const double z = it->second;
    const EnergyTrajectory traj = mean_trajectory(design, line, inst.costs);

    double sum = 0.0;
    for (std::size_t p = 1; p < line.visits.size(); ++p) {
      const double dod = (z - traj.arrival_kwh[p]) / z;
      const double charge = (z - traj.departure_kwh[p]) / z;
      // Terms at a full battery level are undefined under the power law and
      // are dropped; the finite term still counts.
      if (dod > 1e-9) sum += std::pow(dod, -kCycleExponent);
      if (charge > 1e-9) sum += std::pow(charge, -kCycleExponent);
    }
    LifetimeReport::LineLifetime ll;
    ll.line = line.id;
    ll.capacity_kwh = z;
    ll.n_cycle = kCycleCoeff * sum;
    ll.cost_per_cycle_eur =
        ll.n_cycle > 0.0 ? inst.costs.battery_cost_per_kwh * z / ll.n_cycle : 0.0;
    report.lines.push_back(ll);
  }
  return report;
}

std::map<LineId, double> lifetime_relative_difference(const LifetimeReport& report,
                                                      const LifetimeReport& benchmark,
                                                      double* network_avg_pct) {
  std::map<LineId, double> bench;
  for (const auto& ll : benchmark.lines) bench[ll.line] = ll.cost_per_cycle_eur;
  std::map<LineId, double> out;
  double sum = 0.0;
  for (const auto& ll : report.lines) {
    auto it = bench.find(ll.line);
    if (it == bench.end() || it->second == 0.0)
      throw std::invalid_argument("lifetime_relative_difference: benchmark misses line " +
                                  std::to_string(ll.line));
    const double rel = 100.0 * (ll.cost_per_cycle_eur - it->second) / it->second;
    out[ll.line] = rel;
    sum += rel;
  }
  if (network_avg_pct)
    *network_avg_pct = report.lines.empty() ? 0.0 : sum / static_cast<double>(report.lines.size());
  return out;
}

}  // namespace cid
