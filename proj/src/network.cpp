#include "cid/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace cid {

bool NetworkInstance::has_stop(StopId id) const {
  return std::any_of(stops.begin(), stops.end(), [id](const Stop& s) { return s.id == id; });
}

std::vector<std::string> validate_network(const NetworkInstance& inst) {
  std::vector<std::string> out;
  auto fail = [&out](const std::string& msg) { out.push_back(msg); };

  const CostParams& c = inst.costs;
  if (!(c.soc_lower >= 0.0 && c.soc_lower < c.soc_upper && c.soc_upper <= 1.0))
    fail("costs: soc bounds must satisfy 0 <= soc_lower < soc_upper <= 1");
  if (c.station_cost_ss <= 0.0 || c.station_cost_ff <= 0.0)
    fail("costs: station costs must be positive");
  if (c.battery_cost_per_kwh <= 0.0) fail("costs: battery_cost_per_kwh must be positive");
  if (c.power_kw_ss <= 0.0 || c.power_kw_ff <= 0.0) fail("costs: charger powers must be positive");

  std::set<StopId> ids;
  for (const Stop& s : inst.stops) {
    if (!ids.insert(s.id).second) fail("stops: duplicate id " + std::to_string(s.id));
  }
  for (StopId s : inst.excluded_stops) {
    if (!ids.count(s)) fail("excluded_stops: unknown stop " + std::to_string(s));
  }

  std::set<LineId> line_ids;
  for (const LineSpec& line : inst.lines) {
    const std::string tag = "line " + std::to_string(line.id);
    if (!line_ids.insert(line.id).second) fail(tag + ": duplicate id");
    if (line.visits.size() < 2) {
      fail(tag + ": needs at least 2 visits");
      continue;
    }
    if (line.fleet_size < 1) fail(tag + ": fleet_size must be >= 1");
    // The first visit is the start terminal: it has no inbound segment.
    if (line.visits.front().segment.mean_kwh != 0.0 || line.visits.front().segment.max_kwh != 0.0)
      fail(tag + ": first visit is not the terminal (it carries an inbound segment)");
    if (line.circular && line.visits.back().stop != line.visits.front().stop)
      fail(tag + ": circular line must end at its terminal");
    if (!line.circular && line.visits.back().stop == line.visits.front().stop)
      fail(tag + ": one-way line must not end at its terminal");
    for (std::size_t i = 0; i < line.visits.size(); ++i) {
      const Visit& v = line.visits[i];
      const std::string vt = tag + " visit " + std::to_string(i);
      if (!ids.count(v.stop)) fail(vt + ": unknown stop " + std::to_string(v.stop));
      if (v.dwell_s <= 0.0) fail(vt + ": dwell_s must be positive");
      if (v.segment.mean_kwh < 0.0) fail(vt + ": mean_kwh must be nonnegative");
      if (v.segment.max_kwh < v.segment.mean_kwh - 1e-12)
        fail(vt + ": max_kwh must be >= mean_kwh");
    }
  }
  return out;
}

std::vector<double> prefix_mean_consumption(const LineSpec& line) {
  std::vector<double> out(line.visits.size(), 0.0);
  for (std::size_t i = 1; i < line.visits.size(); ++i)
    out[i] = out[i - 1] + line.visits[i].segment.mean_kwh;
  return out;
}

EnergyTrajectory mean_trajectory(const ChargingDesign& design, const LineSpec& line,
                                 const CostParams& costs) {
  auto it = design.capacity_kwh.find(line.id);
  if (it == design.capacity_kwh.end())
    throw std::runtime_error("mean_trajectory: design has no capacity for line " +
                             std::to_string(line.id));
  const double cap = it->second;
  const double full = costs.soc_upper * cap;

  EnergyTrajectory traj;
  traj.arrival_kwh.resize(line.visits.size());
  traj.departure_kwh.resize(line.visits.size());
  double level = full;
  traj.arrival_kwh[0] = full;
  traj.departure_kwh[0] = full;
  for (std::size_t i = 1; i < line.visits.size(); ++i) {
    const Visit& v = line.visits[i];
    level -= v.segment.mean_kwh;
    traj.arrival_kwh[i] = level;
    auto placed = design.placement.find(v.stop);
    if (placed != design.placement.end())
      level = std::min(full, level + charge_gain_kwh(costs, placed->second, v.dwell_s));
    traj.departure_kwh[i] = level;
  }
  return traj;
}

double design_cost(const NetworkInstance& inst, const std::map<StopId, ChargerType>& placement,
                   const std::map<LineId, double>& capacity_kwh) {
  double total = 0.0;
  for (const auto& [stop, type] : placement) {
    (void)stop;
    total += inst.costs.station_cost(type);
  }
  for (const LineSpec& line : inst.lines) {
    auto it = capacity_kwh.find(line.id);
    const double z = it == capacity_kwh.end() ? 0.0 : it->second;
    total += inst.costs.battery_cost_per_kwh * line.fleet_size * z;
  }
  return total;
}

}  // namespace cid
