#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cid {

using StopId = std::int32_t;
using LineId = std::int32_t;

enum class ChargerType { Standard, FastFeeding };

inline const char* charger_code(ChargerType t) {
  return t == ChargerType::Standard ? "SS" : "FF";
}

struct Stop {
  StopId id = 0;
  std::optional<double> x;
  std::optional<double> y;
};

// Energy statistics of the segment that ends at a visit: mean consumption and
// the upper endpoint of the deviation range. The terminal visit of a line has
// no inbound segment and carries zeros.
struct SegmentStat {
  double mean_kwh = 0.0;
  double max_kwh = 0.0;      // upper endpoint: mean plus the maximum deviation
  double distance_km = 0.0;  // provenance of the mean; informational

  double deviation_kwh() const { return max_kwh - mean_kwh; }
};

struct Visit {
  StopId stop = 0;
  SegmentStat segment;
  double dwell_s = 0.0;
};

struct LineSpec {
  LineId id = 0;
  std::vector<Visit> visits;  // visits[0] is the line's start terminal
  int fleet_size = 0;
  bool circular = false;

  std::size_t segment_count() const { return visits.empty() ? 0 : visits.size() - 1; }
};

struct CostParams {
  double station_cost_ss = 0.0;  // euro per installed standard station
  double station_cost_ff = 0.0;  // euro per installed fast-feeding station
  double battery_cost_per_kwh = 0.0;
  double power_kw_ss = 0.0;
  double power_kw_ff = 0.0;
  double soc_upper = 0.8;  // usable upper fraction of battery capacity
  double soc_lower = 0.2;  // minimum fraction that must remain

  double station_cost(ChargerType t) const {
    return t == ChargerType::Standard ? station_cost_ss : station_cost_ff;
  }
  double power_kw(ChargerType t) const {
    return t == ChargerType::Standard ? power_kw_ss : power_kw_ff;
  }
  double usable_fraction() const { return soc_upper - soc_lower; }
};

struct NetworkInstance {
  std::vector<Stop> stops;
  std::vector<LineSpec> lines;
  CostParams costs;
  std::set<StopId> excluded_stops;  // no charger may be sited here
  std::string metadata;

  bool has_stop(StopId id) const;
};

struct ChargingDesign {
  std::map<StopId, ChargerType> placement;
  std::map<LineId, double> capacity_kwh;
  double objective_eur = 0.0;
  double station_cost_eur = 0.0;
  double battery_cost_eur = 0.0;
};

// Arrival/departure energy levels per visit of one line, evaluated at mean
// consumption. Arrival at the terminal is defined as the departure level.
struct EnergyTrajectory {
  std::vector<double> arrival_kwh;
  std::vector<double> departure_kwh;
};

constexpr double kLevelTolKwh = 1e-6;

// Energy gained from a charger of type t over a dwell, in kWh (power is kW,
// dwell is seconds).
inline double charge_gain_kwh(const CostParams& costs, ChargerType t, double dwell_s) {
  return costs.power_kw(t) * dwell_s / 3600.0;
}

// Checks every structural invariant of the instance. Returns a description
// per violation; an empty list means every model builder accepts the
// instance.
std::vector<std::string> validate_network(const NetworkInstance& inst);

// Cumulative mean consumption from the terminal through each visit;
// entry 0 (the terminal) is zero.
std::vector<double> prefix_mean_consumption(const LineSpec& line);

// Energy levels along one line under mean consumption for a given design.
// Departure at the terminal is soc_upper * capacity; charging at a stop is
// capped at that level. Throws if the design has no capacity for the line.
EnergyTrajectory mean_trajectory(const ChargingDesign& design, const LineSpec& line,
                                 const CostParams& costs);

// Station + battery cost of a design evaluated against an instance.
double design_cost(const NetworkInstance& inst, const std::map<StopId, ChargerType>& placement,
                   const std::map<LineId, double>& capacity_kwh);

}  // namespace cid
