#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cid/datagen.hpp"
#include "cid/network.hpp"
#include "cid/simulate.hpp"

namespace cid {

inline constexpr const char* kToolVersion = "0.1.0";

// Network file schema:
//   {"stops":[{"id":0,"x":1.0,"y":2.0}],
//    "lines":[{"id":0,"fleet_size":10,"circular":true,
//              "visits":[{"stop":0,"mean_kwh":0.0,"max_kwh":0.0,"dwell_s":20.0}]}],
//    "costs":{"station_cost":{"SS":20000,"FF":80000},"battery_cost_per_kwh":1750,
//             "power_kw":{"SS":100,"FF":600},"soc_upper":0.8,"soc_lower":0.2},
//    "excluded_stops":[], "metadata": "..."}   (metadata optional)
NetworkInstance read_network_json(const std::string& path);
void write_network_json(const NetworkInstance& inst, const std::string& path);

// Design file schema: {"placement":{"stop":"SS"|"FF"}, "capacity_kwh":{"line":v},
// "objective_eur":v, "station_cost_eur":v, "battery_cost_eur":v}
ChargingDesign read_design_json(const std::string& path);
void write_design_json(const ChargingDesign& design, const std::string& path);

// Sample CSV columns: line_id,segment_index,sample_index,kwh.
// A JSON sidecar at <path>.meta.json carries {n, seed, dist}.
EnergySampleSet read_samples_csv(const std::string& path);
void write_samples_csv(const EnergySampleSet& samples, const std::string& path);

// Report CSV schemas (headers are pinned by golden tests):
//   simulation: line_id,feasibility_pct,runs,scenarios
//   lifetime:   line_id,capacity_kwh,n_cycle,cost_per_cycle_eur[,rel_cost_per_cycle_pct]
void write_simulation_csv(const SimulationReport& report, const std::string& path);
void write_lifetime_csv(const LifetimeReport& report, const std::string& path,
                        const std::map<LineId, double>* rel_diff_pct = nullptr);

std::uint64_t fnv1a64(const std::string& bytes);
std::string file_digest(const std::string& path);

// Run provenance. The digest covers everything except the timing block, so
// reruns with identical inputs produce identical digests.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> input_digests;
  std::map<std::string, std::string> output_digests;
  double wall_time_s = 0.0;

  std::string digest() const;
  void write(const std::string& path) const;
};

std::string format_number(double v);  // stable %.10g formatting for CSV cells

}  // namespace cid
