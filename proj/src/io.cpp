#include "cid/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cid {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

ChargerType charger_from_code(const std::string& code) {
  if (code == "SS") return ChargerType::Standard;
  if (code == "FF") return ChargerType::FastFeeding;
  throw std::runtime_error("unknown charger type '" + code + "'");
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

NetworkInstance read_network_json(const std::string& path) {
  const json j = load_json(path);
  NetworkInstance inst;
  for (const json& js : j.at("stops")) {
    Stop s;
    s.id = js.at("id").get<StopId>();
    if (js.contains("x")) s.x = js.at("x").get<double>();
    if (js.contains("y")) s.y = js.at("y").get<double>();
    inst.stops.push_back(s);
  }
  for (const json& jl : j.at("lines")) {
    LineSpec line;
    line.id = jl.at("id").get<LineId>();
    line.fleet_size = jl.at("fleet_size").get<int>();
    line.circular = jl.at("circular").get<bool>();
    for (const json& jv : jl.at("visits")) {
      Visit v;
      v.stop = jv.at("stop").get<StopId>();
      v.segment.mean_kwh = jv.at("mean_kwh").get<double>();
      v.segment.max_kwh = jv.at("max_kwh").get<double>();
      v.dwell_s = jv.at("dwell_s").get<double>();
      line.visits.push_back(v);
    }
    inst.lines.push_back(std::move(line));
  }
  const json& jc = j.at("costs");
  inst.costs.station_cost_ss = jc.at("station_cost").at("SS").get<double>();
  inst.costs.station_cost_ff = jc.at("station_cost").at("FF").get<double>();
  inst.costs.battery_cost_per_kwh = jc.at("battery_cost_per_kwh").get<double>();
  inst.costs.power_kw_ss = jc.at("power_kw").at("SS").get<double>();
  inst.costs.power_kw_ff = jc.at("power_kw").at("FF").get<double>();
  inst.costs.soc_upper = jc.at("soc_upper").get<double>();
  inst.costs.soc_lower = jc.at("soc_lower").get<double>();
  for (const json& je : j.at("excluded_stops")) inst.excluded_stops.insert(je.get<StopId>());
  if (j.contains("metadata")) inst.metadata = j.at("metadata").get<std::string>();
  return inst;
}

void write_network_json(const NetworkInstance& inst, const std::string& path) {
  ordered_json j;
  j["stops"] = ordered_json::array();
  for (const Stop& s : inst.stops) {
    ordered_json js;
    js["id"] = s.id;
    if (s.x) js["x"] = *s.x;
    if (s.y) js["y"] = *s.y;
    j["stops"].push_back(js);
  }
  j["lines"] = ordered_json::array();
  for (const LineSpec& line : inst.lines) {
    ordered_json jl;
    jl["id"] = line.id;
    jl["fleet_size"] = line.fleet_size;
    jl["circular"] = line.circular;
    jl["visits"] = ordered_json::array();
    for (const Visit& v : line.visits) {
      ordered_json jv;
      jv["stop"] = v.stop;
      jv["mean_kwh"] = v.segment.mean_kwh;
      jv["max_kwh"] = v.segment.max_kwh;
      jv["dwell_s"] = v.dwell_s;
      jl["visits"].push_back(jv);
    }
    j["lines"].push_back(jl);
  }
  j["costs"] = {{"station_cost", {{"SS", inst.costs.station_cost_ss}, {"FF", inst.costs.station_cost_ff}}},
                {"battery_cost_per_kwh", inst.costs.battery_cost_per_kwh},
                {"power_kw", {{"SS", inst.costs.power_kw_ss}, {"FF", inst.costs.power_kw_ff}}},
                {"soc_upper", inst.costs.soc_upper},
                {"soc_lower", inst.costs.soc_lower}};
  j["excluded_stops"] = ordered_json::array();
  for (StopId s : inst.excluded_stops) j["excluded_stops"].push_back(s);
  if (!inst.metadata.empty()) j["metadata"] = inst.metadata;
  save_text(path, j.dump(2) + "\n");
}

ChargingDesign read_design_json(const std::string& path) {
  const json j = load_json(path);
  ChargingDesign d;
  for (const auto& [key, value] : j.at("placement").items())
    d.placement[static_cast<StopId>(std::stol(key))] = charger_from_code(value.get<std::string>());
  for (const auto& [key, value] : j.at("capacity_kwh").items())
    d.capacity_kwh[static_cast<LineId>(std::stol(key))] = value.get<double>();
  d.objective_eur = j.at("objective_eur").get<double>();
  d.station_cost_eur = j.at("station_cost_eur").get<double>();
  d.battery_cost_eur = j.at("battery_cost_eur").get<double>();
  return d;
}

void write_design_json(const ChargingDesign& design, const std::string& path) {
  ordered_json j;
  j["placement"] = ordered_json::object();
  for (const auto& [stop, t] : design.placement)
    j["placement"][std::to_string(stop)] = charger_code(t);
  j["capacity_kwh"] = ordered_json::object();
  for (const auto& [line, z] : design.capacity_kwh) j["capacity_kwh"][std::to_string(line)] = z;
  j["objective_eur"] = design.objective_eur;
  j["station_cost_eur"] = design.station_cost_eur;
  j["battery_cost_eur"] = design.battery_cost_eur;
  save_text(path, j.dump(2) + "\n");
}

EnergySampleSet read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "line_id,segment_index,sample_index,kwh")
    throw std::runtime_error(path + ": bad samples header");

  EnergySampleSet set;
  std::map<LineId, std::map<std::size_t, std::map<int, double>>> table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 4 columns");
    table[static_cast<LineId>(std::stol(cells[0]))][std::stoul(cells[1])][std::stoi(cells[2])] =
        std::stod(cells[3]);
  }
  int n = 0;
  for (const auto& [line_id, segs] : table) {
    EnergySampleSet::LineSamples ls;
    ls.line = line_id;
    ls.values.resize(segs.empty() ? 0 : segs.rbegin()->first + 1);
    for (const auto& [seg, draws] : segs) {
      for (const auto& [idx, kwh] : draws) {
        if (idx != static_cast<int>(ls.values[seg].size()))
          throw std::runtime_error(path + ": sample indices of line " + std::to_string(line_id) +
                                   " segment " + std::to_string(seg) + " are not dense");
        ls.values[seg].push_back(kwh);
      }
      n = std::max(n, static_cast<int>(ls.values[seg].size()));
    }
    set.lines.push_back(std::move(ls));
  }
  set.n = n;

  // optional sidecar
  std::ifstream meta(path + ".meta.json");
  if (meta) {
    json j;
    meta >> j;
    if (j.contains("n")) set.n = j.at("n").get<int>();
    if (j.contains("seed")) set.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("dist")) set.dist = j.at("dist").get<std::string>();
  }
  return set;
}

void write_samples_csv(const EnergySampleSet& samples, const std::string& path) {
  std::ostringstream os;
  os << "line_id,segment_index,sample_index,kwh\n";
  for (const auto& ls : samples.lines)
    for (std::size_t seg = 0; seg < ls.values.size(); ++seg)
      for (std::size_t j = 0; j < ls.values[seg].size(); ++j)
        os << ls.line << "," << seg << "," << j << "," << format_number(ls.values[seg][j]) << "\n";
  save_text(path, os.str());

  ordered_json meta;
  meta["n"] = samples.n;
  meta["seed"] = samples.seed;
  meta["dist"] = samples.dist;
  save_text(path + ".meta.json", meta.dump(2) + "\n");
}

void write_simulation_csv(const SimulationReport& report, const std::string& path) {
  std::ostringstream os;
  os << "line_id,feasibility_pct,runs,scenarios\n";
  for (const auto& lr : report.lines)
    os << lr.line << "," << format_number(lr.feasibility_pct) << "," << report.runs << ","
       << report.scenarios_per_run << "\n";
  save_text(path, os.str());
}

void write_lifetime_csv(const LifetimeReport& report, const std::string& path,
                        const std::map<LineId, double>* rel_diff_pct) {
  std::ostringstream os;
  os << "line_id,capacity_kwh,n_cycle,cost_per_cycle_eur";
  if (rel_diff_pct) os << ",rel_cost_per_cycle_pct";
  os << "\n";
  for (const auto& ll : report.lines) {
    os << ll.line << "," << format_number(ll.capacity_kwh) << "," << format_number(ll.n_cycle)
       << "," << format_number(ll.cost_per_cycle_eur);
    if (rel_diff_pct) os << "," << format_number(rel_diff_pct->at(ll.line));
    os << "\n";
  }
  save_text(path, os.str());
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

std::string RunManifest::digest() const {
  ordered_json core;
  core["command"] = command;
  core["args"] = args;
  core["seeds"] = seeds;
  core["version"] = kToolVersion;
  core["input_digests"] = input_digests;
  core["output_digests"] = output_digests;
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(core.dump())));
  return hex;
}

void RunManifest::write(const std::string& path) const {
  ordered_json j;
  j["command"] = command;
  j["args"] = args;
  j["seeds"] = seeds;
  j["version"] = kToolVersion;
  j["input_digests"] = input_digests;
  j["output_digests"] = output_digests;
  j["manifest_digest"] = digest();
  // Timing lives in its own block: everything above is run-to-run stable.
  j["timing"]["wall_time_s"] = wall_time_s;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  j["timing"]["unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  save_text(path, j.dump(2) + "\n");
}

}  // namespace cid
