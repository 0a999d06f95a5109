#include "cid/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cid/rng.hpp"

namespace cid {

namespace {

double realize_anchor(const DistAnchor& a, double mean_kwh, double max_kwh, double scale) {
  return a.realize(mean_kwh, max_kwh) * scale;
}

std::string anchor_str(const DistAnchor& a) {
  std::string base;
  switch (a.base) {
    case DistAnchor::Base::Zero: return "0";
    case DistAnchor::Base::Mean: base = "mubar"; break;
    case DistAnchor::Base::Max: base = "muhat"; break;
  }
  if (a.coef == 1.0) return base;
  std::ostringstream os;
  os << a.coef << "*" << base;
  return os.str();
}

DistAnchor parse_anchor(const std::string& text) {
  DistAnchor a;
  std::string body = text;
  auto star = text.find('*');
  if (star != std::string::npos) {
    a.coef = std::stod(text.substr(0, star));
    body = text.substr(star + 1);
  }
  if (body == "0") {
    a.base = DistAnchor::Base::Zero;
    a.coef = 1.0;
  } else if (body == "mubar" || body == "mean") {
    a.base = DistAnchor::Base::Mean;
  } else if (body == "muhat" || body == "max") {
    a.base = DistAnchor::Base::Max;
  } else {
    throw std::invalid_argument("dist: unknown anchor '" + text + "'");
  }
  return a;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

double DistSpec::sample(Rng& rng, double mean_kwh, double max_kwh) const {
  if (kind == Kind::Degenerate) return mean_kwh;
  const double lo_v = realize_anchor(lo, mean_kwh, max_kwh, range_scale);
  const double hi_v = realize_anchor(hi, mean_kwh, max_kwh, range_scale);
  switch (kind) {
    case Kind::UniformLowHigh:
      return rng.uniform(lo_v, hi_v);
    case Kind::TriSymmetric:
      return rng.triangular(lo_v, hi_v, 0.5 * (lo_v + hi_v));
    case Kind::TriRight:
      return rng.triangular(lo_v, hi_v, lo_v);
    case Kind::TriLeft:
      return rng.triangular(lo_v, hi_v, hi_v);
    case Kind::TriCustom:
      return rng.triangular(lo_v, hi_v, realize_anchor(mode, mean_kwh, max_kwh, range_scale));
    case Kind::Degenerate:
      break;
  }
  return mean_kwh;
}

std::string DistSpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Degenerate: os << "degenerate"; break;
    case Kind::UniformLowHigh:
      os << "uniform:" << anchor_str(lo) << "," << anchor_str(hi);
      break;
    case Kind::TriSymmetric:
      os << "tri:" << anchor_str(lo) << "," << anchor_str(hi) << ",mid";
      break;
    case Kind::TriRight:
      os << "tri:" << anchor_str(lo) << "," << anchor_str(hi) << "," << anchor_str(lo);
      break;
    case Kind::TriLeft:
      os << "tri:" << anchor_str(lo) << "," << anchor_str(hi) << "," << anchor_str(hi);
      break;
    case Kind::TriCustom:
      os << "tri:" << anchor_str(lo) << "," << anchor_str(hi) << "," << anchor_str(mode);
      break;
  }
  if (range_scale != 1.0) os << ";scale=" << range_scale;
  return os.str();
}

DistSpec DistSpec::parse(const std::string& text) {
  DistSpec d;
  std::vector<std::string> parts = split(text, ';');
  if (parts.empty() || parts[0].empty()) throw std::invalid_argument("dist: empty specification");
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p.rfind("scale=", 0) == 0) {
      d.range_scale = std::stod(p.substr(6));
      if (d.range_scale <= 0.0) throw std::invalid_argument("dist: scale must be positive");
    } else if (!p.empty()) {
      throw std::invalid_argument("dist: unknown option '" + p + "'");
    }
  }

  const std::string& head = parts[0];
  if (head == "degenerate") {
    d.kind = Kind::Degenerate;
    return d;
  }
  auto colon = head.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("dist: expected 'kind:args'");
  const std::string kind = head.substr(0, colon);
  std::vector<std::string> args = split(head.substr(colon + 1), ',');
  if (kind == "uniform") {
    if (args.size() != 2) throw std::invalid_argument("dist: uniform needs two anchors");
    d.kind = Kind::UniformLowHigh;
    d.lo = parse_anchor(args[0]);
    d.hi = parse_anchor(args[1]);
  } else if (kind == "tri") {
    if (args.size() != 3) throw std::invalid_argument("dist: tri needs three anchors");
    d.lo = parse_anchor(args[0]);
    d.hi = parse_anchor(args[1]);
    if (args[2] == "mid") {
      d.kind = Kind::TriSymmetric;
    } else {
      d.mode = parse_anchor(args[2]);
      if (d.mode.base == d.lo.base && d.mode.coef == d.lo.coef) {
        d.kind = Kind::TriRight;
      } else if (d.mode.base == d.hi.base && d.mode.coef == d.hi.coef) {
        d.kind = Kind::TriLeft;
      } else {
        d.kind = Kind::TriCustom;
      }
    }
  } else {
    throw std::invalid_argument("dist: unknown kind '" + kind + "'");
  }
  return d;
}

DistSpec DistSpec::degenerate() { return DistSpec{}; }

DistSpec DistSpec::uniform_mean_to_max() {
  DistSpec d;
  d.kind = Kind::UniformLowHigh;
  d.lo = DistAnchor{DistAnchor::Base::Mean, 1.0};
  d.hi = DistAnchor{DistAnchor::Base::Max, 1.0};
  return d;
}

DistSpec DistSpec::uniform_zero_to_max() {
  DistSpec d;
  d.kind = Kind::UniformLowHigh;
  d.lo = DistAnchor{DistAnchor::Base::Zero, 1.0};
  d.hi = DistAnchor{DistAnchor::Base::Max, 1.0};
  return d;
}

DistSpec DistSpec::tri(Kind kind) {
  DistSpec d;
  d.kind = kind;
  d.lo = DistAnchor{DistAnchor::Base::Zero, 1.0};
  d.hi = DistAnchor{DistAnchor::Base::Max, 1.0};
  return d;
}

const EnergySampleSet::LineSamples* EnergySampleSet::find(LineId id) const {
  for (const LineSamples& ls : lines)
    if (ls.line == id) return &ls;
  return nullptr;
}

CostParams default_cost_params() {
  CostParams c;
  c.station_cost_ss = 20000.0;
  c.station_cost_ff = 80000.0;
  c.battery_cost_per_kwh = 1750.0;
  c.power_kw_ss = 100.0;
  c.power_kw_ff = 600.0;
  c.soc_upper = 0.8;
  c.soc_lower = 0.2;
  return c;
}

namespace {

constexpr int kGridSide = 10;
constexpr double kKwhPerKm = 1.3;

double node_x(int node) { return static_cast<double>(node % kGridSide); }
double node_y(int node) { return static_cast<double>(node / kGridSide); }

double node_dist_km(int a, int b) {
  const double dx = node_x(a) - node_x(b);
  const double dy = node_y(a) - node_y(b);
  return std::sqrt(dx * dx + dy * dy);
}

SegmentStat make_segment(Rng& rng, double dist_km) {
  SegmentStat s;
  s.distance_km = dist_km;
  s.mean_kwh = kKwhPerKm * dist_km;
  const double w = rng.uniform01();  // deviation fraction, up to the mean itself
  s.max_kwh = s.mean_kwh * (1.0 + w);
  return s;
}

double draw_dwell(Rng& rng) { return rng.normal_truncated(20.0, 2.0, 5.0); }

}  // namespace

NetworkInstance generate_grid_network(int n_lines, int stops_per_line, std::uint64_t seed,
                                      const CostParams& costs) {
  const int n_nodes = kGridSide * kGridSide;
  if (n_lines < 1) throw std::invalid_argument("generate_grid_network: n_lines must be >= 1");
  if (stops_per_line < 2)
    throw std::invalid_argument("generate_grid_network: stops_per_line must be >= 2");
  if (stops_per_line > n_nodes)
    throw std::invalid_argument("generate_grid_network: stops_per_line exceeds grid capacity");

  NetworkInstance inst;
  inst.costs = costs;
  inst.metadata = "grid 10x10";
  inst.stops.reserve(n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    inst.stops.push_back(Stop{static_cast<StopId>(i), node_x(i), node_y(i)});

  Rng rng(derive_seed(seed, 0x67726964));  // one stream drives the whole instance
  const int depot = static_cast<int>(rng.next_u64() % n_nodes);

  for (int k = 0; k < n_lines; ++k) {
    // Draw the line's stops without replacement, then order them by a seeded
    // proximity walk from the depot so routes stay local.
    std::vector<int> pool;
    pool.reserve(n_nodes - 1);
    for (int i = 0; i < n_nodes; ++i)
      if (i != depot) pool.push_back(i);
    for (int i = static_cast<int>(pool.size()) - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
      std::swap(pool[i], pool[j]);
    }
    std::vector<int> chosen(pool.begin(), pool.begin() + (stops_per_line - 1));

    std::vector<int> route;
    route.reserve(chosen.size());
    int current = depot;
    std::vector<int> remaining = chosen;
    while (!remaining.empty()) {
      std::vector<double> w(remaining.size());
      double total = 0.0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        const double d = node_dist_km(current, remaining[i]);
        w[i] = 1.0 / (1.0 + d * d);
        total += w[i];
      }
      double pick = rng.uniform01() * total;
      std::size_t idx = 0;
      for (; idx + 1 < remaining.size(); ++idx) {
        if (pick < w[idx]) break;
        pick -= w[idx];
      }
      current = remaining[idx];
      route.push_back(current);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(idx));
    }

    LineSpec line;
    line.id = static_cast<LineId>(k);
    line.fleet_size = 10;
    line.circular = true;
    line.visits.push_back(Visit{static_cast<StopId>(depot), SegmentStat{}, draw_dwell(rng)});
    int prev = depot;
    for (int node : route) {
      Visit v;
      v.stop = static_cast<StopId>(node);
      v.segment = make_segment(rng, node_dist_km(prev, node));
      v.dwell_s = draw_dwell(rng);
      line.visits.push_back(v);
      prev = node;
    }
    // back to the shared depot
    Visit back;
    back.stop = static_cast<StopId>(depot);
    back.segment = make_segment(rng, node_dist_km(prev, depot));
    back.dwell_s = draw_dwell(rng);
    line.visits.push_back(back);
    inst.lines.push_back(std::move(line));
  }
  return inst;
}

EnergySampleSet sample_energy(const NetworkInstance& inst, const DistSpec& dist, int n,
                              std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_energy: n must be >= 1");
  EnergySampleSet out;
  out.n = n;
  out.seed = seed;
  out.dist = dist.to_string();
  for (const LineSpec& line : inst.lines) {
    EnergySampleSet::LineSamples ls;
    ls.line = line.id;
    ls.values.resize(line.segment_count());
    for (std::size_t seg = 0; seg < line.segment_count(); ++seg) {
      const SegmentStat& stat = line.visits[seg + 1].segment;
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(line.id), seg, 0x73616d70));
      ls.values[seg].resize(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        const double v = dist.sample(rng, stat.mean_kwh, stat.max_kwh);
        ls.values[seg][static_cast<std::size_t>(j)] = std::max(0.0, v);
      }
    }
    out.lines.push_back(std::move(ls));
  }
  return out;
}

NetworkInstance rotterdam_fixture() {
  NetworkInstance inst;
  inst.costs = default_cost_params();
  inst.metadata =
      "surrogate of bus lines 33/38/40 with a shared start terminal; "
      "distances are synthetic, not measured geography";

  // Stop layout: 0 is the shared terminal. Line 33 uses 1..11 plus the three
  // stops 12..14 it shares with line 40 (serving them in both directions).
  // Line 38 uses 15..24. Line 40 uses 12..14 plus 25..48, ending at 48.
  for (StopId s = 0; s <= 48; ++s) inst.stops.push_back(Stop{s, {}, {}});

  Rng rng(derive_seed(334000, 0x666978));

  auto build_line = [&rng](LineId id, const std::vector<StopId>& seq, bool circular,
                           double min_km, double max_km) {
    LineSpec line;
    line.id = id;
    line.fleet_size = 10;
    line.circular = circular;
    line.visits.push_back(Visit{seq.front(), SegmentStat{}, draw_dwell(rng)});
    for (std::size_t i = 1; i < seq.size(); ++i) {
      Visit v;
      v.stop = seq[i];
      v.segment = make_segment(rng, rng.uniform(min_km, max_km));
      v.dwell_s = draw_dwell(rng);
      line.visits.push_back(v);
    }
    return line;
  };

  // Circular line through a peripheral area; the shared stops 12..14 appear
  // on both the outbound and the return leg.
  std::vector<StopId> seq33 = {0, 1, 2, 3, 4, 5, 12, 13, 14, 6, 7, 8, 14, 13, 12, 9, 10, 11, 0};
  inst.lines.push_back(build_line(33, seq33, true, 0.3, 0.9));

  // Short circular intra-city line.
  std::vector<StopId> seq38 = {0, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 0};
  inst.lines.push_back(build_line(38, seq38, true, 0.25, 0.6));

  // One-way intercity line with distinct terminals at each end.
  std::vector<StopId> seq40 = {0,  25, 26, 27, 12, 13, 14, 28, 29, 30, 31, 32, 33, 34,
                               35, 36, 37, 38, 39, 40, 41, 42, 43, 44, 45, 46, 47, 48};
  inst.lines.push_back(build_line(40, seq40, false, 0.7, 2.2));

  return inst;
}

}  // namespace cid
