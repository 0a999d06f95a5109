#include "cid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cid {

namespace {

constexpr double kTol = 1e-9;
constexpr double kBisectTolKwh = 1e-6;

// Charging gain received at each visit of a line under a placement; index 0
// (the terminal departure) never charges.
std::vector<double> visit_gains(const NetworkInstance& inst, const LineSpec& line,
                                const std::map<StopId, ChargerType>& placement) {
  std::vector<double> gain(line.visits.size(), 0.0);
  for (std::size_t i = 1; i < line.visits.size(); ++i) {
    auto it = placement.find(line.visits[i].stop);
    if (it != placement.end())
      gain[i] = charge_gain_kwh(inst.costs, it->second, line.visits[i].dwell_s);
  }
  return gain;
}

struct ScopeDistances {
  std::vector<double> dist;  // clamped distance to the unsafe set per sample
  int violators = 0;         // samples strictly inside the unsafe set
};

ScopeDistances scope_distances(double usable_kwh, double charge_upto_here,
                               double charge_upto_prev, const std::vector<double>& sample_prefix) {
  ScopeDistances out;
  out.dist.reserve(sample_prefix.size());
  for (double s : sample_prefix) {
    const double overcharge_slack = s - charge_upto_here;
    const double level_slack = usable_kwh + charge_upto_prev - s;
    const double worst = std::min(overcharge_slack, level_slack);
    if (worst < -kTol) ++out.violators;
    out.dist.push_back(std::max(0.0, worst));
  }
  return out;
}

// Feasibility of one prefix scope: violator count within the cap and enough
// near-boundary mass that no admissible shift of floor(eps*N)+1 samples fits
// inside the displacement budget.
bool scope_feasible(const ScopeDistances& sd, int cap, double theta_n) {
  if (sd.violators > cap) return false;
  if (theta_n <= kTol) return true;
  std::vector<double> d = sd.dist;
  const std::size_t take = std::min(d.size(), static_cast<std::size_t>(cap) + 1);
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(take), d.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += d[i];
  return sum >= theta_n - kTol;
}

bool line_drcc_feasible(const NetworkInstance& inst, const LineSpec& line,
                        const std::vector<double>& gain,
                        const EnergySampleSet::LineSamples& ls, double z, double theta,
                        double epsilon, PrefixBudgetPolicy theta_policy, int n_samples) {
  const double usable = inst.costs.usable_fraction() * z;
  const double n_d = static_cast<double>(n_samples);
  const int cap = static_cast<int>(std::floor(epsilon * n_d + 1e-9));

  std::vector<double> sample_prefix(static_cast<std::size_t>(n_samples), 0.0);
  double charge_here = 0.0;
  for (std::size_t p = 1; p < line.visits.size(); ++p) {
    const double charge_prev = charge_here;
    charge_here += gain[p];
    for (int j = 0; j < n_samples; ++j)
      sample_prefix[static_cast<std::size_t>(j)] += ls.values[p - 1][static_cast<std::size_t>(j)];
    const ScopeDistances sd = scope_distances(usable, charge_here, charge_prev, sample_prefix);
    const double theta_p = prefix_budget(theta_policy, theta, p);
    if (!scope_feasible(sd, cap, theta_p * n_d)) return false;
  }
  return true;
}

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  int stations = 0;
  std::size_t index = 0;
  std::map<LineId, double> z;

  bool better_than(const Candidate& o) const {
    if (cost != o.cost) return cost < o.cost;
    if (stations != o.stations) return stations < o.stations;
    return index < o.index;
  }
};

ChargingDesign to_design(const NetworkInstance& inst, const PlacementEnum& en,
                         const Candidate& best) {
  if (!std::isfinite(best.cost))
    throw std::runtime_error("placement enumeration: no feasible placement");
  ChargingDesign d;
  d.placement = en.decode(best.index);
  d.capacity_kwh = best.z;
  for (const auto& [stop, t] : d.placement) {
    (void)stop;
    d.station_cost_eur += inst.costs.station_cost(t);
  }
  for (const LineSpec& line : inst.lines)
    d.battery_cost_eur +=
        inst.costs.battery_cost_per_kwh * line.fleet_size * best.z.at(line.id);
  d.objective_eur = d.station_cost_eur + d.battery_cost_eur;
  return d;
}

template <typename EvalFn>
ChargingDesign enumerate_best(const NetworkInstance& inst, const PlacementEnum& en, ExecMode exec,
                              EvalFn eval) {
  Candidate best;
  const std::size_t total = en.size();
#ifdef _OPENMP
  const bool parallel = exec == ExecMode::Parallel;
#pragma omp parallel if (parallel)
  {
    Candidate local;
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < static_cast<long long>(total); ++i) {
      Candidate c;
      c.index = static_cast<std::size_t>(i);
      if (eval(c) && c.better_than(local)) local = c;
    }
#pragma omp critical
    {
      if (local.better_than(best)) best = local;
    }
  }
#else
  (void)exec;
  for (std::size_t i = 0; i < total; ++i) {
    Candidate c;
    c.index = i;
    if (eval(c) && c.better_than(best)) best = c;
  }
#endif
  return to_design(inst, en, best);
}

}  // namespace

PlacementEnum::PlacementEnum(std::vector<StopId> candidates) : candidates_(std::move(candidates)) {
  std::sort(candidates_.begin(), candidates_.end());
  count_ = 1;
  for (std::size_t i = 0; i < candidates_.size(); ++i) count_ *= 3;
}

std::map<StopId, ChargerType> PlacementEnum::decode(std::size_t index) const {
  std::map<StopId, ChargerType> out;
  for (StopId s : candidates_) {
    const std::size_t digit = index % 3;
    index /= 3;
    if (digit == 1) out[s] = ChargerType::Standard;
    else if (digit == 2) out[s] = ChargerType::FastFeeding;
  }
  return out;
}

std::vector<StopId> PlacementEnum::candidate_stops(const NetworkInstance& inst) {
  std::set<StopId> set;
  for (const LineSpec& line : inst.lines)
    for (std::size_t i = 1; i < line.visits.size(); ++i)
      if (!inst.excluded_stops.count(line.visits[i].stop)) set.insert(line.visits[i].stop);
  return {set.begin(), set.end()};
}

CapacityResult min_capacity_given_placement(const NetworkInstance& inst,
                                            const std::map<StopId, ChargerType>& placement,
                                            CapacityMode mode, const BoUConfig& bou) {
  for (const auto& [stop, t] : placement) {
    (void)t;
    if (inst.excluded_stops.count(stop))
      throw std::invalid_argument("placement uses excluded stop " + std::to_string(stop));
  }

  CapacityResult out;
  for (const LineSpec& line : inst.lines) {
    const std::vector<double> gain = visit_gains(inst, line, placement);
    const std::vector<double> mean_prefix = prefix_mean_consumption(line);
    std::vector<double> devs;
    for (std::size_t i = 1; i < line.visits.size(); ++i)
      devs.push_back(line.visits[i].segment.deviation_kwh());

    bool ok = true;
    double requirement = 0.0;  // max over prefixes of the uncovered energy
    double charge_here = 0.0;
    for (std::size_t p = 1; p < line.visits.size() && ok; ++p) {
      const double charge_prev = charge_here;
      charge_here += gain[p];
      double margin = 0.0;
      if (mode == CapacityMode::BoU) {
        const double gamma_p = prefix_budget(bou.gamma_policy, bou.gamma, p);
        margin = worst_case_prefix_deviation(
            std::vector<double>(devs.begin(), devs.begin() + static_cast<std::ptrdiff_t>(p)),
            gamma_p);
      }
      if (charge_here > mean_prefix[p] + margin + kTol) ok = false;
      requirement = std::max(requirement, mean_prefix[p] + margin - charge_prev);
    }
    if (!ok) {
      out.infeasible_lines.push_back(line.id);
      continue;
    }
    out.z_kwh[line.id] = std::max(0.0, requirement) / inst.costs.usable_fraction();
  }
  return out;
}

bool drcc_feasible(const NetworkInstance& inst, const std::map<StopId, ChargerType>& placement,
                   const std::map<LineId, double>& z_kwh, const EnergySampleSet& samples,
                   double theta, double epsilon, PrefixBudgetPolicy theta_policy) {
  for (const LineSpec& line : inst.lines) {
    const EnergySampleSet::LineSamples* ls = samples.find(line.id);
    if (!ls || ls->values.size() != line.segment_count())
      throw std::invalid_argument("drcc_feasible: samples do not match line " +
                                  std::to_string(line.id));
    auto zit = z_kwh.find(line.id);
    if (zit == z_kwh.end())
      throw std::invalid_argument("drcc_feasible: missing capacity for line " +
                                  std::to_string(line.id));
    const std::vector<double> gain = visit_gains(inst, line, placement);
    if (!line_drcc_feasible(inst, line, gain, *ls, zit->second, theta, epsilon, theta_policy,
                            samples.n))
      return false;
  }
  return true;
}

std::optional<double> min_drcc_capacity_for_line(const NetworkInstance& inst,
                                                 const LineSpec& line,
                                                 const std::map<StopId, ChargerType>& placement,
                                                 const DrccConfig& cfg) {
  const EnergySampleSet::LineSamples* ls = cfg.samples->find(line.id);
  if (!ls) throw std::invalid_argument("min_drcc_capacity_for_line: missing samples");
  const std::vector<double> gain = visit_gains(inst, line, placement);
  auto feasible_at = [&](double z) {
    return line_drcc_feasible(inst, line, gain, *ls, z, cfg.theta, cfg.epsilon, cfg.theta_policy,
                              cfg.samples->n);
  };
  if (feasible_at(0.0)) return 0.0;
  double hi = capacity_upper_bound(inst, line, cfg.samples);
  if (!feasible_at(hi)) return std::nullopt;
  double lo = 0.0;
  while (hi - lo > kBisectTolKwh) {
    const double mid = 0.5 * (lo + hi);
    if (feasible_at(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

ChargingDesign enumerate_optimal_cid(const NetworkInstance& inst, ExecMode exec) {
  PlacementEnum en(PlacementEnum::candidate_stops(inst));
  if (en.candidates().size() > 8)
    throw std::invalid_argument("enumerate_optimal_cid: candidate set too large");
  return enumerate_best(inst, en, exec, [&](Candidate& c) {
    const CapacityResult res =
        min_capacity_given_placement(inst, en.decode(c.index), CapacityMode::Mean);
    if (!res.feasible()) return false;
    c.z = res.z_kwh;
    const auto placement = en.decode(c.index);
    c.stations = static_cast<int>(placement.size());
    c.cost = design_cost(inst, placement, c.z);
    return true;
  });
}

ChargingDesign enumerate_optimal_bou(const NetworkInstance& inst, const BoUConfig& cfg,
                                     ExecMode exec) {
  PlacementEnum en(PlacementEnum::candidate_stops(inst));
  if (en.candidates().size() > 8)
    throw std::invalid_argument("enumerate_optimal_bou: candidate set too large");
  return enumerate_best(inst, en, exec, [&](Candidate& c) {
    const CapacityResult res =
        min_capacity_given_placement(inst, en.decode(c.index), CapacityMode::BoU, cfg);
    if (!res.feasible()) return false;
    c.z = res.z_kwh;
    const auto placement = en.decode(c.index);
    c.stations = static_cast<int>(placement.size());
    c.cost = design_cost(inst, placement, c.z);
    return true;
  });
}

ChargingDesign enumerate_optimal_drcc(const NetworkInstance& inst, const DrccConfig& cfg,
                                      ExecMode exec) {
  if (!cfg.samples) throw std::invalid_argument("enumerate_optimal_drcc: sample set required");
  if (cfg.samples->n > 20)
    throw std::invalid_argument("enumerate_optimal_drcc: sample set too large");
  PlacementEnum en(PlacementEnum::candidate_stops(inst));
  if (en.candidates().size() > 6)
    throw std::invalid_argument("enumerate_optimal_drcc: candidate set too large");
  return enumerate_best(inst, en, exec, [&](Candidate& c) {
    const auto placement = en.decode(c.index);
    std::map<LineId, double> z;
    for (const LineSpec& line : inst.lines) {
      const auto zk = min_drcc_capacity_for_line(inst, line, placement, cfg);
      if (!zk) return false;
      z[line.id] = *zk;
    }
    c.z = std::move(z);
    c.stations = static_cast<int>(placement.size());
    c.cost = design_cost(inst, placement, c.z);
    return true;
  });
}

}  // namespace cid
