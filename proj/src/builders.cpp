#include "cid/builders.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cid {

namespace {

std::string x_name(StopId stop, ChargerType t) {
  return "x_s" + std::to_string(stop) + "_" + charger_code(t);
}
std::string z_name(LineId line) { return "z_k" + std::to_string(line); }

struct BaseModel {
  MilpModel m;
  std::map<std::pair<StopId, int>, VarId> x;  // (stop, 0=SS 1=FF) -> var
  std::map<LineId, VarId> z;

  VarId x_of(StopId stop, ChargerType t) const {
    auto it = x.find({stop, t == ChargerType::Standard ? 0 : 1});
    return it == x.end() ? -1 : it->second;
  }
};

// Accumulates charging coefficients over a prefix, merging repeat visits of
// one stop into a single term per variable.
class ChargeAccum {
 public:
  void add(VarId var, double coeff) {
    if (var < 0) return;
    coeffs_[var] += coeff;
  }
  void append_to(std::vector<std::pair<VarId, double>>& terms, double scale = 1.0) const {
    for (const auto& [var, c] : coeffs_) terms.emplace_back(var, scale * c);
  }
  bool empty() const { return coeffs_.empty(); }

 private:
  std::map<VarId, double> coeffs_;
};

void require_valid(const NetworkInstance& inst) {
  const auto problems = validate_network(inst);
  if (!problems.empty())
    throw std::invalid_argument("invalid network instance: " + problems.front());
}

BaseModel build_base(const NetworkInstance& inst, const EnergySampleSet* samples) {
  BaseModel base;

  // Charger candidates: stops that some line can actually charge at
  // (visited after a terminal departure) and that are not excluded.
  std::set<StopId> candidates;
  for (const LineSpec& line : inst.lines)
    for (std::size_t i = 1; i < line.visits.size(); ++i)
      if (!inst.excluded_stops.count(line.visits[i].stop)) candidates.insert(line.visits[i].stop);

  for (StopId s : candidates) {
    const VarId xs = base.m.add_var(x_name(s, ChargerType::Standard), VarRole::Placement,
                                    VarKind::Binary, 0.0, 1.0);
    const VarId xf = base.m.add_var(x_name(s, ChargerType::FastFeeding), VarRole::Placement,
                                    VarKind::Binary, 0.0, 1.0);
    base.x[{s, 0}] = xs;
    base.x[{s, 1}] = xf;
    base.m.add_objective_term(xs, inst.costs.station_cost_ss);
    base.m.add_objective_term(xf, inst.costs.station_cost_ff);
    base.m.add_row("onetype_s" + std::to_string(s), {{xs, 1.0}, {xf, 1.0}}, RowSense::LE, 1.0);
  }
  for (const LineSpec& line : inst.lines) {
    const VarId z = base.m.add_var(z_name(line.id), VarRole::Capacity, VarKind::Continuous, 0.0,
                                   capacity_upper_bound(inst, line, samples));
    base.z[line.id] = z;
    base.m.add_objective_term(z, inst.costs.battery_cost_per_kwh * line.fleet_size);
  }
  return base;
}

std::string row_tag(LineId k, std::size_t p) {
  return "k" + std::to_string(k) + "_p" + std::to_string(p);
}

}  // namespace

double capacity_upper_bound(const NetworkInstance& inst, const LineSpec& line,
                            const EnergySampleSet* samples) {
  double total = 0.0;
  const EnergySampleSet::LineSamples* ls = samples ? samples->find(line.id) : nullptr;
  for (std::size_t i = 1; i < line.visits.size(); ++i) {
    double worst = line.visits[i].segment.max_kwh;
    if (ls && i - 1 < ls->values.size())
      for (double v : ls->values[i - 1]) worst = std::max(worst, v);
    total += worst;
  }
  return 2.0 * total / inst.costs.usable_fraction();
}

double prefix_budget(PrefixBudgetPolicy policy, double base, std::size_t prefix_index) {
  return policy == PrefixBudgetPolicy::ConstantPerPrefix
             ? base
             : base * static_cast<double>(prefix_index);
}

double worst_case_prefix_deviation(std::vector<double> devs, double budget) {
  std::sort(devs.begin(), devs.end(), std::greater<double>());
  double total = 0.0;
  double remaining = std::max(0.0, budget);
  for (double d : devs) {
    if (remaining <= 0.0) break;
    const double take = std::min(1.0, remaining);
    total += take * d;
    remaining -= take;
  }
  return total;
}

MilpModel build_cid(const NetworkInstance& inst) {
  require_valid(inst);
  BaseModel base = build_base(inst, nullptr);
  const double ufrac = inst.costs.usable_fraction();

  for (const LineSpec& line : inst.lines) {
    const std::vector<double> mean_prefix = prefix_mean_consumption(line);
    ChargeAccum upto_prev;  // charging through visit p-1
    ChargeAccum upto_here;  // charging through visit p
    for (std::size_t p = 1; p < line.visits.size(); ++p) {
      const Visit& v = line.visits[p];
      upto_prev = upto_here;
      for (ChargerType t : {ChargerType::Standard, ChargerType::FastFeeding})
        upto_here.add(base.x_of(v.stop, t), charge_gain_kwh(inst.costs, t, v.dwell_s));

      if (!upto_here.empty()) {
        std::vector<std::pair<VarId, double>> terms;
        upto_here.append_to(terms);
        base.m.add_row(row_tag(line.id, p) + "_maxcharge", std::move(terms), RowSense::LE,
                       mean_prefix[p]);
      }
      std::vector<std::pair<VarId, double>> terms{{base.z[line.id], ufrac}};
      upto_prev.append_to(terms);
      base.m.add_row(row_tag(line.id, p) + "_minlevel", std::move(terms), RowSense::GE,
                     mean_prefix[p]);
    }
  }
  return base.m;
}

MilpModel build_bou(const NetworkInstance& inst, const BoUConfig& cfg) {
  require_valid(inst);
  if (cfg.gamma < 0.0) throw std::invalid_argument("build_bou: gamma must be nonnegative");
  BaseModel base = build_base(inst, nullptr);
  const double ufrac = inst.costs.usable_fraction();

  for (const LineSpec& line : inst.lines) {
    const std::vector<double> mean_prefix = prefix_mean_consumption(line);
    std::vector<double> devs;  // devs[i-1] belongs to visit i
    double max_dev = 0.0;
    for (std::size_t i = 1; i < line.visits.size(); ++i) {
      devs.push_back(line.visits[i].segment.deviation_kwh());
      max_dev = std::max(max_dev, devs.back());
    }

    ChargeAccum upto_prev;
    ChargeAccum upto_here;
    for (std::size_t p = 1; p < line.visits.size(); ++p) {
      const Visit& v = line.visits[p];
      upto_prev = upto_here;
      for (ChargerType t : {ChargerType::Standard, ChargerType::FastFeeding})
        upto_here.add(base.x_of(v.stop, t), charge_gain_kwh(inst.costs, t, v.dwell_s));

      const double gamma_p = prefix_budget(cfg.gamma_policy, cfg.gamma, p);
      const double worst_dev = worst_case_prefix_deviation(
          std::vector<double>(devs.begin(), devs.begin() + static_cast<std::ptrdiff_t>(p)),
          gamma_p);

      if (!upto_here.empty()) {
        std::vector<std::pair<VarId, double>> terms;
        upto_here.append_to(terms);
        base.m.add_row(row_tag(line.id, p) + "_maxcharge", std::move(terms), RowSense::LE,
                       mean_prefix[p] + worst_dev);
      }

      // Dual pair of the prefix's worst-deviation problem; at any optimum the
      // pair settles to exactly that deviation.
      const std::string tag = row_tag(line.id, p);
      const VarId u = base.m.add_var("u_" + tag, VarRole::DualU, VarKind::Continuous, 0.0,
                                     max_dev + 1.0);
      std::vector<std::pair<VarId, double>> level{{base.z[line.id], ufrac}, {u, -gamma_p}};
      for (std::size_t i = 1; i <= p; ++i) {
        const VarId vi = base.m.add_var("v_" + tag + "_i" + std::to_string(i), VarRole::DualV,
                                        VarKind::Continuous, 0.0, std::max(max_dev, 1e-12));
        base.m.add_row(tag + "_dual_i" + std::to_string(i), {{u, 1.0}, {vi, 1.0}}, RowSense::GE,
                       devs[i - 1]);
        level.emplace_back(vi, -1.0);
      }
      upto_prev.append_to(level);
      base.m.add_row(tag + "_minlevel", std::move(level), RowSense::GE, mean_prefix[p]);
    }
  }
  return base.m;
}

MilpModel build_drcc(const NetworkInstance& inst, const DrccConfig& cfg,
                     std::vector<std::string>* warnings) {
  require_valid(inst);
  if (!cfg.samples) throw std::invalid_argument("build_drcc: sample set required");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    throw std::invalid_argument("build_drcc: epsilon must be in (0,1)");
  if (cfg.theta < 0.0) throw std::invalid_argument("build_drcc: theta must be nonnegative");
  if (cfg.big_m <= 0.0) throw std::invalid_argument("build_drcc: big_m must be positive");

  const int n_samples = cfg.samples->n;
  if (n_samples < 1) throw std::invalid_argument("build_drcc: empty sample set");
  for (const LineSpec& line : inst.lines) {
    const EnergySampleSet::LineSamples* ls = cfg.samples->find(line.id);
    if (!ls) throw std::invalid_argument("build_drcc: no samples for line " + std::to_string(line.id));
    if (ls->values.size() != line.segment_count())
      throw std::invalid_argument("build_drcc: sample segments do not match line " +
                                  std::to_string(line.id));
    for (const auto& seg : ls->values)
      if (static_cast<int>(seg.size()) != n_samples)
        throw std::invalid_argument("build_drcc: ragged sample count on line " +
                                    std::to_string(line.id));
  }

  BaseModel base = build_base(inst, cfg.samples);
  const double ufrac = inst.costs.usable_fraction();
  const double n_d = static_cast<double>(n_samples);
  const int violation_cap = static_cast<int>(std::floor(cfg.epsilon * n_d + 1e-9));

  // Big-M must dominate every sample-path prefix sum for the exemption rows
  // to actually free a flagged sample.
  double max_prefix_sample = 0.0;
  for (const LineSpec& line : inst.lines) {
    const EnergySampleSet::LineSamples* ls = cfg.samples->find(line.id);
    for (int j = 0; j < n_samples; ++j) {
      double run = 0.0;
      for (std::size_t seg = 0; seg < ls->values.size(); ++seg) {
        run += ls->values[seg][static_cast<std::size_t>(j)];
        max_prefix_sample = std::max(max_prefix_sample, run);
      }
    }
  }
  if (cfg.big_m < max_prefix_sample && warnings) {
    double cap_bound = 0.0;
    for (const LineSpec& line : inst.lines)
      cap_bound = std::max(cap_bound, ufrac * capacity_upper_bound(inst, line, cfg.samples));
    std::ostringstream os;
    os << "big_m=" << cfg.big_m << " is smaller than the largest sample prefix sum ("
       << max_prefix_sample << "); suggested value: " << max_prefix_sample + cap_bound;
    warnings->push_back(os.str());
  }

  for (const LineSpec& line : inst.lines) {
    const EnergySampleSet::LineSamples* ls = cfg.samples->find(line.id);
    const double z_ub = capacity_upper_bound(inst, line, cfg.samples);
    double charge_ub = 0.0;
    for (std::size_t i = 1; i < line.visits.size(); ++i)
      charge_ub += charge_gain_kwh(inst.costs, ChargerType::FastFeeding, line.visits[i].dwell_s);
    const double q_ub = 2.0 * (max_prefix_sample + ufrac * z_ub + charge_ub) + 1.0;

    // prefix sums per sample path
    std::vector<std::vector<double>> sample_prefix(
        line.visits.size(), std::vector<double>(static_cast<std::size_t>(n_samples), 0.0));
    for (std::size_t p = 1; p < line.visits.size(); ++p)
      for (int j = 0; j < n_samples; ++j)
        sample_prefix[p][static_cast<std::size_t>(j)] =
            sample_prefix[p - 1][static_cast<std::size_t>(j)] +
            ls->values[p - 1][static_cast<std::size_t>(j)];

    ChargeAccum upto_prev;
    ChargeAccum upto_here;
    for (std::size_t p = 1; p < line.visits.size(); ++p) {
      const Visit& v = line.visits[p];
      upto_prev = upto_here;
      for (ChargerType t : {ChargerType::Standard, ChargerType::FastFeeding})
        upto_here.add(base.x_of(v.stop, t), charge_gain_kwh(inst.costs, t, v.dwell_s));

      const std::string tag = row_tag(line.id, p);
      const double theta_p = prefix_budget(cfg.theta_policy, cfg.theta, p);
      const VarId q = base.m.add_var("q_" + tag, VarRole::DistQ, VarKind::Continuous, 0.0, q_ub);

      std::vector<std::pair<VarId, double>> budget{
          {q, static_cast<double>(violation_cap + 1)}};
      std::vector<std::pair<VarId, double>> cap;
      for (int j = 0; j < n_samples; ++j) {
        const std::string sj = tag + "_j" + std::to_string(j);
        const VarId r = base.m.add_var("r_" + sj, VarRole::DistR, VarKind::Continuous, 0.0, q_ub);
        const VarId y =
            base.m.add_var("y_" + sj, VarRole::ViolationFlag, VarKind::Binary, 0.0, 1.0);
        budget.emplace_back(r, -1.0);
        cap.emplace_back(y, 1.0);

        // Flagged samples must spend r >= q; unflagged ones keep q - r below
        // both path slacks.
        base.m.add_row(sj + "_esc", {{q, 1.0}, {r, -1.0}, {y, cfg.big_m}}, RowSense::LE,
                       cfg.big_m);
        const double s_pj = sample_prefix[p][static_cast<std::size_t>(j)];
        {
          std::vector<std::pair<VarId, double>> row{{q, -1.0}, {r, 1.0}, {y, cfg.big_m}};
          upto_here.append_to(row, -1.0);
          base.m.add_row(sj + "_maxcharge", std::move(row), RowSense::GE, -s_pj);
        }
        {
          std::vector<std::pair<VarId, double>> row{
              {base.z[line.id], ufrac}, {q, -1.0}, {r, 1.0}, {y, cfg.big_m}};
          upto_prev.append_to(row);
          base.m.add_row(sj + "_minlevel", std::move(row), RowSense::GE, s_pj);
        }
      }
      base.m.add_row(tag + "_budget", std::move(budget), RowSense::GE, theta_p * n_d);
      base.m.add_row(tag + "_cap", std::move(cap), RowSense::LE,
                     static_cast<double>(violation_cap));
    }
  }
  return base.m;
}

ChargingDesign extract_design(const NetworkInstance& inst, const MilpModel& model,
                              const SolveResult& result) {
  if (!result.has_solution())
    throw std::runtime_error("extract_design: solve did not produce a usable solution");
  if (result.values.size() != model.vars.size())
    throw std::runtime_error("extract_design: result does not match model");

  ChargingDesign design;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    const Var& var = model.vars[j];
    const double value = result.values[j];
    if (var.role == VarRole::Placement) {
      if (value < 0.5) continue;
      // name: x_s{stop}_{SS|FF}
      const auto us = var.name.rfind('_');
      const StopId stop = static_cast<StopId>(std::stol(var.name.substr(3, us - 3)));
      const ChargerType t =
          var.name.substr(us + 1) == "SS" ? ChargerType::Standard : ChargerType::FastFeeding;
      design.placement[stop] = t;
    } else if (var.role == VarRole::Capacity) {
      const LineId line = static_cast<LineId>(std::stol(var.name.substr(3)));
      design.capacity_kwh[line] = std::max(0.0, value);
    }
  }

  for (const auto& [stop, t] : design.placement) {
    (void)stop;
    design.station_cost_eur += inst.costs.station_cost(t);
  }
  for (const LineSpec& line : inst.lines) {
    auto it = design.capacity_kwh.find(line.id);
    if (it == design.capacity_kwh.end())
      throw std::runtime_error("extract_design: no capacity variable for line " +
                               std::to_string(line.id));
    design.battery_cost_eur += inst.costs.battery_cost_per_kwh * line.fleet_size * it->second;
  }
  design.objective_eur = design.station_cost_eur + design.battery_cost_eur;

  const double ref = std::isfinite(result.objective) ? result.objective : design.objective_eur;
  if (std::abs(design.objective_eur - ref) > 1e-5 * std::max(1.0, std::abs(ref)))
    throw std::runtime_error("extract_design: recomputed objective " +
                             std::to_string(design.objective_eur) +
                             " disagrees with solver objective " + std::to_string(ref));
  return design;
}

}  // namespace cid
