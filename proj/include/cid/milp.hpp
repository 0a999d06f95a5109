#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cid {

using VarId = int;

enum class VarRole { Placement, Capacity, DualU, DualV, DistQ, DistR, ViolationFlag };
enum class VarKind { Continuous, Binary };
enum class RowSense { LE, GE, EQ };

struct Var {
  std::string name;
  VarRole role = VarRole::Capacity;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = 0.0;
};

struct Row {
  std::string name;
  std::vector<std::pair<VarId, double>> terms;
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
};

// Backend-agnostic minimization model. Builders keep bounds finite so every
// LP relaxation is bounded.
struct MilpModel {
  std::vector<Var> vars;
  std::vector<Row> rows;
  std::vector<std::pair<VarId, double>> objective;

  VarId add_var(std::string name, VarRole role, VarKind kind, double lb, double ub) {
    vars.push_back(Var{std::move(name), role, kind, lb, ub});
    return static_cast<VarId>(vars.size() - 1);
  }
  void add_row(std::string name, std::vector<std::pair<VarId, double>> terms, RowSense sense,
               double rhs) {
    rows.push_back(Row{std::move(name), std::move(terms), sense, rhs});
  }
  void add_objective_term(VarId v, double coeff) { objective.emplace_back(v, coeff); }

  int binary_count() const {
    int n = 0;
    for (const Var& v : vars)
      if (v.kind == VarKind::Binary) ++n;
    return n;
  }

  // Checks structural invariants: names present and unique per column, finite
  // bounds, no duplicate variable within a row. Returns problems found.
  std::vector<std::string> validate() const;

  double objective_value(const std::vector<double>& x) const;
  // Largest violation of any row/bound by x.
  double max_violation(const std::vector<double>& x) const;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, TimeLimit };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  double wall_time_s = 0.0;

  bool has_solution() const {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible ||
           (status == SolveStatus::TimeLimit && !values.empty());
  }
};

inline double relative_gap(double objective, double bound) {
  if (!std::isfinite(objective) || !std::isfinite(bound)) return std::numeric_limits<double>::infinity();
  return (objective - bound) / std::max(1.0, std::abs(objective));
}

}  // namespace cid
