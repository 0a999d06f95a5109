#include "cid/milp.hpp"

#include <algorithm>
#include <set>

namespace cid {

std::vector<std::string> MilpModel::validate() const {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const Var& v = vars[i];
    if (v.name.empty()) out.push_back("var " + std::to_string(i) + ": unnamed");
    else if (!names.insert(v.name).second)
      out.push_back("var " + std::to_string(i) + ": duplicate name " + v.name);
    if (!std::isfinite(v.lb) || !std::isfinite(v.ub))
      out.push_back("var " + v.name + ": bounds must be finite");
    if (v.lb > v.ub) out.push_back("var " + v.name + ": lb > ub");
  }
  for (const Row& r : rows) {
    std::set<VarId> seen;
    for (const auto& [id, coeff] : r.terms) {
      (void)coeff;
      if (id < 0 || id >= static_cast<VarId>(vars.size()))
        out.push_back("row " + r.name + ": bad var id");
      else if (!seen.insert(id).second)
        out.push_back("row " + r.name + ": duplicate var " + vars[static_cast<std::size_t>(id)].name);
    }
    if (r.name.empty()) out.push_back("row: unnamed");
  }
  return out;
}

double MilpModel::objective_value(const std::vector<double>& x) const {
  double v = 0.0;
  for (const auto& [id, coeff] : objective) v += coeff * x[static_cast<std::size_t>(id)];
  return v;
}

double MilpModel::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    worst = std::max(worst, vars[i].lb - x[i]);
    worst = std::max(worst, x[i] - vars[i].ub);
  }
  for (const Row& r : rows) {
    double lhs = 0.0;
    for (const auto& [id, coeff] : r.terms) lhs += coeff * x[static_cast<std::size_t>(id)];
    switch (r.sense) {
      case RowSense::LE: worst = std::max(worst, lhs - r.rhs); break;
      case RowSense::GE: worst = std::max(worst, r.rhs - lhs); break;
      case RowSense::EQ: worst = std::max(worst, std::abs(lhs - r.rhs)); break;
    }
  }
  return worst;
}

}  // namespace cid
