#include "cid/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cid/simplex.hpp"

namespace cid {

namespace {

constexpr double kIntTol = 1e-7;
constexpr double kPruneTol = 1e-9;

struct SearchState {
  const MilpModel* model = nullptr;
  std::vector<double> lb, ub;
  std::vector<VarId> binaries;
  double incumbent_obj = std::numeric_limits<double>::infinity();
  std::vector<double> incumbent;
  double open_bound = std::numeric_limits<double>::infinity();  // min bound among cut branches
  bool timed_out = false;
  std::chrono::steady_clock::time_point deadline;

  bool expired() const { return std::chrono::steady_clock::now() > deadline; }
};

// Depth-first: fix fractional binaries in ascending VarId, LP value's nearest
// side first. Keeps the minimum LP bound of branches cut by the time limit so
// a final gap can be reported.
void dfs(SearchState& st) {
  if (st.timed_out || st.expired()) {
    st.timed_out = true;
    st.open_bound = -std::numeric_limits<double>::infinity();
    return;
  }
  LpResult lp = solve_lp(*st.model, &st.lb, &st.ub);
  if (lp.status == LpStatus::Infeasible) return;
  if (lp.status == LpStatus::Unbounded) throw std::runtime_error("solve_bundled: unbounded relaxation");
  if (lp.objective >= st.incumbent_obj - kPruneTol) return;

  VarId branch = -1;
  for (VarId b : st.binaries) {
    const double v = lp.x[static_cast<std::size_t>(b)];
    if (std::abs(v - std::round(v)) > kIntTol) {
      branch = b;
      break;
    }
  }
  if (branch < 0) {
    st.incumbent_obj = lp.objective;
    st.incumbent = lp.x;
    for (VarId b : st.binaries) {
      double& v = st.incumbent[static_cast<std::size_t>(b)];
      v = std::round(v);
    }
    return;
  }

  const std::size_t bi = static_cast<std::size_t>(branch);
  const double frac = lp.x[bi];
  const double first = frac >= 0.5 ? 1.0 : 0.0;
  const double save_lb = st.lb[bi], save_ub = st.ub[bi];
  for (int pass = 0; pass < 2; ++pass) {
    const double val = pass == 0 ? first : 1.0 - first;
    st.lb[bi] = val;
    st.ub[bi] = val;
    dfs(st);
    if (st.timed_out) break;
  }
  st.lb[bi] = save_lb;
  st.ub[bi] = save_ub;
}

}  // namespace

SolveResult solve_bundled(const MilpModel& model, const BundledLimits& limits) {
  const auto t0 = std::chrono::steady_clock::now();
  {
    const auto problems = model.validate();
    if (!problems.empty())
      throw std::invalid_argument("solve_bundled: invalid model: " + problems.front());
  }
  if (model.binary_count() > limits.max_binaries)
    throw std::invalid_argument("solve_bundled: too many binaries (" +
                                std::to_string(model.binary_count()) + " > " +
                                std::to_string(limits.max_binaries) + ")");

  SearchState st;
  st.model = &model;
  st.lb.resize(model.vars.size());
  st.ub.resize(model.vars.size());
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    st.lb[j] = model.vars[j].lb;
    st.ub[j] = model.vars[j].ub;
    if (model.vars[j].kind == VarKind::Binary) st.binaries.push_back(static_cast<VarId>(j));
  }
  st.deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double>(limits.time_s));

  dfs(st);

  SolveResult res;
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (st.timed_out) {
    res.status = SolveStatus::TimeLimit;
    if (std::isfinite(st.incumbent_obj)) {
      res.values = st.incumbent;
      res.objective = st.incumbent_obj;
      res.bound = st.open_bound;
      res.gap = relative_gap(res.objective, res.bound);
    }
    return res;
  }
  if (!std::isfinite(st.incumbent_obj)) {
    res.status = SolveStatus::Infeasible;
    return res;
  }
  res.status = SolveStatus::Optimal;
  res.values = st.incumbent;
  res.objective = st.incumbent_obj;
  res.bound = st.incumbent_obj;
  res.gap = 0.0;
  return res;
}

}  // namespace cid
