#include "cid/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ColStatus { Basic, AtLower, AtUpper };

// Dense bounded-variable tableau simplex. Columns are [structural | slack |
// artificial]; the artificial columns form the starting basis.
class Tableau {
 public:
  Tableau(const MilpModel& model, const std::vector<double>* lb_override,
          const std::vector<double>* ub_override)
      : m_(model.rows.size()), nstruct_(model.vars.size()) {
    ncols_ = nstruct_ + 2 * m_;
    lb_.assign(ncols_, 0.0);
    ub_.assign(ncols_, kInf);
    for (std::size_t j = 0; j < nstruct_; ++j) {
      lb_[j] = lb_override ? (*lb_override)[j] : model.vars[j].lb;
      ub_[j] = ub_override ? (*ub_override)[j] : model.vars[j].ub;
      if (lb_[j] > ub_[j] + kLpTol) contradictory_bounds_ = true;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t s = nstruct_ + i;
      switch (model.rows[i].sense) {
        case RowSense::LE: lb_[s] = 0.0; ub_[s] = kInf; break;
        case RowSense::GE: lb_[s] = -kInf; ub_[s] = 0.0; break;
        case RowSense::EQ: lb_[s] = 0.0; ub_[s] = 0.0; break;
      }
    }

    // Nonbasic start values: finite lower bound preferred, else upper, else 0.
    status_.assign(ncols_, ColStatus::AtLower);
    xval_.assign(ncols_, 0.0);
    for (std::size_t j = 0; j < nstruct_ + m_; ++j) {
      if (std::isfinite(lb_[j])) {
        status_[j] = ColStatus::AtLower;
        xval_[j] = lb_[j];
      } else if (std::isfinite(ub_[j])) {
        status_[j] = ColStatus::AtUpper;
        xval_[j] = ub_[j];
      } else {
        status_[j] = ColStatus::AtLower;
        xval_[j] = 0.0;
      }
    }

    t_.assign(m_, std::vector<double>(ncols_, 0.0));
    rhs_.assign(m_, 0.0);
    basic_.assign(m_, 0);
    beta_.assign(m_, 0.0);

    for (std::size_t i = 0; i < m_; ++i) {
      double residual = model.rows[i].rhs;
      for (const auto& [id, coeff] : model.rows[i].terms)
        residual -= coeff * xval_[static_cast<std::size_t>(id)];
      residual -= xval_[nstruct_ + i];  // slack start value (always 0 here)
      const double sign = residual >= 0.0 ? 1.0 : -1.0;
      for (const auto& [id, coeff] : model.rows[i].terms)
        t_[i][static_cast<std::size_t>(id)] = sign * coeff;
      t_[i][nstruct_ + i] = sign;
      const std::size_t art = nstruct_ + m_ + i;
      t_[i][art] = 1.0;
      rhs_[i] = sign * model.rows[i].rhs;
      basic_[i] = art;
      beta_[i] = std::abs(residual);
      status_[art] = ColStatus::Basic;
    }
  }

  bool contradictory_bounds() const { return contradictory_bounds_; }

  void set_phase1_objective() {
    cost_.assign(ncols_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) cost_[nstruct_ + m_ + i] = 1.0;
    rebuild_reduced_costs();
  }

  void set_phase2_objective(const MilpModel& model) {
    cost_.assign(ncols_, 0.0);
    for (const auto& [id, coeff] : model.objective) cost_[static_cast<std::size_t>(id)] += coeff;
    // Artificials stay pinned at zero in phase 2.
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t art = nstruct_ + m_ + i;
      lb_[art] = 0.0;
      ub_[art] = 0.0;
    }
    rebuild_reduced_costs();
  }

  // Returns Optimal or Unbounded.
  LpStatus iterate() {
    const std::size_t iteration_cap = 20000 * (m_ + ncols_) + 10000;
    for (std::size_t iter = 0; iter < iteration_cap; ++iter) {
      // Bland: lowest-index eligible entering column.
      std::size_t enter = ncols_;
      int dir = 0;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (status_[j] == ColStatus::Basic) continue;
        if (ub_[j] - lb_[j] < kLpTol && std::isfinite(lb_[j])) continue;  // fixed
        if (status_[j] == ColStatus::AtLower && d_[j] < -kLpTol) {
          enter = j;
          dir = +1;
          break;
        }
        if (status_[j] == ColStatus::AtUpper && d_[j] > kLpTol) {
          enter = j;
          dir = -1;
          break;
        }
      }
      if (enter == ncols_) return LpStatus::Optimal;

      // Ratio test: step t >= 0 moving xval[enter] by dir*t.
      double t_max = kInf;
      if (std::isfinite(lb_[enter]) && std::isfinite(ub_[enter]))
        t_max = ub_[enter] - lb_[enter];
      std::size_t leave_row = m_;  // m_ means bound flip
      for (std::size_t i = 0; i < m_; ++i) {
        const double delta = -static_cast<double>(dir) * t_[i][enter];
        if (delta > kLpTol) {
          if (std::isfinite(ub_[basic_[i]])) {
            const double limit = std::max(0.0, (ub_[basic_[i]] - beta_[i]) / delta);
            if (limit < t_max - kLpTol ||
                (limit < t_max + kLpTol && leave_row < m_ && basic_[i] < basic_[leave_row])) {
              t_max = limit;
              leave_row = i;
            }
          }
        } else if (delta < -kLpTol) {
          if (std::isfinite(lb_[basic_[i]])) {
            const double limit = std::max(0.0, (beta_[i] - lb_[basic_[i]]) / (-delta));
            if (limit < t_max - kLpTol ||
                (limit < t_max + kLpTol && leave_row < m_ && basic_[i] < basic_[leave_row])) {
              t_max = limit;
              leave_row = i;
            }
          }
        }
      }
      if (!std::isfinite(t_max)) return LpStatus::Unbounded;

      if (leave_row == m_) {
        // Bound flip of the entering variable.
        apply_step(enter, dir, t_max);
        status_[enter] = dir > 0 ? ColStatus::AtUpper : ColStatus::AtLower;
        xval_[enter] = dir > 0 ? ub_[enter] : lb_[enter];
        continue;
      }

      const double enter_val = xval_[enter] + dir * t_max;
      apply_step(enter, dir, t_max);
      pivot(leave_row, enter, dir);
      beta_[leave_row] = enter_val;
    }
    throw std::runtime_error("simplex: iteration cap exceeded");
  }

  double objective_of(const std::vector<double>& full) const {
    double v = 0.0;
    for (std::size_t j = 0; j < ncols_; ++j) v += cost_[j] * full[j];
    return v;
  }

  std::vector<double> current_values() const {
    std::vector<double> full(xval_);
    for (std::size_t i = 0; i < m_; ++i) full[basic_[i]] = beta_[i];
    return full;
  }

  std::size_t nstruct() const { return nstruct_; }

 private:
  void apply_step(std::size_t enter, int dir, double t) {
    if (t == 0.0) return;
    for (std::size_t i = 0; i < m_; ++i) beta_[i] += -static_cast<double>(dir) * t_[i][enter] * t;
  }

  void pivot(std::size_t row, std::size_t enter, int dir) {
    const std::size_t leaving = basic_[row];
    // Leaving variable lands on the bound it hit.
    const double delta = -static_cast<double>(dir) * t_[row][enter];
    if (delta > 0.0) {
      status_[leaving] = ColStatus::AtUpper;
      xval_[leaving] = ub_[leaving];
    } else {
      status_[leaving] = ColStatus::AtLower;
      xval_[leaving] = lb_[leaving];
    }

    const double piv = t_[row][enter];
    if (std::abs(piv) < 1e-12) throw std::runtime_error("simplex: numerically singular pivot");
    std::vector<double>& prow = t_[row];
    const double inv = 1.0 / piv;
    for (std::size_t j = 0; j < ncols_; ++j) prow[j] *= inv;
    rhs_[row] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = t_[i][enter];
      if (f == 0.0) continue;
      std::vector<double>& r = t_[i];
      for (std::size_t j = 0; j < ncols_; ++j) r[j] -= f * prow[j];
      rhs_[i] -= f * rhs_[row];
    }
    const double fd = d_[enter];
    if (fd != 0.0) {
      for (std::size_t j = 0; j < ncols_; ++j) d_[j] -= fd * prow[j];
    }
    basic_[row] = enter;
    status_[enter] = ColStatus::Basic;
    d_[enter] = 0.0;
  }

  void rebuild_reduced_costs() {
    d_ = cost_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost_[basic_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < ncols_; ++j) d_[j] -= cb * t_[i][j];
    }
  }

  std::size_t m_;
  std::size_t nstruct_;
  std::size_t ncols_ = 0;
  bool contradictory_bounds_ = false;
  std::vector<std::vector<double>> t_;
  std::vector<double> rhs_;
  std::vector<double> lb_, ub_, xval_, cost_, d_;
  std::vector<double> beta_;
  std::vector<std::size_t> basic_;
  std::vector<ColStatus> status_;
};

}  // namespace

LpResult solve_lp(const MilpModel& model, const std::vector<double>* lb_override,
                  const std::vector<double>* ub_override) {
  LpResult res;
  Tableau tab(model, lb_override, ub_override);
  if (tab.contradictory_bounds()) {
    res.status = LpStatus::Infeasible;
    return res;
  }

  tab.set_phase1_objective();
  const LpStatus p1 = tab.iterate();
  if (p1 == LpStatus::Unbounded) throw std::runtime_error("simplex: phase 1 unbounded");
  {
    const std::vector<double> full = tab.current_values();
    if (tab.objective_of(full) > 1e-7) {
      res.status = LpStatus::Infeasible;
      return res;
    }
  }

  tab.set_phase2_objective(model);
  const LpStatus p2 = tab.iterate();
  if (p2 == LpStatus::Unbounded) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  const std::vector<double> full = tab.current_values();
  res.status = LpStatus::Optimal;
  res.x.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(tab.nstruct()));
  res.objective = model.objective_value(res.x);
  return res;
}

}  // namespace cid
