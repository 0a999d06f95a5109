#include "cid/lp_text.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cid {

namespace {

std::string fmt_coeff(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void append_terms(std::ostringstream& os, const std::vector<std::pair<VarId, double>>& terms,
                  const MilpModel& model) {
  bool first = true;
  for (const auto& [id, coeff] : terms) {
    const std::string& name = model.vars[static_cast<std::size_t>(id)].name;
    if (first) {
      if (coeff < 0.0)
        os << "- " << fmt_coeff(-coeff) << " " << name;
      else
        os << fmt_coeff(coeff) << " " << name;
      first = false;
    } else {
      if (coeff < 0.0)
        os << " - " << fmt_coeff(-coeff) << " " << name;
      else
        os << " + " << fmt_coeff(coeff) << " " << name;
    }
  }
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void parse_fail(std::size_t lineno, const std::string& line, const std::string& why) {
  throw std::invalid_argument("lp parse error at line " + std::to_string(lineno) + " (" + why +
                              "): " + line);
}

}  // namespace

std::string write_lp_text(const MilpModel& model) {
  for (const Var& v : model.vars)
    if (v.name.empty()) throw std::invalid_argument("write_lp_text: unnamed variable");

  std::ostringstream os;
  os << "Minimize\n obj: ";
  append_terms(os, model.objective, model);
  os << "\nSubject To\n";
  for (const Row& r : model.rows) {
    os << " " << r.name << ": ";
    append_terms(os, r.terms, model);
    switch (r.sense) {
      case RowSense::LE: os << " <= "; break;
      case RowSense::GE: os << " >= "; break;
      case RowSense::EQ: os << " = "; break;
    }
    os << fmt_coeff(r.rhs) << "\n";
  }
  os << "Bounds\n";
  for (const Var& v : model.vars)
    os << " " << fmt_coeff(v.lb) << " <= " << v.name << " <= " << fmt_coeff(v.ub) << "\n";
  os << "Binaries\n";
  for (const Var& v : model.vars) {
    if (v.kind == VarKind::Binary) os << " " << v.name << "\n";
  }
  os << "End\n";
  return os.str();
}

MilpModel parse_lp_text(const std::string& text) {
  MilpModel model;
  std::map<std::string, VarId> by_name;
  auto var_of = [&](const std::string& name) -> VarId {
    auto it = by_name.find(name);
    if (it != by_name.end()) return it->second;
    const VarId id = model.add_var(name, VarRole::Capacity, VarKind::Continuous, 0.0, 0.0);
    by_name.emplace(name, id);
    return id;
  };

  // terms := [sign] coeff name { ("+"|"-") coeff name }
  auto parse_terms = [&](const std::vector<std::string>& toks, std::size_t begin, std::size_t end,
                         std::size_t lineno, const std::string& line) {
    std::vector<std::pair<VarId, double>> terms;
    double sign = 1.0;
    std::size_t i = begin;
    while (i < end) {
      if (toks[i] == "+") {
        sign = 1.0;
        ++i;
      } else if (toks[i] == "-") {
        sign = -1.0;
        ++i;
      }
      if (i >= end) parse_fail(lineno, line, "dangling sign");
      double coeff = 0.0;
      try {
        std::size_t used = 0;
        coeff = std::stod(toks[i], &used);
        if (used != toks[i].size()) throw std::invalid_argument("trailing");
      } catch (...) {
        parse_fail(lineno, line, "expected coefficient, got '" + toks[i] + "'");
      }
      if (i + 1 >= end) parse_fail(lineno, line, "coefficient without variable");
      terms.emplace_back(var_of(toks[i + 1]), sign * coeff);
      sign = 1.0;
      i += 2;
    }
    return terms;
  };

  enum class Section { None, Objective, Rows, Bounds, Binaries, Done };
  Section section = Section::None;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::vector<std::string> toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string head = toks[0];
    if (head == "Minimize") {
      section = Section::Objective;
      continue;
    }
    if (head == "Subject" && toks.size() >= 2 && toks[1] == "To") {
      section = Section::Rows;
      continue;
    }
    if (head == "Bounds") {
      section = Section::Bounds;
      continue;
    }
    if (head == "Binaries") {
      section = Section::Binaries;
      continue;
    }
    if (head == "End") {
      section = Section::Done;
      continue;
    }

    switch (section) {
      case Section::Objective: {
        if (toks[0].back() != ':') parse_fail(lineno, line, "objective must start with 'obj:'");
        model.objective = parse_terms(toks, 1, toks.size(), lineno, line);
        break;
      }
      case Section::Rows: {
        if (toks[0].back() != ':') parse_fail(lineno, line, "row must start with 'name:'");
        const std::string name = toks[0].substr(0, toks[0].size() - 1);
        std::size_t sense_pos = toks.size();
        RowSense sense = RowSense::LE;
        for (std::size_t i = 1; i < toks.size(); ++i) {
          if (toks[i] == "<=" || toks[i] == ">=" || toks[i] == "=") {
            sense_pos = i;
            sense = toks[i] == "<=" ? RowSense::LE : toks[i] == ">=" ? RowSense::GE : RowSense::EQ;
            break;
          }
        }
        if (sense_pos == toks.size()) parse_fail(lineno, line, "row missing sense");
        if (sense_pos + 1 >= toks.size()) parse_fail(lineno, line, "row missing rhs");
        double rhs = 0.0;
        try {
          rhs = std::stod(toks[sense_pos + 1]);
        } catch (...) {
          parse_fail(lineno, line, "bad rhs");
        }
        model.add_row(name, parse_terms(toks, 1, sense_pos, lineno, line), sense, rhs);
        break;
      }
      case Section::Bounds: {
        // form: lb <= name <= ub
        if (toks.size() != 5 || toks[1] != "<=" || toks[3] != "<=")
          parse_fail(lineno, line, "bound must be 'lb <= name <= ub'");
        double lb = 0.0, ub = 0.0;
        try {
          lb = std::stod(toks[0]);
          ub = std::stod(toks[4]);
        } catch (...) {
          parse_fail(lineno, line, "bad bound value");
        }
        const VarId id = var_of(toks[2]);
        model.vars[static_cast<std::size_t>(id)].lb = lb;
        model.vars[static_cast<std::size_t>(id)].ub = ub;
        break;
      }
      case Section::Binaries: {
        for (const std::string& name : toks)
          model.vars[static_cast<std::size_t>(var_of(name))].kind = VarKind::Binary;
        break;
      }
      case Section::None:
      case Section::Done:
        parse_fail(lineno, line, "content outside any section");
    }
  }
  return model;
}

std::string write_solution_text(const MilpModel& model, const SolveResult& result) {
  std::ostringstream os;
  switch (result.status) {
    case SolveStatus::Optimal: os << "=status= optimal\n"; break;
    case SolveStatus::Feasible: os << "=status= feasible\n"; break;
    case SolveStatus::Infeasible: os << "=status= infeasible\n"; break;
    case SolveStatus::Unbounded: os << "=status= unbounded\n"; break;
    case SolveStatus::TimeLimit: os << "=status= timelimit\n"; break;
  }
  if (std::isfinite(result.objective)) os << "=obj= " << fmt_coeff(result.objective) << "\n";
  if (std::isfinite(result.bound)) os << "=bound= " << fmt_coeff(result.bound) << "\n";
  if (!result.values.empty()) {
    for (std::size_t j = 0; j < model.vars.size(); ++j)
      os << model.vars[j].name << " " << fmt_coeff(result.values[j]) << "\n";
  }
  return os.str();
}

SolveResult parse_solution_text(const std::string& text, const MilpModel& model) {
  SolveResult res;
  std::map<std::string, std::size_t> by_name;
  for (std::size_t j = 0; j < model.vars.size(); ++j) by_name.emplace(model.vars[j].name, j);

  bool status_seen = false;
  std::vector<bool> have(model.vars.size(), false);
  std::vector<double> values(model.vars.size(), 0.0);

  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::vector<std::string> toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw std::invalid_argument("solution parse error at line " + std::to_string(lineno) +
                                  ": expected 'name value': " + line);
    const std::string& key = toks[0];
    if (key == "=status=") {
      status_seen = true;
      if (toks[1] == "optimal") res.status = SolveStatus::Optimal;
      else if (toks[1] == "feasible") res.status = SolveStatus::Feasible;
      else if (toks[1] == "infeasible") res.status = SolveStatus::Infeasible;
      else if (toks[1] == "unbounded") res.status = SolveStatus::Unbounded;
      else if (toks[1] == "timelimit") res.status = SolveStatus::TimeLimit;
      else
        throw std::invalid_argument("solution parse error at line " + std::to_string(lineno) +
                                    ": unknown status '" + toks[1] + "'");
      continue;
    }
    double value = 0.0;
    try {
      value = std::stod(toks[1]);
    } catch (...) {
      throw std::invalid_argument("solution parse error at line " + std::to_string(lineno) +
                                  ": bad value: " + line);
    }
    if (key == "=obj=") {
      res.objective = value;
    } else if (key == "=bound=") {
      res.bound = value;
    } else {
      auto it = by_name.find(key);
      if (it != by_name.end()) {
        values[it->second] = value;
        have[it->second] = true;
      }
      // Unknown names are tolerated; solvers may emit extras.
    }
  }

  if (!status_seen) throw std::invalid_argument("solution file missing =status= header");
  if (res.status == SolveStatus::Infeasible || res.status == SolveStatus::Unbounded) return res;
  if (res.status == SolveStatus::TimeLimit && !std::isfinite(res.objective))
    return res;  // time limit without an incumbent
  if (!std::isfinite(res.objective))
    throw std::invalid_argument("solution file missing =obj= header");

  std::string missing;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (!have[j]) {
      if (!missing.empty()) missing += ", ";
      missing += model.vars[j].name;
    }
  }
  if (!missing.empty())
    throw std::invalid_argument("solution file missing variables: " + missing);

  res.values = std::move(values);
  if (std::isfinite(res.bound)) res.gap = relative_gap(res.objective, res.bound);
  else if (res.status == SolveStatus::Optimal) {
    res.bound = res.objective;
    res.gap = 0.0;
  }
  return res;
}

namespace {

std::string substitute(std::string tmpl, const std::string& key, const std::string& value) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = tmpl.find(key, pos);
    if (hit == std::string::npos) {
      out += tmpl.substr(pos);
      return out;
    }
    out += tmpl.substr(pos, hit - pos);
    out += value;
    pos = hit + key.size();
  }
}

}  // namespace

SolveResult solve_external(const MilpModel& model, const std::string& cmd_template,
                           double time_s) {
  if (cmd_template.find("{out}") == std::string::npos)
    throw std::invalid_argument("solver command template needs an {out} placeholder");

  namespace fs = std::filesystem;
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  const fs::path dir = fs::temp_directory_path();
  const fs::path in_path = dir / ("cid_model_" + std::to_string(stamp) + ".lp");
  const fs::path out_path = dir / ("cid_solution_" + std::to_string(stamp) + ".sol");

  {
    std::ofstream out(in_path);
    if (!out) throw std::runtime_error("solve_external: cannot write " + in_path.string());
    out << write_lp_text(model);
  }

  std::string cmd = substitute(cmd_template, "{in}", in_path.string());
  cmd = substitute(cmd, "{out}", out_path.string());
  cmd = substitute(cmd, "{time}", fmt_coeff(time_s));

  const auto t0 = std::chrono::steady_clock::now();
  const int rc = std::system(cmd.c_str());
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::string text;
  {
    std::ifstream in(out_path);
    if (in) {
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
  }
  std::error_code ec;
  fs::remove(in_path, ec);
  fs::remove(out_path, ec);

  if (text.empty()) {
    throw std::runtime_error("external solver produced no solution file (exit code " +
                             std::to_string(rc) + "): " + cmd);
  }
  SolveResult res = parse_solution_text(text, model);
  res.wall_time_s = wall;
  return res;
}

}  // namespace cid
