// Command-line front end: instance generation, solving, simulation, battery
// lifetime and parameter sweeps. Exit codes: 0 ok, 2 usage, 3 infeasible,
// 4 solver failure, 5 time limit without incumbent.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cid/builders.hpp"
#include "cid/datagen.hpp"
#include "cid/io.hpp"
#include "cid/lp_text.hpp"
#include "cid/network.hpp"
#include "cid/oracle.hpp"
#include "cid/simulate.hpp"
#include "cid/solve.hpp"

namespace {

using namespace cid;

struct CommandError : std::runtime_error {
  int code;
  CommandError(int code_, const std::string& msg) : std::runtime_error(msg), code(code_) {}
};

NetworkInstance load_network(const std::string& path) {
  NetworkInstance inst = read_network_json(path);
  const auto problems = validate_network(inst);
  if (!problems.empty()) {
    std::ostringstream os;
    os << path << " is not a valid network:";
    for (const auto& p : problems) os << "\n  " << p;
    throw CommandError(2, os.str());
  }
  return inst;
}

void write_manifest_for(const std::string& command, const std::vector<std::string>& args,
                        const std::map<std::string, std::uint64_t>& seeds,
                        const std::vector<std::string>& inputs,
                        const std::vector<std::string>& outputs, double wall_s) {
  RunManifest mf;
  mf.command = command;
  mf.args = args;
  mf.seeds = seeds;
  for (const auto& p : inputs) mf.input_digests[p] = file_digest(p);
  for (const auto& p : outputs) mf.output_digests[p] = file_digest(p);
  mf.wall_time_s = wall_s;
  for (const auto& p : outputs) mf.write(p + ".manifest.json");
}

std::vector<std::string> raw_args;

// ---------------------------------------------------------------------------
// config file: JSON mirroring the flags under keys network, model,
// uncertainty, simulation, sweep. Command-line flags win over the file.

nlohmann::json config_json;

template <typename T>
void config_default(const CLI::Option* opt, const char* section, const char* key, T& value) {
  if (opt && opt->count() > 0) return;  // explicit flag wins
  if (!config_json.contains(section)) return;
  const auto& sec = config_json.at(section);
  if (sec.contains(key)) value = sec.at(key).get<T>();
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string network_path;
  std::string model = "cid";
  double gamma = 0.0;
  std::string gamma_policy = "constant";
  double theta = 0.0;
  double epsilon = 0.1;
  double big_m = 25.0;
  std::string samples_path;
  std::string backend = "bundled";
  std::string solver_cmd;
  double time_limit = 600.0;
  int max_binaries = 24;
  std::string out_path;

  CLI::Option* opt_gamma = nullptr;
  CLI::Option* opt_theta = nullptr;
  CLI::Option* opt_epsilon = nullptr;
  CLI::Option* opt_big_m = nullptr;
  CLI::Option* opt_samples = nullptr;
  CLI::Option* opt_network = nullptr;
  CLI::Option* opt_model = nullptr;
  CLI::Option* opt_backend = nullptr;
  CLI::Option* opt_solver_cmd = nullptr;
  CLI::Option* opt_time = nullptr;
};

PrefixBudgetPolicy parse_policy(const std::string& name) {
  if (name == "constant") return PrefixBudgetPolicy::ConstantPerPrefix;
  if (name == "linear") return PrefixBudgetPolicy::LinearInPrefix;
  throw CommandError(2, "unknown prefix budget policy '" + name + "'");
}

struct SolveOutcome {
  SolveResult result;
  ChargingDesign design;
  double wall_s = 0.0;
};

SolveOutcome run_solve(const NetworkInstance& inst, const SolveArgs& a,
                       const EnergySampleSet* samples) {
  const auto t0 = std::chrono::steady_clock::now();
  MilpModel model;
  if (a.model == "cid") {
    model = build_cid(inst);
  } else if (a.model == "bou") {
    BoUConfig cfg;
    cfg.gamma = a.gamma;
    cfg.gamma_policy = parse_policy(a.gamma_policy);
    model = build_bou(inst, cfg);
  } else if (a.model == "drcc") {
    if (!samples) throw CommandError(2, "--samples is required for the drcc model");
    DrccConfig cfg;
    cfg.theta = a.theta;
    cfg.epsilon = a.epsilon;
    cfg.big_m = a.big_m;
    cfg.samples = samples;
    std::vector<std::string> warnings;
    model = build_drcc(inst, cfg, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  } else {
    throw CommandError(2, "unknown model '" + a.model + "' (expected cid|bou|drcc)");
  }

  SolveResult result;
  if (a.backend == "bundled") {
    try {
      result = solve_bundled(model, BundledLimits{a.max_binaries, a.time_limit});
    } catch (const std::invalid_argument& e) {
      throw CommandError(2, e.what());
    }
  } else if (a.backend == "external") {
    std::string cmd = a.solver_cmd;
    if (cmd.empty()) {
      const char* env = std::getenv("CID_SOLVER_CMD");
      if (env) cmd = env;
    }
    if (cmd.empty())
      throw CommandError(2, "external backend needs --solver-cmd or CID_SOLVER_CMD");
    try {
      result = solve_external(model, cmd, a.time_limit);
    } catch (const std::exception& e) {
      throw CommandError(4, std::string("external solver failed: ") + e.what());
    }
  } else {
    throw CommandError(2, "unknown backend '" + a.backend + "' (expected bundled|external)");
  }

  SolveOutcome out;
  out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.result = result;
  if (result.status == SolveStatus::Infeasible)
    throw CommandError(3, "model is infeasible");
  if (result.status == SolveStatus::Unbounded)
    throw CommandError(4, "model is unbounded; instance data is inconsistent");
  if (result.status == SolveStatus::TimeLimit && result.values.empty())
    throw CommandError(5, "time limit reached without an incumbent");
  out.design = extract_design(inst, model, result);
  return out;
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::TimeLimit: return "timelimit";
  }
  return "?";
}

// ---------------------------------------------------------------------------

int cmd_gen_grid(int lines, int stops, std::uint64_t seed, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  NetworkInstance inst;
  try {
    inst = generate_grid_network(lines, stops, seed, default_cost_params());
  } catch (const std::invalid_argument& e) {
    throw CommandError(2, e.what());
  }
  write_network_json(inst, out);
  double total_mean = 0.0;
  for (const auto& line : inst.lines)
    for (const auto& v : line.visits) total_mean += v.segment.mean_kwh;
  std::cout << "nodes=" << inst.stops.size() << " lines=" << inst.lines.size()
            << " stops_per_line=" << stops << " total_mean_kwh=" << format_number(total_mean)
            << "\n";
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest_for("gen-grid", raw_args, {{"seed", seed}}, {}, {out}, wall);
  return 0;
}

int cmd_gen_rotterdam(const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  NetworkInstance inst = rotterdam_fixture();
  write_network_json(inst, out);
  std::cout << "lines=" << inst.lines.size() << " stops=" << inst.stops.size() << "\n";
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest_for("gen-rotterdam", raw_args, {}, {}, {out}, wall);
  return 0;
}

int cmd_gen_samples(const std::string& network, const std::string& dist_text, int n,
                    std::uint64_t seed, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  NetworkInstance inst = load_network(network);
  DistSpec dist;
  try {
    dist = DistSpec::parse(dist_text);
  } catch (const std::exception& e) {
    throw CommandError(2, e.what());
  }
  if (n < 1) throw CommandError(2, "--n must be >= 1");
  const EnergySampleSet samples = sample_energy(inst, dist, n, seed);
  write_samples_csv(samples, out);
  std::cout << "lines=" << samples.lines.size() << " n=" << samples.n << "\n";
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest_for("gen-samples", raw_args, {{"seed", seed}}, {network},
                     {out, out + ".meta.json"}, wall);
  return 0;
}

int cmd_solve(const SolveArgs& a) {
  NetworkInstance inst = load_network(a.network_path);
  std::optional<EnergySampleSet> samples;
  std::vector<std::string> inputs{a.network_path};
  if (!a.samples_path.empty()) {
    samples = read_samples_csv(a.samples_path);
    inputs.push_back(a.samples_path);
  }
  const SolveOutcome out = run_solve(inst, a, samples ? &*samples : nullptr);
  write_design_json(out.design, a.out_path);
  std::cout << "status=" << status_name(out.result.status)
            << " objective_eur=" << format_number(out.design.objective_eur)
            << " bound=" << format_number(out.result.bound)
            << " gap=" << format_number(out.result.gap)
            << " wall_s=" << format_number(out.wall_s) << "\n";
  write_manifest_for("solve", raw_args, {}, inputs, {a.out_path}, out.wall_s);
  return 0;
}

int cmd_simulate(const std::string& network, const std::string& design_path,
                 const std::string& dist_text, int scenarios, int runs, std::uint64_t seed,
                 const std::string& mode, bool serial, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  NetworkInstance inst = load_network(network);
  ChargingDesign design = read_design_json(design_path);
  SimConfig cfg;
  try {
    cfg.dist = DistSpec::parse(dist_text);
  } catch (const std::exception& e) {
    throw CommandError(2, e.what());
  }
  cfg.scenarios_per_run = scenarios;
  cfg.runs = runs;
  cfg.seed = seed;
  if (mode == "linear") cfg.mode = ChargingMode::LinearCapped;
  else if (mode == "full-recharge-ff") cfg.mode = ChargingMode::FullRechargeFF;
  else throw CommandError(2, "unknown --mode '" + mode + "'");
  if (scenarios < 1 || runs < 1) throw CommandError(2, "--scenarios and --runs must be >= 1");

  SimulationReport report;
  try {
    report = run_monte_carlo(design, inst, cfg, !serial);
  } catch (const std::invalid_argument& e) {
    throw CommandError(2, e.what());
  }
  write_simulation_csv(report, out);
  for (const auto& lr : report.lines)
    std::cout << "line " << lr.line << ": " << format_number(lr.feasibility_pct) << "%\n";
  std::cout << "network average: " << format_number(report.network_avg_pct) << "%\n";
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest_for("simulate", raw_args, {{"seed", seed}}, {network, design_path}, {out}, wall);
  return 0;
}

int cmd_lifetime(const std::string& network, const std::string& design_path,
                 const std::string& benchmark_path, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  NetworkInstance inst = load_network(network);
  ChargingDesign design = read_design_json(design_path);
  LifetimeReport report;
  try {
    report = battery_lifetime(design, inst);
  } catch (const std::invalid_argument& e) {
    throw CommandError(2, e.what());
  }
  std::vector<std::string> inputs{network, design_path};

  std::optional<std::map<LineId, double>> rel;
  if (!benchmark_path.empty()) {
    ChargingDesign bench = read_design_json(benchmark_path);
    double avg = 0.0;
    try {
      rel = lifetime_relative_difference(report, battery_lifetime(bench, inst), &avg);
    } catch (const std::invalid_argument& e) {
      throw CommandError(2, e.what());
    }
    std::cout << "network average relative cost per cycle: " << format_number(avg) << "%\n";
    inputs.push_back(benchmark_path);
  }
  write_lifetime_csv(report, out, rel ? &*rel : nullptr);
  std::cout << "cycle model: coeff=" << format_number(report.cycle_coeff)
            << " exponent=" << format_number(report.cycle_exponent) << "\n";
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest_for("lifetime", raw_args, {}, inputs, {out}, wall);
  return 0;
}

int cmd_solve_lp(const std::string& in_path, const std::string& out_path, double time_limit,
                 int max_binaries) {
  std::ifstream in(in_path);
  if (!in) throw CommandError(2, "cannot open " + in_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  MilpModel model;
  try {
    model = parse_lp_text(buf.str());
  } catch (const std::exception& e) {
    throw CommandError(2, e.what());
  }
  SolveResult result;
  try {
    result = solve_bundled(model, BundledLimits{max_binaries, time_limit});
  } catch (const std::exception& e) {
    throw CommandError(4, e.what());
  }
  std::ofstream out(out_path);
  if (!out) throw CommandError(2, "cannot write " + out_path);
  out << write_solution_text(model, result);
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  SolveArgs base;
  std::string param;
  std::vector<double> values;
  std::string sim_dist;  // when set, each row is also simulated
  int sim_scenarios = 100;
  int sim_runs = 100;
  std::uint64_t sim_seed = 1;
  std::string sample_dist = "uniform:mubar,muhat";
  std::uint64_t sample_seed = 1;
  int sample_n = 100;
  int jobs = 1;
  std::string out_path;
};

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  ChargingDesign design;
  double cpu_s = 0.0;
  double feasibility_pct = std::numeric_limits<double>::quiet_NaN();
  std::vector<LineId> line_order;
};

SweepRow sweep_one(const NetworkInstance& base_inst, const SweepArgs& sa, double value) {
  SweepRow row;
  row.value = value;
  try {
    NetworkInstance inst = base_inst;
    SolveArgs a = sa.base;
    std::optional<EnergySampleSet> samples;

    if (sa.param == "gamma") {
      a.model = "bou";
      a.gamma = value;
    } else if (sa.param == "theta") {
      a.model = "drcc";
      a.theta = value;
    } else if (sa.param == "samples-n") {
      a.model = "drcc";
      const int n = static_cast<int>(std::lround(value));
      samples = sample_energy(inst, DistSpec::parse(sa.sample_dist), n, sa.sample_seed);
    } else if (sa.param == "fleet") {
      for (auto& line : inst.lines) line.fleet_size = static_cast<int>(std::lround(value));
    } else if (sa.param == "station-cost") {
      inst.costs.station_cost_ss *= value;
      inst.costs.station_cost_ff *= value;
    } else {
      throw CommandError(2, "unknown --param '" + sa.param + "'");
    }

    if (a.model == "drcc" && !samples) {
      if (!a.samples_path.empty()) samples = read_samples_csv(a.samples_path);
      else samples = sample_energy(inst, DistSpec::parse(sa.sample_dist), sa.sample_n,
                                   sa.sample_seed);
    }

    const SolveOutcome out = run_solve(inst, a, samples ? &*samples : nullptr);
    row.design = out.design;
    row.cpu_s = out.wall_s;
    for (const auto& line : inst.lines) row.line_order.push_back(line.id);

    if (!sa.sim_dist.empty()) {
      SimConfig cfg;
      cfg.dist = DistSpec::parse(sa.sim_dist);
      cfg.scenarios_per_run = sa.sim_scenarios;
      cfg.runs = sa.sim_runs;
      cfg.seed = sa.sim_seed;
      row.feasibility_pct = run_monte_carlo(row.design, inst, cfg, false).network_avg_pct;
    }
    row.ok = true;
  } catch (const CommandError& e) {
    row.error = e.what();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

int cmd_sweep(const SweepArgs& sa) {
  if (sa.values.empty()) throw CommandError(2, "--values must not be empty");
  const auto t0 = std::chrono::steady_clock::now();
  NetworkInstance inst = load_network(sa.base.network_path);

  std::vector<SweepRow> rows(sa.values.size());
  const int jobs = std::max(1, sa.jobs);
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= sa.values.size()) return;
      rows[i] = sweep_one(inst, sa, sa.values[i]);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ostringstream os;
  os << "param,value,line_id,objective_eur,station_cost_eur,battery_kwh,cpu_s,feasibility_pct,"
        "status\n";
  bool any_failed = false;
  for (const SweepRow& row : rows) {
    if (!row.ok) {
      any_failed = true;
      os << sa.param << "," << format_number(row.value) << ",,,,,,,error: " << row.error << "\n";
      continue;
    }
    for (LineId line : row.line_order) {
      os << sa.param << "," << format_number(row.value) << "," << line << ","
         << format_number(row.design.objective_eur) << ","
         << format_number(row.design.station_cost_eur) << ","
         << format_number(row.design.capacity_kwh.at(line)) << "," << format_number(row.cpu_s)
         << ",";
      if (std::isfinite(row.feasibility_pct)) os << format_number(row.feasibility_pct);
      os << ",ok\n";
    }
  }
  {
    std::ofstream out(sa.out_path);
    if (!out) throw CommandError(2, "cannot write " + sa.out_path);
    out << os.str();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest_for("sweep", raw_args, {{"sample_seed", sa.sample_seed}},
                     {sa.base.network_path}, {sa.out_path}, wall);
  if (any_failed) {
    std::cerr << "sweep: some rows failed\n";
    return 4;
  }
  return 0;
}

int cmd_validate(const std::string& network) {
  NetworkInstance inst = read_network_json(network);
  const auto problems = validate_network(inst);
  if (problems.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  for (const auto& p : problems) std::cout << p << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) raw_args.emplace_back(argv[i]);

  CLI::App app{"charging infrastructure design for battery-electric bus networks"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config mirroring the flags")
      ->envname("CID_CONFIG");

  // gen-grid
  auto* gg = app.add_subcommand("gen-grid", "generate a lattice test network");
  int gg_lines = 5, gg_stops = 5;
  std::uint64_t gg_seed = 1;
  std::string gg_out = "network.json";
  gg->add_option("--lines", gg_lines, "number of bus lines")->check(CLI::PositiveNumber);
  gg->add_option("--stops", gg_stops, "stops per line");
  gg->add_option("--seed", gg_seed, "generator seed");
  gg->add_option("--out", gg_out, "output network JSON")->required();

  // gen-rotterdam
  auto* gr = app.add_subcommand("gen-rotterdam", "emit the three-line surrogate network");
  std::string gr_out = "rotterdam.json";
  gr->add_option("--out", gr_out, "output network JSON")->required();

  // gen-samples
  auto* gs = app.add_subcommand("gen-samples", "draw energy consumption samples");
  std::string gs_network, gs_dist = "uniform:mubar,muhat", gs_out = "samples.csv";
  int gs_n = 100;
  std::uint64_t gs_seed = 1;
  gs->add_option("--network", gs_network, "network JSON")->required();
  gs->add_option("--dist", gs_dist, "sampling distribution");
  gs->add_option("--n", gs_n, "samples per segment");
  gs->add_option("--seed", gs_seed, "sampling seed");
  gs->add_option("--out", gs_out, "output CSV")->required();

  // solve
  auto* sv = app.add_subcommand("solve", "build and solve a design model");
  SolveArgs sa;
  sa.opt_network = sv->add_option("--network", sa.network_path, "network JSON");
  sa.opt_model = sv->add_option("--model", sa.model, "cid|bou|drcc");
  sa.opt_gamma = sv->add_option("--gamma", sa.gamma, "deviation budget (bou)");
  sv->add_option("--gamma-policy", sa.gamma_policy, "constant|linear");
  sa.opt_theta = sv->add_option("--theta", sa.theta, "displacement budget (drcc)");
  sa.opt_epsilon = sv->add_option("--epsilon", sa.epsilon, "violation probability (drcc)");
  sa.opt_big_m = sv->add_option("--big-m", sa.big_m, "big-M constant (drcc)");
  sa.opt_samples = sv->add_option("--samples", sa.samples_path, "sample CSV (drcc)");
  sa.opt_backend = sv->add_option("--backend", sa.backend, "bundled|external");
  sa.opt_solver_cmd =
      sv->add_option("--solver-cmd", sa.solver_cmd, "external command with {in} {out} [{time}]")
          ->envname("CID_SOLVER_CMD");
  sa.opt_time = sv->add_option("--time-limit", sa.time_limit, "seconds");
  sv->add_option("--max-binaries", sa.max_binaries, "bundled solver cap");
  sv->add_option("--out", sa.out_path, "output design JSON")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo trip feasibility of a design");
  std::string sim_network, sim_design, sim_dist = "uniform:mubar,muhat", sim_mode = "linear";
  std::string sim_out = "simulation.csv";
  int sim_scenarios = 100, sim_runs = 100;
  std::uint64_t sim_seed = 1;
  bool sim_serial = false;
  auto* sim_net_opt = sim->add_option("--network", sim_network, "network JSON");
  sim->add_option("--design", sim_design, "design JSON")->required();
  auto* sim_dist_opt = sim->add_option("--dist", sim_dist, "draw distribution");
  auto* sim_sc_opt = sim->add_option("--scenarios", sim_scenarios, "scenarios per run");
  auto* sim_runs_opt = sim->add_option("--runs", sim_runs, "independent runs");
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "simulation seed");
  sim->add_option("--mode", sim_mode, "linear|full-recharge-ff");
  sim->add_flag("--serial", sim_serial, "use the serial reference path");
  sim->add_option("--out", sim_out, "output CSV")->required();

  // lifetime
  auto* lt = app.add_subcommand("lifetime", "battery cycle-life analysis of a design");
  std::string lt_network, lt_design, lt_benchmark, lt_out = "lifetime.csv";
  lt->add_option("--network", lt_network, "network JSON")->required();
  lt->add_option("--design", lt_design, "design JSON")->required();
  lt->add_option("--benchmark", lt_benchmark, "benchmark design JSON for relative costs");
  lt->add_option("--out", lt_out, "output CSV")->required();

  // sweep
  auto* sw = app.add_subcommand("sweep", "solve (and optionally simulate) across a parameter");
  SweepArgs swa;
  std::string sw_values;
  sw->add_option("--param", swa.param, "gamma|theta|samples-n|fleet|station-cost")->required();
  sw->add_option("--values", sw_values, "comma-separated values")->required();
  auto* sw_net_opt = sw->add_option("--network", swa.base.network_path, "network JSON");
  sw->add_option("--model", swa.base.model, "base model for fleet/station-cost sweeps");
  sw->add_option("--gamma", swa.base.gamma, "fixed gamma");
  sw->add_option("--theta", swa.base.theta, "fixed theta");
  sw->add_option("--epsilon", swa.base.epsilon, "violation probability");
  sw->add_option("--big-m", swa.base.big_m, "big-M constant");
  sw->add_option("--samples", swa.base.samples_path, "sample CSV");
  sw->add_option("--sample-dist", swa.sample_dist, "distribution for generated samples");
  sw->add_option("--sample-n", swa.sample_n, "sample count when generating");
  sw->add_option("--sample-seed", swa.sample_seed, "seed when generating samples");
  sw->add_option("--backend", swa.base.backend, "bundled|external");
  sw->add_option("--solver-cmd", swa.base.solver_cmd, "external solver command")
      ->envname("CID_SOLVER_CMD");
  sw->add_option("--time-limit", swa.base.time_limit, "seconds per row");
  sw->add_option("--max-binaries", swa.base.max_binaries, "bundled solver cap");
  sw->add_option("--simulate-dist", swa.sim_dist, "simulate each row with this distribution");
  sw->add_option("--scenarios", swa.sim_scenarios, "scenarios per run");
  sw->add_option("--runs", swa.sim_runs, "simulation runs");
  sw->add_option("--seed", swa.sim_seed, "simulation seed");
  sw->add_option("--jobs", swa.jobs, "concurrent rows");
  sw->add_option("--out", swa.out_path, "output CSV")->required();

  // solve-lp (subprocess-shaped solver over the text bridge)
  auto* slp = app.add_subcommand("solve-lp", "solve an LP-format file, write a solution file");
  std::string slp_in, slp_out;
  double slp_time = 600.0;
  int slp_maxbin = 4096;
  slp->add_option("input", slp_in, "LP-format file")->required();
  slp->add_option("output", slp_out, "solution file")->required();
  slp->add_option("--time-limit", slp_time, "seconds");
  slp->add_option("--max-binaries", slp_maxbin, "binary cap");

  // validate
  auto* val = app.add_subcommand("validate", "check a network file");
  std::string val_network;
  val->add_option("--network", val_network, "network JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw CommandError(2, "cannot open config " + config_path);
      in >> config_json;
      config_default(sa.opt_network, "network", "path", sa.network_path);
      config_default(sw_net_opt, "network", "path", swa.base.network_path);
      config_default(sim_net_opt, "network", "path", sim_network);
      config_default(sa.opt_model, "model", "name", sa.model);
      config_default(sa.opt_backend, "model", "backend", sa.backend);
      config_default(sa.opt_solver_cmd, "model", "solver_cmd", sa.solver_cmd);
      config_default(sa.opt_time, "model", "time_limit", sa.time_limit);
      config_default(sa.opt_gamma, "uncertainty", "gamma", sa.gamma);
      config_default(sa.opt_theta, "uncertainty", "theta", sa.theta);
      config_default(sa.opt_epsilon, "uncertainty", "epsilon", sa.epsilon);
      config_default(sa.opt_big_m, "uncertainty", "big_m", sa.big_m);
      config_default(sa.opt_samples, "uncertainty", "samples", sa.samples_path);
      config_default(sim_dist_opt, "simulation", "dist", sim_dist);
      config_default(sim_sc_opt, "simulation", "scenarios", sim_scenarios);
      config_default(sim_runs_opt, "simulation", "runs", sim_runs);
      config_default(sim_seed_opt, "simulation", "seed", sim_seed);
    }

    if (gg->parsed()) return cmd_gen_grid(gg_lines, gg_stops, gg_seed, gg_out);
    if (gr->parsed()) return cmd_gen_rotterdam(gr_out);
    if (gs->parsed()) return cmd_gen_samples(gs_network, gs_dist, gs_n, gs_seed, gs_out);
    if (sv->parsed()) {
      if (sa.network_path.empty()) throw CommandError(2, "--network is required");
      return cmd_solve(sa);
    }
    if (sim->parsed()) {
      if (sim_network.empty()) throw CommandError(2, "--network is required");
      return cmd_simulate(sim_network, sim_design, sim_dist, sim_scenarios, sim_runs, sim_seed,
                          sim_mode, sim_serial, sim_out);
    }
    if (lt->parsed()) return cmd_lifetime(lt_network, lt_design, lt_benchmark, lt_out);
    if (sw->parsed()) {
      if (swa.base.network_path.empty()) throw CommandError(2, "--network is required");
      std::stringstream ss(sw_values);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
          swa.values.push_back(std::stod(tok));
        } catch (...) {
          throw CommandError(2, "bad value '" + tok + "' in --values");
        }
      }
      return cmd_sweep(swa);
    }
    if (slp->parsed()) return cmd_solve_lp(slp_in, slp_out, slp_time, slp_maxbin);
    if (val->parsed()) return cmd_validate(val_network);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
