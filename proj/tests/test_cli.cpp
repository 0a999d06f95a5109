// End-to-end checks through the built binary. The test runner exports
// CID_CLI with the executable path; without it these cases are skipped.

#include <doctest.h>

#include <fstream>

#include "cid/io.hpp"
#include "helpers.hpp"

using namespace cid;
using cid::testing::cli_path;
using cid::testing::run_command;
using cid::testing::temp_dir;

namespace {

#define REQUIRE_CLI()                                    \
  if (!cli_path()) {                                     \
    MESSAGE("CID_CLI not set; skipping CLI test case"); \
    return;                                              \
  }

std::string q(const std::string& s) { return "'" + s + "'"; }

void write_toy_network(const std::string& path) {
  write_network_json(cid::testing::toy_line({2.0, 2.0}, {4.0, 4.0}), path);
}

}  // namespace

TEST_CASE("gen-grid emits a valid network and prints a summary") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  const auto res = run_command(cli + " gen-grid --lines 5 --stops 5 --seed 42 --out " + dir +
                               "/grid.json");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("lines=5") != std::string::npos);
  const NetworkInstance inst = read_network_json(dir + "/grid.json");
  CHECK(validate_network(inst).empty());
  CHECK(std::ifstream(dir + "/grid.json.manifest.json").good());
}

TEST_CASE("gen-grid rejects invalid arguments with exit code 2") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  CHECK(run_command(cli + " gen-grid --lines 0 --stops 5 --out " + dir + "/x.json").exit_code ==
        2);
  CHECK(run_command(cli + " gen-grid --lines 1 --stops 101 --out " + dir + "/x.json").exit_code ==
        2);
}

TEST_CASE("solve on the worked example reproduces the pinned objective") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  const auto res = run_command(cli + " solve --network " + dir + "/toy.json --model cid --out " +
                               dir + "/design.json");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("status=optimal") != std::string::npos);
  const ChargingDesign d = read_design_json(dir + "/design.json");
  CHECK(d.objective_eur == doctest::Approx(11666.6667).epsilon(1e-6));
}

TEST_CASE("bou with zero budget matches cid through the CLI") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  REQUIRE(run_command(cli + " solve --network " + dir + "/toy.json --model cid --out " + dir +
                      "/cid.json")
              .exit_code == 0);
  REQUIRE(run_command(cli + " solve --network " + dir + "/toy.json --model bou --gamma 0 --out " +
                      dir + "/bou.json")
              .exit_code == 0);
  CHECK(read_design_json(dir + "/cid.json").objective_eur ==
        doctest::Approx(read_design_json(dir + "/bou.json").objective_eur).epsilon(1e-6));
}

TEST_CASE("drcc without samples exits with a usage error") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  CHECK(run_command(cli + " solve --network " + dir + "/toy.json --model drcc --out " + dir +
                    "/x.json")
            .exit_code == 2);
}

TEST_CASE("gen-samples plus drcc solve works end to end") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  REQUIRE(run_command(cli + " gen-samples --network " + dir + "/toy.json --n 6 --seed 4 --out " +
                      dir + "/samples.csv")
              .exit_code == 0);
  const auto res = run_command(cli + " solve --network " + dir +
                               "/toy.json --model drcc --theta 0.2 --epsilon 0.34 --samples " +
                               dir + "/samples.csv --out " + dir + "/drcc.json");
  CHECK(res.exit_code == 0);
  const ChargingDesign d = read_design_json(dir + "/drcc.json");
  CHECK(d.objective_eur > 0.0);
}

TEST_CASE("simulate validates the distribution grammar") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  REQUIRE(run_command(cli + " solve --network " + dir + "/toy.json --model cid --out " + dir +
                      "/design.json")
              .exit_code == 0);
  CHECK(run_command(cli + " simulate --network " + dir + "/toy.json --design " + dir +
                    "/design.json --dist " + q("nonsense:1,2") + " --out " + dir + "/sim.csv")
            .exit_code == 2);
  // the out-of-range stress grammar is accepted
  CHECK(run_command(cli + " simulate --network " + dir + "/toy.json --design " + dir +
                    "/design.json --dist " + q("uniform:0,muhat;scale=1.2") +
                    " --scenarios 20 --runs 2 --out " + dir + "/sim.csv")
            .exit_code == 0);
}

TEST_CASE("simulate on degenerate draws reports full feasibility") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  REQUIRE(run_command(cli + " solve --network " + dir + "/toy.json --model cid --out " + dir +
                      "/design.json")
              .exit_code == 0);
  const auto res = run_command(cli + " simulate --network " + dir + "/toy.json --design " + dir +
                               "/design.json --dist degenerate --scenarios 50 --runs 3 --out " +
                               dir + "/sim.csv");
  CHECK(res.exit_code == 0);
  std::ifstream in(dir + "/sim.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "line_id,feasibility_pct,runs,scenarios");
  CHECK(row == "0,100,3,50");
}

TEST_CASE("lifetime with itself as benchmark reports zero differences") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  REQUIRE(run_command(cli + " solve --network " + dir + "/toy.json --model cid --out " + dir +
                      "/design.json")
              .exit_code == 0);
  const auto res = run_command(cli + " lifetime --network " + dir + "/toy.json --design " + dir +
                               "/design.json --benchmark " + dir + "/design.json --out " + dir +
                               "/life.csv");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("network average relative cost per cycle: 0%") != std::string::npos);
  CHECK(res.stdout_text.find("coeff=1331") != std::string::npos);
  CHECK(res.stdout_text.find("exponent=1.825") != std::string::npos);
  std::ifstream in(dir + "/life.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "line_id,capacity_kwh,n_cycle,cost_per_cycle_eur,rel_cost_per_cycle_pct");
}

TEST_CASE("sweep rejects an empty value list and orders gamma objectives") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  CHECK(run_command(cli + " sweep --param gamma --values '' --network " + dir +
                    "/toy.json --out " + dir + "/sweep.csv")
            .exit_code == 2);

  const auto res = run_command(cli + " sweep --param gamma --values 0,0.5,1 --network " + dir +
                               "/toy.json --out " + dir + "/sweep.csv");
  CHECK(res.exit_code == 0);
  std::ifstream in(dir + "/sweep.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "param,value,line_id,objective_eur,station_cost_eur,battery_kwh,cpu_s,feasibility_pct,"
        "status");
  double last = -1.0;
  std::string row;
  while (std::getline(in, row)) {
    std::istringstream is(row);
    std::string cell;
    std::getline(is, cell, ',');  // param
    std::getline(is, cell, ',');  // value
    std::getline(is, cell, ',');  // line
    std::getline(is, cell, ',');  // objective
    const double obj = std::stod(cell);
    CHECK(obj >= last - 1e-9);
    last = obj;
  }
}

TEST_CASE("solve-lp serves as a subprocess solver for the external backend") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  const auto direct = run_command(cli + " solve --network " + dir + "/toy.json --model cid" +
                                  " --backend bundled --out " + dir + "/a.json");
  REQUIRE(direct.exit_code == 0);
  const auto bridged = run_command(cli + " solve --network " + dir + "/toy.json --model cid" +
                                   " --backend external --solver-cmd " +
                                   q(cli + " solve-lp {in} {out} --time-limit {time}") +
                                   " --out " + dir + "/b.json");
  REQUIRE(bridged.exit_code == 0);
  CHECK(read_design_json(dir + "/a.json").objective_eur ==
        doctest::Approx(read_design_json(dir + "/b.json").objective_eur).epsilon(1e-9));
}

TEST_CASE("external backend without a command is a usage error") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  CHECK(run_command("env -u CID_SOLVER_CMD " + cli + " solve --network " + dir +
                    "/toy.json --model cid --backend external --out " + dir + "/x.json")
            .exit_code == 2);
}

TEST_CASE("config file supplies defaults that flags can override") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  write_toy_network(dir + "/toy.json");
  {
    std::ofstream cfg(dir + "/cfg.json");
    cfg << R"({"network":{"path":")" << dir << R"(/toy.json"},"uncertainty":{"gamma":1.0}})";
  }
  const auto res = run_command(cli + " --config " + dir + "/cfg.json solve --model bou --out " +
                               dir + "/design.json");
  REQUIRE(res.exit_code == 0);
  CHECK(read_design_json(dir + "/design.json").objective_eur ==
        doctest::Approx(17500.0).epsilon(1e-6));
  // explicit flag wins over the file
  const auto res2 = run_command(cli + " --config " + dir + "/cfg.json solve --model bou" +
                                " --gamma 0 --out " + dir + "/design0.json");
  REQUIRE(res2.exit_code == 0);
  CHECK(read_design_json(dir + "/design0.json").objective_eur ==
        doctest::Approx(11666.6667).epsilon(1e-6));
}

TEST_CASE("validate prints diagnostics for a broken file") {
  REQUIRE_CLI();
  const std::string dir = temp_dir("cli");
  const std::string cli = cli_path();
  NetworkInstance broken = cid::testing::toy_line({2.0});
  broken.costs.soc_lower = 0.9;
  write_network_json(broken, dir + "/broken.json");
  const auto res = run_command(cli + " validate --network " + dir + "/broken.json");
  CHECK(res.exit_code == 2);
  CHECK(res.stdout_text.find("soc") != std::string::npos);
}
