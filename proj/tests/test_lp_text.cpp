#include <doctest.h>

#include <fstream>

#include "cid/builders.hpp"
#include "cid/lp_text.hpp"
#include "cid/solve.hpp"
#include "helpers.hpp"

using namespace cid;

namespace {

MilpModel tiny_model() {
  MilpModel m;
  const VarId x = m.add_var("x", VarRole::Placement, VarKind::Binary, 0.0, 1.0);
  const VarId z = m.add_var("z", VarRole::Capacity, VarKind::Continuous, 0.0, 20.0);
  m.add_objective_term(x, 5.0);
  m.add_objective_term(z, 2.0);
  m.add_row("need", {{z, 1.0}, {x, 4.0}}, RowSense::GE, 6.0);
  return m;
}

}  // namespace

TEST_CASE("write_lp_text emits labeled rows and sections") {
  MilpModel m;
  m.add_var("x", VarRole::Capacity, VarKind::Continuous, 0.0, 3.0);
  m.add_row("the_row", {{0, 1.5}}, RowSense::LE, 3.0);
  const std::string text = write_lp_text(m);  // objective intentionally empty
  CHECK(text.find("the_row: 1.5 x <= 3") != std::string::npos);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("write -> parse -> write is a fixpoint") {
  const NetworkInstance inst = cid::testing::toy_line({2.0, 2.0});
  const MilpModel model = build_cid(inst);
  const std::string first = write_lp_text(model);
  const MilpModel reparsed = parse_lp_text(first);
  const std::string second = write_lp_text(reparsed);
  CHECK(first == second);

  // and the reparsed model solves to the same optimum
  const SolveResult a = solve_bundled(model);
  const SolveResult b = solve_bundled(reparsed);
  REQUIRE(a.status == SolveStatus::Optimal);
  REQUIRE(b.status == SolveStatus::Optimal);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

TEST_CASE("binaries are declared in their own section") {
  const std::string text = write_lp_text(tiny_model());
  const auto bin_at = text.find("Binaries");
  REQUIRE(bin_at != std::string::npos);
  CHECK(text.find(" x", bin_at) != std::string::npos);
  const MilpModel reparsed = parse_lp_text(text);
  CHECK(reparsed.vars[0].kind == VarKind::Binary);
  CHECK(reparsed.vars[1].kind == VarKind::Continuous);
}

TEST_CASE("unnamed variables cannot be written") {
  MilpModel m;
  m.add_var("", VarRole::Capacity, VarKind::Continuous, 0.0, 1.0);
  CHECK_THROWS_AS(write_lp_text(m), std::invalid_argument);
}

TEST_CASE("malformed LP text names the offending line") {
  try {
    parse_lp_text("Minimize\n obj: 1 x\nSubject To\n bad row without colon\nEnd\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("solution text round trips through the parser") {
  const MilpModel m = tiny_model();
  SolveResult r = solve_bundled(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  const SolveResult back = parse_solution_text(write_solution_text(m, r), m);
  CHECK(back.status == SolveStatus::Optimal);
  CHECK(back.objective == doctest::Approx(r.objective));
  CHECK(back.values[0] == doctest::Approx(r.values[0]));
  CHECK(back.values[1] == doctest::Approx(r.values[1]));
}

TEST_CASE("solution parser reports malformed lines and missing variables") {
  const MilpModel m = tiny_model();
  try {
    parse_solution_text("=status= optimal\n=obj= 1\nx 1 extra\n", m);
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  try {
    parse_solution_text("=status= optimal\n=obj= 1\nx 1\n", m);  // z missing
    FAIL("expected a missing-variable error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("z") != std::string::npos);
  }
  CHECK_THROWS(parse_solution_text("x 1\n", m));  // no status header
}

TEST_CASE("infeasible solver reports parse without values") {
  const MilpModel m = tiny_model();
  const SolveResult r = parse_solution_text("=status= infeasible\n", m);
  CHECK(r.status == SolveStatus::Infeasible);
}

TEST_CASE("solve_external runs a stub command and parses its output") {
  const MilpModel m = tiny_model();
  const std::string dir = cid::testing::temp_dir("lptext");

  SolveResult expect = solve_bundled(m);
  const std::string canned = dir + "/canned.sol";
  {
    std::ofstream out(canned);
    out << write_solution_text(m, expect);
  }
  const SolveResult got = solve_external(m, "cp " + canned + " {out}", 10.0);
  CHECK(got.status == SolveStatus::Optimal);
  CHECK(got.objective == doctest::Approx(expect.objective));

  // infeasible pass-through
  {
    std::ofstream out(canned);
    out << "=status= infeasible\n";
  }
  CHECK(solve_external(m, "cp " + canned + " {out}", 10.0).status == SolveStatus::Infeasible);

  // command that writes nothing -> structured failure
  CHECK_THROWS(solve_external(m, "true {in} {out}", 10.0));

  // malformed template
  CHECK_THROWS_AS(solve_external(m, "cp a b", 10.0), std::invalid_argument);
}
