#include <doctest.h>

#include <cmath>
#include <set>

#include "cid/datagen.hpp"
#include "cid/io.hpp"
#include "cid/rng.hpp"
#include "helpers.hpp"

using namespace cid;

namespace {

std::string dump(const NetworkInstance& inst) {
  const std::string path = cid::testing::temp_dir("datagen") + "/net.json";
  write_network_json(inst, path);
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("generate_grid_network is deterministic under a fixed seed") {
  const NetworkInstance a = generate_grid_network(5, 5, 42, default_cost_params());
  const NetworkInstance b = generate_grid_network(5, 5, 42, default_cost_params());
  CHECK(dump(a) == dump(b));
  const NetworkInstance c = generate_grid_network(5, 5, 43, default_cost_params());
  CHECK(dump(a) != dump(c));
}

TEST_CASE("generate_grid_network shapes and validates") {
  const NetworkInstance inst = generate_grid_network(5, 5, 42, default_cost_params());
  CHECK(inst.stops.size() == 100);
  REQUIRE(inst.lines.size() == 5);
  for (const LineSpec& line : inst.lines) {
    std::set<StopId> distinct;
    for (const Visit& v : line.visits) distinct.insert(v.stop);
    CHECK(distinct.size() == 5);
    CHECK(line.circular);
    CHECK(line.visits.front().stop == line.visits.back().stop);
  }
  CHECK(validate_network(inst).empty());

  // all lines share one depot
  std::set<StopId> depots;
  for (const LineSpec& line : inst.lines) depots.insert(line.visits.front().stop);
  CHECK(depots.size() == 1);
}

TEST_CASE("generate_grid_network at 25 stops per line validates") {
  const NetworkInstance inst = generate_grid_network(5, 25, 7, default_cost_params());
  CHECK(validate_network(inst).empty());
}

TEST_CASE("generate_grid_network rejects more stops than grid nodes") {
  CHECK_THROWS_AS(generate_grid_network(1, 101, 1, default_cost_params()),
                  std::invalid_argument);
}

TEST_CASE("generated deviations stay within one mean") {
  const NetworkInstance inst = generate_grid_network(4, 10, 11, default_cost_params());
  for (const LineSpec& line : inst.lines)
    for (std::size_t i = 1; i < line.visits.size(); ++i) {
      const SegmentStat& s = line.visits[i].segment;
      CHECK(s.max_kwh >= s.mean_kwh - 1e-12);
      CHECK(s.max_kwh <= 2.0 * s.mean_kwh + 1e-9);
      CHECK(s.mean_kwh == doctest::Approx(1.3 * s.distance_km));
    }
}

TEST_CASE("dwell times are truncated at five seconds") {
  const NetworkInstance inst = generate_grid_network(5, 25, 3, default_cost_params());
  for (const LineSpec& line : inst.lines)
    for (const Visit& v : line.visits) CHECK(v.dwell_s >= 5.0);
}

TEST_CASE("sample_energy: degenerate distribution returns the mean") {
  const NetworkInstance inst = cid::testing::toy_line({2.0, 3.0}, {4.0, 6.0});
  const EnergySampleSet set = sample_energy(inst, DistSpec::degenerate(), 3, 9);
  for (const auto& seg : set.lines[0].values)
    for (double v : seg) CHECK((v == doctest::Approx(2.0) || v == doctest::Approx(3.0)));
  CHECK(set.lines[0].values[0][0] == doctest::Approx(2.0));
  CHECK(set.lines[0].values[1][2] == doctest::Approx(3.0));
}

TEST_CASE("sample_energy moments match the analytic means") {
  const NetworkInstance inst = cid::testing::toy_line({2.0}, {5.0});
  const int n = 100000;

  const EnergySampleSet uni = sample_energy(inst, DistSpec::uniform_zero_to_max(), n, 1);
  double mean = 0.0;
  for (double v : uni.lines[0].values[0]) mean += v;
  mean /= n;
  CHECK(mean == doctest::Approx(5.0 / 2.0).epsilon(0.01));

  const EnergySampleSet left = sample_energy(inst, DistSpec::tri(DistSpec::Kind::TriLeft), n, 2);
  mean = 0.0;
  for (double v : left.lines[0].values[0]) mean += v;
  mean /= n;
  CHECK(mean == doctest::Approx(2.0 * 5.0 / 3.0).epsilon(0.01));

  // symmetric triangular on [0, max]: mean max/2, sd within 3 standard errors
  const EnergySampleSet sym =
      sample_energy(inst, DistSpec::tri(DistSpec::Kind::TriSymmetric), n, 3);
  double m1 = 0.0, m2 = 0.0;
  for (double v : sym.lines[0].values[0]) {
    m1 += v;
    m2 += v * v;
  }
  m1 /= n;
  m2 /= n;
  const double var = 5.0 * 5.0 * (1.0 + 1.0 + 0.25 - 0.5 - 0.5) / 18.0;  // tri variance
  const double se = std::sqrt(var / n);
  CHECK(std::abs(m1 - 2.5) <= 3.0 * se);
  (void)m2;
}

TEST_CASE("sample_energy is deterministic per seed") {
  const NetworkInstance inst = cid::testing::toy_line({2.0, 3.0}, {4.0, 6.0});
  const EnergySampleSet a = sample_energy(inst, DistSpec::uniform_mean_to_max(), 50, 5);
  const EnergySampleSet b = sample_energy(inst, DistSpec::uniform_mean_to_max(), 50, 5);
  CHECK(a.lines[0].values == b.lines[0].values);
  const EnergySampleSet c = sample_energy(inst, DistSpec::uniform_mean_to_max(), 50, 6);
  CHECK(a.lines[0].values != c.lines[0].values);
}

TEST_CASE("DistSpec grammar round trips") {
  for (const char* text : {"uniform:0,muhat", "tri:0,muhat,mid", "tri:0,muhat,0",
                           "tri:0,muhat,muhat", "uniform:mubar,muhat", "degenerate",
                           "uniform:0,muhat;scale=1.2", "tri:0,muhat,0.8*mubar"}) {
    const DistSpec d = DistSpec::parse(text);
    CHECK(DistSpec::parse(d.to_string()).to_string() == d.to_string());
  }
  CHECK(DistSpec::parse("tri:0,muhat,0").kind == DistSpec::Kind::TriRight);
  CHECK(DistSpec::parse("tri:0,muhat,muhat").kind == DistSpec::Kind::TriLeft);
  CHECK(DistSpec::parse("tri:0,muhat,mid").kind == DistSpec::Kind::TriSymmetric);
  CHECK(DistSpec::parse("uniform:0,muhat;scale=1.2").range_scale == doctest::Approx(1.2));
  CHECK_THROWS(DistSpec::parse("gauss:0,1"));
  CHECK_THROWS(DistSpec::parse("tri:0,muhat"));
  CHECK_THROWS(DistSpec::parse("uniform:0,muhat;scale=-1"));
}

TEST_CASE("range scale stretches the support") {
  const NetworkInstance inst = cid::testing::toy_line({2.0}, {4.0});
  DistSpec d = DistSpec::parse("uniform:0,muhat;scale=1.2");
  const EnergySampleSet set = sample_energy(inst, d, 20000, 4);
  double max_seen = 0.0;
  for (double v : set.lines[0].values[0]) max_seen = std::max(max_seen, v);
  CHECK(max_seen > 4.0);         // beyond the unscaled endpoint
  CHECK(max_seen <= 4.0 * 1.2);  // within the scaled one
}

TEST_CASE("rotterdam_fixture matches its published shape") {
  const NetworkInstance inst = rotterdam_fixture();
  CHECK(validate_network(inst).empty());
  REQUIRE(inst.lines.size() == 3);

  const LineSpec* l33 = nullptr;
  const LineSpec* l38 = nullptr;
  const LineSpec* l40 = nullptr;
  for (const LineSpec& line : inst.lines) {
    if (line.id == 33) l33 = &line;
    if (line.id == 38) l38 = &line;
    if (line.id == 40) l40 = &line;
  }
  REQUIRE((l33 && l38 && l40));

  auto distinct = [](const LineSpec& line) {
    std::set<StopId> s;
    for (const Visit& v : line.visits) s.insert(v.stop);
    return s;
  };
  CHECK(distinct(*l33).size() == 15);
  CHECK(distinct(*l38).size() == 11);
  CHECK(distinct(*l40).size() == 28);

  CHECK(l33->circular);
  CHECK(l38->circular);
  CHECK_FALSE(l40->circular);

  CHECK(l33->fleet_size == 10);
  CHECK(l38->fleet_size == 10);
  CHECK(l40->fleet_size == 10);

  // shared start terminal, three stops shared between lines 33 and 40
  CHECK(l33->visits.front().stop == l38->visits.front().stop);
  CHECK(l33->visits.front().stop == l40->visits.front().stop);
  std::set<StopId> s33 = distinct(*l33);
  std::set<StopId> s40 = distinct(*l40);
  std::set<StopId> shared;
  for (StopId s : s33)
    if (s40.count(s) && s != l33->visits.front().stop) shared.insert(s);
  CHECK(shared.size() == 3);
  // line 33 serves the shared stops in both directions
  for (StopId s : shared) {
    int count = 0;
    for (const Visit& v : l33->visits)
      if (v.stop == s) ++count;
    CHECK(count == 2);
  }

  CHECK(inst.metadata.find("surrogate") != std::string::npos);
}
