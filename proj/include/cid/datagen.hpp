#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cid/network.hpp"

namespace cid {

// Sampling distribution for per-segment energy draws. Support endpoints and
// the mode are expressed relative to a segment's (mean, max) statistics:
// each anchor is coef * {0 | mean | max}, and range_scale multiplies the
// realized support (used for out-of-range stress draws, e.g. 1.2 * max).
struct DistAnchor {
  enum class Base { Zero, Mean, Max };
  Base base = Base::Zero;
  double coef = 1.0;

  double realize(double mean_kwh, double max_kwh) const {
    switch (base) {
      case Base::Zero: return 0.0;
      case Base::Mean: return coef * mean_kwh;
      case Base::Max: return coef * max_kwh;
    }
    return 0.0;
  }
};

struct DistSpec {
  enum class Kind { UniformLowHigh, TriSymmetric, TriRight, TriLeft, TriCustom, Degenerate };

  Kind kind = Kind::Degenerate;
  DistAnchor lo;                 // support lower end
  DistAnchor hi;                 // support upper end
  DistAnchor mode;               // TriCustom only; other kinds derive it
  double range_scale = 1.0;

  // One draw for a segment with the given statistics.
  double sample(class Rng& rng, double mean_kwh, double max_kwh) const;

  std::string to_string() const;
  static DistSpec parse(const std::string& text);

  static DistSpec degenerate();
  // Uniform on [mean, max]; the default design-sample distribution.
  static DistSpec uniform_mean_to_max();
  // Uniform on [0, max].
  static DistSpec uniform_zero_to_max();
  static DistSpec tri(Kind kind);  // TriSymmetric/TriRight/TriLeft on [0, max]
};

// N observed consumption draws per segment per line.
struct EnergySampleSet {
  struct LineSamples {
    LineId line = 0;
    // values[segment][j]; segment i covers the hop into visit i+1.
    std::vector<std::vector<double>> values;
  };
  std::vector<LineSamples> lines;
  int n = 0;
  std::uint64_t seed = 0;
  std::string dist;

  const LineSamples* find(LineId id) const;
};

// 10x10 lattice instance; lines share one depot node, stops are drawn without
// replacement and ordered by a seeded proximity walk from the depot. Mean
// consumption is 1.3 kWh per km of Euclidean lattice distance; the deviation
// endpoint is mean*(1+w) with w uniform in [0,1]; dwell is N(20 s, var 4)
// truncated at 5 s.
NetworkInstance generate_grid_network(int n_lines, int stops_per_line, std::uint64_t seed,
                                      const CostParams& costs);

// Independent seeded draws for every (line, segment); identical n across
// segments of a line.
EnergySampleSet sample_energy(const NetworkInstance& inst, const DistSpec& dist, int n,
                              std::uint64_t seed);

// Three-line surrogate of a city bus network: two circular intra-city lines
// (15 and 11 distinct stops), one one-way intercity line (28 stops), a shared
// start terminal, three stops shared between lines 33 and 40, fleet of 10
// buses per line. Distances are synthetic and seeded; real geography is not
// reproduced, which the metadata records.
NetworkInstance rotterdam_fixture();

CostParams default_cost_params();

}  // namespace cid
