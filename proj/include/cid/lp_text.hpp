#pragma once

#include <string>

#include "cid/milp.hpp"

namespace cid {

// Canonical LP-format text: Minimize / Subject To / Bounds / Binaries / End,
// variables by label, coefficients with 12 significant digits. Emission is
// deterministic and a write -> parse -> write round trip is byte-identical.
std::string write_lp_text(const MilpModel& model);

// Parses text produced by write_lp_text (or an equivalent subset).
// Throws std::invalid_argument with the offending line on malformed input.
MilpModel parse_lp_text(const std::string& text);

// Solution-file grammar: one "name value" pair per line, plus "=status="
// and "=obj=" headers ("=bound=" optional). Example:
//   =status= optimal
//   =obj= 11666.67
//   z_k0 6.6667
SolveResult parse_solution_text(const std::string& text, const MilpModel& model);
std::string write_solution_text(const MilpModel& model, const SolveResult& result);

// Writes LP text, runs the configured solver command as a subprocess and
// parses the solution file it leaves behind. The template must contain the
// {in} and {out} placeholders; {time} expands to the time limit in seconds.
SolveResult solve_external(const MilpModel& model, const std::string& cmd_template,
                           double time_s);

}  // namespace cid
