#pragma once

// Line-oriented problem files: a section header in brackets, then
// `key = value` lines. Example:
//
//   [space]
//   dim = 2
//   norm = linf
//   [domain]
//   type = box
//   lo = -3, -3
//   hi = 3, 3
//   [linear]
//   row1 = -2, 7
//   row2 = 7, -2
//   [map]
//   f1 = 4*x2*cos(x1 + 2*x2) - 3
//   f2 = 3*x1*sin(x1 - 3*x2) - 2
//   [growth]
//   alpha = 4
//   beta = 3
//
// Sections: space (dim, norm, p), domain (type box|ball|hilbert-cube with
// lo/hi, center/radius, or truncation), map (f1..fn), optional linear
// (row1..rown), optional ode (T, R, lipschitz), optional growth (alpha,
// beta). `#` starts a comment. ODE problems may omit [domain]; the ball
// of radius R is implied.

#include <optional>
#include <string>

#include "bpm/expr.hpp"
#include "bpm/geometry.hpp"
#include "bpm/linalg.hpp"
#include "bpm/pairing.hpp"

namespace bpm {

struct OdeSection {
  double T = 0.0;
  double R = 0.0;
  double lipschitz = 0.0;
};

struct GrowthSection {
  double alpha = 0.0;
  double beta = 0.0;
};

struct ProblemFile {
  std::string path;
  std::string digest;  // fnv1a-64 of the file bytes, hex
  Space space;
  std::optional<Domain> domain;
  MapSpec map;
  std::vector<std::string> map_sources;
  std::optional<mat> linear;
  std::optional<OdeSection> ode;
  std::optional<GrowthSection> growth;

  // Domain, or the ball implied by the ode section.
  Domain effective_domain() const;
  // The map whose zero the solvers target: x + L^-1 g(x) when a linear
  // section is present (so zeroes solve L x + g(x) = 0), the raw map
  // otherwise. Throws when L is singular.
  MapSpec solve_map() const;
};

// Parses and validates; throws parse_error with a line-number message.
ProblemFile load_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text,
                               const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace bpm
