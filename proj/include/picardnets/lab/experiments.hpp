#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "picardnets/lab/problems.hpp"

namespace picardnets::lab {

struct Level {
  unsigned n = 0;
  unsigned M = 1;
};

/// "n1:m1,n2:m2,..."
std::vector<Level> parse_levels(const std::string& text);

struct ConvergenceOptions {
  double p = 2.0;
  std::size_t eval_points = 256;
  std::uint64_t points_seed = 0;
  double t = 0.0;
  unsigned workers = 1;
  /// Record wall-clock milliseconds; off writes 0 so files are byte-stable.
  bool timing = true;
  /// Use the reference itself as the approximation.
  bool self_test = false;
};

struct ConvergenceRow {
  unsigned n = 0;
  unsigned M = 1;
  std::uint64_t seed = 0;
  double p = 2.0;
  double error = 0.0;
  double wall_ms = 0.0;
};

/// One row per (level, seed), in input order. Errors are empirical Lᵖ errors
/// against reference_solution over `eval_points` uniform points of the box.
/// The reference must pass require_reference_residual first, and every
/// sample set must satisfy error at p/2 <= error at p.
std::vector<ConvergenceRow> convergence_experiment(const PdeProblem& problem, const std::vector<Level>& levels,
                                                   const std::vector<std::uint64_t>& seeds,
                                                   const ConvergenceOptions& opts);

/// Lᵖ norm of reference_solution over the experiment's evaluation points.
double reference_lp_norm(const PdeProblem& problem, const ConvergenceOptions& opts);

/// Header `n,M,seed,p,error,wall_ms`, doubles in shortest round-trip form.
std::string to_csv(const std::vector<ConvergenceRow>& rows);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace picardnets::lab
