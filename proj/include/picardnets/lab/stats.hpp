#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "picardnets/nn/network.hpp"

namespace picardnets::lab {

struct ErrorEstimate {
  double p = 2.0;
  double value = 0.0;
  /// Delta-method standard error: (1/p) m^{1/p-1} · sd(|Δ|^p)/sqrt(N) with m the mean p-th moment.
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Points uniform on [a,b]^d, drawn from the keyed oracle under its box-point
/// stream. Point j depends only on (seed, j).
std::vector<Vector> box_points(std::uint64_t seed, std::size_t count, std::size_t d, double a, double b);

/// (mean |diff|^p)^{1/p} of the given pointwise differences.
ErrorEstimate lp_norm(std::span<const double> diffs, double p);

/// Monte Carlo estimate of (E|u_ref(X) - approx(X)|^p)^{1/p}, X uniform on [a,b]^d.
ErrorEstimate lp_error(const std::function<double(std::span<const double>)>& u_ref,
                       const std::function<double(std::span<const double>)>& approx, double a, double b,
                       std::size_t d, double p, std::size_t n_samples, std::uint64_t seed);

/// E‖W_s‖^{2γ} = (2s)^γ ∏_{k<γ} (d/2 + k) for a d-dimensional Brownian motion.
double brownian_moment(std::size_t d, double s, unsigned gamma);

struct MomentCheck {
  std::size_t d = 0;
  double s = 0.0;
  unsigned gamma = 0;
  std::size_t samples = 0;
  double empirical = 0.0;
  double expected = 0.0;
  double std_error = 0.0;
  /// |empirical - expected| <= max(3 std_error, 0.03 expected)
  bool pass = false;
};

/// Empirical 2γ-th norm moment of brownian_increment over paths (0), (1), ...
/// Requires γ in {1,2,3} and at least 10^4 samples.
MomentCheck brownian_moment_check(std::size_t d, double s, unsigned gamma, std::size_t n_samples, std::uint64_t seed);

}  // namespace picardnets::lab
