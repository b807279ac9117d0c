#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "picardnets/mlp/oracle.hpp"
#include "picardnets/nn/network.hpp"

namespace picardnets::mlp {

struct MlpConfig {
  unsigned n = 0;
  unsigned M = 1;
  double T = 1.0;
  double t = 0.0;
  std::size_t d = 1;

  /// Throws std::invalid_argument unless M >= 1, d >= 1 and 0 <= t <= T.
  void validate() const;
};

struct ProblemFns {
  std::function<double(double)> f;
  std::function<double(std::span<const double>)> g;
};

/// U_n^θ(t, x) for the generator ½Δ with terminal datum g:
///
///   U_n = 1/M^n Σ_{k=1}^{M^n} g(x + W^{(θ,0,-k)}_{T-t})
///       + Σ_{i=0}^{n-1} (T-t)/M^{n-i} Σ_{k=1}^{M^{n-i}}
///           [ f(U_i^{(θ,i,k)}) - [i>=1] f(U_{i-1}^{(θ,-i,k)}) ](𝒰_t^{(θ,i,k)}, x + W^{(θ,i,k)}_{𝒰-t})
///
/// with U_0 = 0. Both f-evaluations of one (i,k) summand share the time and
/// Brownian sample drawn at path (θ,i,k).
double mlp_eval(const MlpConfig& cfg, std::span<const double> x, const ThetaPath& theta, const ProblemFns& fns,
                const RandomOracle& oracle);

/// values[s][p] = mlp_eval at points[p] with RandomOracle(seeds[s], d) and the root path.
/// Work units are spread over `workers` threads (0 = hardware concurrency); the
/// result does not depend on the worker count.
std::vector<std::vector<double>> mlp_estimate_batch(const MlpConfig& cfg, std::span<const Vector> points,
                                                    std::span<const std::uint64_t> seeds, const ProblemFns& fns,
                                                    unsigned workers = 1);

/// Runs job(0..count-1) on `workers` threads. Exceptions are rethrown on the caller.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job);

}  // namespace picardnets::mlp
