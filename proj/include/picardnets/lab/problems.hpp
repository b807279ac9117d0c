#pragma once

// Semilinear heat equations with constant diffusion 𝔠 on R^d:
//   terminal form  ∂_t u + 𝔠Δu + f(u) = 0,  u(T,x) = g(x)
//   initial form   ∂_t u = 𝔠Δu + f(u),      u(0,x) = g(x)
// and their mapping onto the ½Δ terminal-value problem the estimator solves.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "picardnets/mlp/engine.hpp"
#include "picardnets/nn/network.hpp"

namespace picardnets::lab {

class NoReferenceError : public Error {
 public:
  using Error::Error;
};

class ResidualError : public Error {
 public:
  using Error::Error;
};

enum class Direction { Terminal, Initial };

struct Nonlinearity {
  enum class Kind { Zero, Linear, Custom };
  Kind kind = Kind::Zero;
  double lambda = 0.0;
  std::function<double(double)> custom;
  double lipschitz = 0.0;

  static Nonlinearity zero() { return {}; }
  static Nonlinearity linear(double lambda) { return {Kind::Linear, lambda, {}, std::abs(lambda)}; }
  static Nonlinearity from(std::function<double(double)> fn, double lipschitz) {
    return {Kind::Custom, 0.0, std::move(fn), lipschitz};
  }

  double operator()(double u) const;
  /// c·f
  Nonlinearity scaled(double c) const;
};

struct Datum {
  enum class Kind { Quadratic, GaussianBump, Custom };
  Kind kind = Kind::Quadratic;
  std::function<double(std::span<const double>)> custom;

  static Datum quadratic() { return {}; }
  /// exp(-‖x‖²)
  static Datum gaussian_bump() { return {Kind::GaussianBump, {}}; }
  static Datum from(std::function<double(std::span<const double>)> fn) { return {Kind::Custom, std::move(fn)}; }

  double operator()(std::span<const double> x) const;
};

struct PdeProblem {
  std::size_t d = 1;
  double T = 1.0;
  double c = 0.5;
  Nonlinearity f;
  Datum g;
  double a = 0.0;  // box [a,b]^d
  double b = 1.0;
  Direction direction = Direction::Terminal;

  void validate() const;

  /// g = ‖x‖², f(u) = λu, box [0,1]^d, terminal form.
  static PdeProblem heat_quadratic(std::size_t d, double c, double T, double lambda = 0.0);
};

/// Closed forms for g = ‖x‖² with f = 0 or f(u) = λu. In terminal form
///   u(t,x) = e^{λ(T-t)} (‖x‖² + 2𝔠d(T-t)),
/// and the initial form is the same function of T - t replaced by t.
double reference_solution(const PdeProblem& p, double t, std::span<const double> x);

/// PDE residual of reference_solution at (t,x) by central differences.
double reference_residual(const PdeProblem& p, double t, std::span<const double> x);

/// Evaluates reference_residual at `probes` points in [0,T] x box and throws
/// ResidualError if any exceeds `tol`. Returns the largest residual seen.
double require_reference_residual(const PdeProblem& p, std::size_t probes = 64, std::uint64_t seed = 1,
                                  double tol = 1e-6);

/// 𝔠 -> ½: horizon 2𝔠T, nonlinearity f/(2𝔠). A solution 𝓊 of the result gives
/// u(t,x) = 𝓊(2𝔠t, x) for the input problem.
PdeProblem time_rescale(const PdeProblem& p);
/// Inverse of time_rescale for a problem with 𝔠 = ½ and original coefficient `c`.
PdeProblem time_unrescale(const PdeProblem& rescaled, double c);
inline double rescaled_time(const PdeProblem& original, double t) { return 2.0 * original.c * t; }

/// Estimator configuration for u(t, ·): initial form is read at T - t, then
/// time and f are rescaled to the ½Δ generator.
struct EngineSetup {
  mlp::MlpConfig cfg;
  mlp::ProblemFns fns;
};
EngineSetup engine_setup(const PdeProblem& p, unsigned n, unsigned M, double t);

}  // namespace picardnets::lab
