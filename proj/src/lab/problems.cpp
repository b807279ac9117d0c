#include "picardnets/lab/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "picardnets/mlp/oracle.hpp"

namespace picardnets::lab {

double Nonlinearity::operator()(double u) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Linear:
      return lambda * u;
    case Kind::Custom:
      return custom(u);
  }
  return 0.0;
}

Nonlinearity Nonlinearity::scaled(double c) const {
  switch (kind) {
    case Kind::Zero:
      return *this;
    case Kind::Linear:
      return linear(c * lambda);
    case Kind::Custom: {
      auto fn = custom;
      return from([fn, c](double u) { return c * fn(u); }, std::abs(c) * lipschitz);
    }
  }
  return *this;
}

double Datum::operator()(std::span<const double> x) const {
  double sq = 0.0;
  switch (kind) {
    case Kind::Quadratic:
      for (double v : x) sq += v * v;
      return sq;
    case Kind::GaussianBump:
      for (double v : x) sq += v * v;
      return std::exp(-sq);
    case Kind::Custom:
      return custom(x);
  }
  return 0.0;
}

void PdeProblem::validate() const {
  if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("diffusion coefficient must be positive");
  if (!(a < b)) throw std::invalid_argument("box needs a < b");
  if (f.kind == Nonlinearity::Kind::Custom && !f.custom) throw std::invalid_argument("custom nonlinearity is empty");
  if (g.kind == Datum::Kind::Custom && !g.custom) throw std::invalid_argument("custom datum is empty");
}

PdeProblem PdeProblem::heat_quadratic(std::size_t d, double c, double T, double lambda) {
  PdeProblem p;
  p.d = d;
  p.c = c;
  p.T = T;
  p.f = lambda == 0.0 ? Nonlinearity::zero() : Nonlinearity::linear(lambda);
  p.validate();
  return p;
}

double reference_solution(const PdeProblem& p, double t, std::span<const double> x) {
  p.validate();
  if (p.g.kind != Datum::Kind::Quadratic || p.f.kind == Nonlinearity::Kind::Custom)
    throw NoReferenceError("closed forms exist only for g = |x|^2 with f = 0 or f linear");
  if (x.size() != p.d) throw ShapeError("reference_solution: point has the wrong dimension");
  const double remaining = p.direction == Direction::Terminal ? p.T - t : t;
  double sq = 0.0;
  for (double v : x) sq += v * v;
  const double lambda = p.f.kind == Nonlinearity::Kind::Linear ? p.f.lambda : 0.0;
  return std::exp(lambda * remaining) * (sq + 2.0 * p.c * static_cast<double>(p.d) * remaining);
}

double reference_residual(const PdeProblem& p, double t, std::span<const double> x) {
  constexpr double ht = 1e-4;
  constexpr double hx = 1e-3;
  const double u = reference_solution(p, t, x);
  const double dt = (reference_solution(p, t + ht, x) - reference_solution(p, t - ht, x)) / (2.0 * ht);
  Vector y(x.begin(), x.end());
  double lap = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double keep = y[j];
    y[j] = keep + hx;
    const double up = reference_solution(p, t, y);
    y[j] = keep - hx;
    const double down = reference_solution(p, t, y);
    y[j] = keep;
    lap += (up - 2.0 * u + down) / (hx * hx);
  }
  const double generator = p.c * lap + p.f(u);
  return std::abs(p.direction == Direction::Terminal ? dt + generator : dt - generator);
}

double require_reference_residual(const PdeProblem& p, std::size_t probes, std::uint64_t seed, double tol) {
  const mlp::RandomOracle oracle(seed, p.d);
  double worst = 0.0;
  Vector x(p.d);
  for (std::size_t s = 0; s < probes; ++s) {
    const mlp::ThetaPath path{static_cast<std::int64_t>(s)};
    // Interior times keep the time stencil inside [0,T].
    const double t = p.T * (0.01 + 0.98 * oracle.uniform(path, mlp::SampleKind::Custom, 0));
    for (std::size_t j = 0; j < p.d; ++j)
      x[j] = p.a + (p.b - p.a) * oracle.uniform(path, mlp::SampleKind::Custom, j + 1);
    const double r = reference_residual(p, t, x);
    worst = std::max(worst, r);
    if (!(r <= tol))
      throw ResidualError("reference solution fails the PDE residual check: residual " + std::to_string(r) +
                          " at t = " + std::to_string(t));
  }
  return worst;
}

PdeProblem time_rescale(const PdeProblem& p) {
  p.validate();
  PdeProblem r = p;
  r.T = 2.0 * p.c * p.T;
  r.f = p.f.scaled(1.0 / (2.0 * p.c));
  r.c = 0.5;
  return r;
}

PdeProblem time_unrescale(const PdeProblem& rescaled, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("diffusion coefficient must be positive");
  if (rescaled.c != 0.5) throw std::invalid_argument("time_unrescale expects a problem with coefficient 1/2");
  PdeProblem p = rescaled;
  p.T = rescaled.T / (2.0 * c);
  p.f = rescaled.f.scaled(2.0 * c);
  p.c = c;
  return p;
}

EngineSetup engine_setup(const PdeProblem& p, unsigned n, unsigned M, double t) {
  p.validate();
  if (!(t >= 0.0 && t <= p.T)) throw std::invalid_argument("evaluation time must lie in [0,T]");
  const double terminal_t = p.direction == Direction::Terminal ? t : p.T - t;
  const PdeProblem r = time_rescale(p);
  EngineSetup s;
  s.cfg.n = n;
  s.cfg.M = M;
  s.cfg.T = r.T;
  s.cfg.t = std::min(r.T, rescaled_time(p, terminal_t));
  s.cfg.d = p.d;
  s.fns.f = [f = r.f](double u) { return f(u); };
  s.fns.g = [g = r.g](std::span<const double> x) { return g(x); };
  return s;
}

}  // namespace picardnets::lab
