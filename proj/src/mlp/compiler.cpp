#include "picardnets/mlp/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "picardnets/nn/calculus.hpp"

namespace picardnets::mlp {

void CompileInputs::validate() const {
  cfg.validate();
  if (g.input_dim() != cfg.d || g.output_dim() != 1)
    throw ShapeError("datum net must map R^" + std::to_string(cfg.d) + " to R, got dims " + to_string(g.dims()));
  if (f.input_dim() != 1 || f.output_dim() != 1)
    throw ShapeError("nonlinearity net must map R to R, got dims " + to_string(f.dims()));
  if (j.depth() != 2 || j.input_dim() != 1 || j.output_dim() != 1)
    throw ShapeError("identity net must have dims (1,w,1), got " + to_string(j.dims()));
  if (oracle.dim() != cfg.d) throw ShapeError("oracle dimension differs from the problem dimension");
  require_identity_net(j, activation);
}

bool SizeReport::within_bounds() const {
  // The real-valued bounds are compared with one rounding step of slack.
  const double slack = 1.0 + 4.0 * std::numeric_limits<double>::epsilon();
  return depth <= bound_depth && static_cast<double>(max_width) <= std::floor(bound_width * slack) &&
         static_cast<double>(params) <= std::floor(bound_params * slack);
}

std::string SizeReport::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["dims"] = dims.entries();
  j["depth"] = depth;
  j["max_width"] = max_width;
  j["params"] = params;
  j["bound_depth"] = bound_depth;
  j["bound_width"] = bound_width;
  j["bound_params"] = bound_params;
  j["within_bounds"] = within_bounds();
  return j.dump(indent);
}

SizeReport predicted_bounds(const CompileInputs& in) {
  const std::size_t dj = in.j.dim_at(1);
  const std::size_t base = std::max({dj, in.f.max_width(), in.g.max_width()});
  const double growth = std::pow(3.0 * in.cfg.M, static_cast<double>(in.cfg.n));
  SizeReport r;
  r.bound_depth = std::max(dj, in.g.depth()) + static_cast<std::size_t>(in.cfg.n) * in.f.hidden_count();
  r.bound_width = static_cast<double>(base) * growth;
  r.bound_params = 2.0 * static_cast<double>(r.bound_depth) * static_cast<double>(base) * static_cast<double>(base) *
                   growth * growth;
  return r;
}

SizeReport size_report(const CompileInputs& in, const Network& compiled) {
  SizeReport r = predicted_bounds(in);
  r.dims = compiled.dims();
  r.depth = compiled.depth();
  r.max_width = compiled.max_width();
  r.params = compiled.param_count();
  return r;
}

namespace {

std::int64_t ipow(unsigned base, unsigned e) {
  std::int64_t r = 1;
  for (unsigned k = 0; k < e; ++k) r *= base;
  return r;
}

struct Compiler {
  const CompileInputs& in;

  Network shift(const Vector& w) const { return affine(Matrix::identity(in.cfg.d), w); }

  Network zero_net() const { return affine(Matrix(1, in.cfg.d), Vector{0.0}); }

  Network operator()(unsigned n, double t, const ThetaPath& theta) const {
    if (n == 0) return zero_net();
    const double T = in.cfg.T;
    const std::int64_t mn = ipow(in.cfg.M, n);

    std::vector<Network> datum_terms;
    datum_terms.reserve(static_cast<std::size_t>(mn));
    for (std::int64_t k = 1; k <= mn; ++k) {
      const Vector w = brownian_increment(in.oracle, theta.child(0, -k), T - t);
      datum_terms.push_back(scalar_mul(1.0 / static_cast<double>(mn), compose(in.g, shift(w))));
    }

    std::vector<Network> plus_terms, minus_terms;
    for (unsigned i = 0; i < n; ++i) {
      const std::int64_t mi = ipow(in.cfg.M, n - i);
      std::vector<Network> plus_k, minus_k;
      for (std::int64_t k = 1; k <= mi; ++k) {
        const ThetaPath path = theta.child(i, k);
        const double u = uniform_time(in.oracle, path, t, T);
        const Network a = shift(brownian_increment(in.oracle, path, u - t));
        plus_k.push_back(compose(compose(in.f, (*this)(i, u, path)), a));
        const unsigned lower = i == 0 ? 0 : i - 1;
        minus_k.push_back(
            compose(compose(in.f, (*this)(lower, u, theta.child(-static_cast<std::int64_t>(i), k))), a));
      }
      const double weight = (T - t) / static_cast<double>(mi);
      plus_terms.push_back(scalar_mul(weight, sum_diff_depth(plus_k, in.j)));
      minus_terms.push_back(scalar_mul(i >= 1 ? -weight : 0.0, sum_diff_depth(minus_k, in.j)));
    }

    const std::vector<Network> blocks{sum_same_depth(datum_terms), sum_diff_depth(plus_terms, in.j),
                                      sum_diff_depth(minus_terms, in.j)};
    return sum_diff_depth(blocks, in.j);
  }
};

}  // namespace

Network compile_mlp(const CompileInputs& inputs, const ThetaPath& theta, double t) {
  inputs.validate();
  if (!(t >= 0.0 && t <= inputs.cfg.T)) throw std::invalid_argument("compile time must lie in [0,T]");
  const SizeReport bounds = predicted_bounds(inputs);
  if (bounds.bound_params > kMaxBoundParams && !inputs.allow_large)
    throw BoundError("parameter bound " + std::to_string(bounds.bound_params) +
                     " exceeds the compile limit; set allow_large to override");
  return Compiler{inputs}(inputs.cfg.n, t, theta);
}

EquivalenceReport verify_equivalence(const CompileInputs& inputs, const Network& compiled, const ThetaPath& theta,
                                     double t, std::span<const Vector> probes, double tol) {
  MlpConfig cfg = inputs.cfg;
  cfg.t = t;
  const Activation act = inputs.activation;
  const Network& fnet = inputs.f;
  const Network& gnet = inputs.g;
  const ProblemFns fns{[&](double v) { return realize_scalar(fnet, act, v); },
                       [&](std::span<const double> x) { return realize(gnet, act, x)[0]; }};
  EquivalenceReport rep;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const double net_value = realize(compiled, act, probes[p])[0];
    const double mlp_value = mlp_eval(cfg, probes[p], theta, fns, inputs.oracle);
    rep.net_values.push_back(net_value);
    rep.mlp_values.push_back(mlp_value);
    const double r = std::abs(net_value - mlp_value) / (1.0 + std::abs(mlp_value));
    if (!(r <= rep.max_residual) || p == 0) {
      rep.max_residual = r;
      rep.worst_probe = p;
    }
  }
  if (!(rep.max_residual <= tol) && !probes.empty())
    throw EquivalenceError("compiled net differs from the estimator at probe " + std::to_string(rep.worst_probe) +
                           ": net " + std::to_string(rep.net_values[rep.worst_probe]) + ", estimator " +
                           std::to_string(rep.mlp_values[rep.worst_probe]) + ", relative residual " +
                           std::to_string(rep.max_residual));
  return rep;
}

EquivalenceReport verify_equivalence(const CompileInputs& inputs, const ThetaPath& theta, double t,
                                     std::span<const Vector> probes, double tol) {
  return verify_equivalence(inputs, compile_mlp(inputs, theta, t), theta, t, probes, tol);
}

namespace {

bool row_is_zero(const Matrix& m, std::size_t i) {
  for (std::size_t j = 0; j < m.cols; ++j)
    if (m(i, j) != 0.0) return false;
  return true;
}

bool col_is_zero(const Matrix& m, std::size_t j) {
  for (std::size_t i = 0; i < m.rows; ++i)
    if (m(i, j) != 0.0) return false;
  return true;
}

// Removes the hidden neurons of layer k (the output of layers[k]) not in `keep`.
void drop_neurons(std::vector<Layer>& layers, std::size_t k, const std::vector<bool>& keep) {
  Layer& cur = layers[k];
  Layer& next = layers[k + 1];
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < keep.size(); ++j)
    if (keep[j]) kept.push_back(j);
  Matrix w(kept.size(), cur.weights.cols);
  Vector b(kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    for (std::size_t c = 0; c < cur.weights.cols; ++c) w(r, c) = cur.weights(kept[r], c);
    b[r] = cur.bias[kept[r]];
  }
  Matrix nw(next.weights.rows, kept.size());
  for (std::size_t r = 0; r < next.weights.rows; ++r)
    for (std::size_t c = 0; c < kept.size(); ++c) nw(r, c) = next.weights(r, kept[c]);
  cur.weights = std::move(w);
  cur.bias = std::move(b);
  next.weights = std::move(nw);
}

}  // namespace

Network prune_zero_blocks(const Network& net, const Activation& act) {
  std::vector<Layer> layers = net.layers();
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k + 1 < layers.size(); ++k) {
      const std::size_t width = layers[k].weights.rows;
      std::vector<bool> keep(width, true);
      std::size_t removed = 0;
      for (std::size_t j = 0; j < width; ++j) {
        if (col_is_zero(layers[k + 1].weights, j) || row_is_zero(layers[k].weights, j)) {
          keep[j] = false;
          ++removed;
        }
      }
      if (removed == 0) continue;
      if (removed == width) {
        keep[0] = true;
        if (--removed == 0) continue;
      }
      for (std::size_t j = 0; j < width; ++j) {
        if (keep[j] || col_is_zero(layers[k + 1].weights, j)) continue;
        const double a = act(layers[k].bias[j]);
        for (std::size_t r = 0; r < layers[k + 1].weights.rows; ++r)
          layers[k + 1].bias[r] += layers[k + 1].weights(r, j) * a;
      }
      drop_neurons(layers, k, keep);
      changed = true;
    }
  }
  return Network(std::move(layers));
}

}  // namespace picardnets::mlp
