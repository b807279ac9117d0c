#include "picardnets/nn/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace picardnets {

Network compose(const Network& outer, const Network& inner) {
  if (outer.input_dim() != inner.output_dim())
    throw CompositionError("compose: outer input width " + std::to_string(outer.input_dim()) +
                           " differs from inner output width " + std::to_string(inner.output_dim()));
  // All four depth cases share one shape: inner layers 1..𝔏-1, the merged
  // layer (W_1 𝒲_𝔏, W_1 ℬ_𝔏 + B_1), then outer layers 2..L. When either side
  // has depth one the corresponding run of untouched layers is empty.
  const auto& in_layers = inner.layers();
  const auto& out_layers = outer.layers();
  std::vector<Layer> layers;
  layers.reserve(in_layers.size() + out_layers.size() - 1);
  for (std::size_t k = 0; k + 1 < in_layers.size(); ++k) layers.push_back(in_layers[k]);

  const Layer& first = out_layers.front();
  const Layer& last = in_layers.back();
  Layer merged{matmul(first.weights, last.weights), matvec(first.weights, last.bias)};
  for (std::size_t i = 0; i < merged.bias.size(); ++i) merged.bias[i] += first.bias[i];
  layers.push_back(std::move(merged));

  for (std::size_t k = 1; k < out_layers.size(); ++k) layers.push_back(out_layers[k]);
  return Network(std::move(layers));
}

Network power(const Network& phi, std::size_t n) {
  if (phi.input_dim() != phi.output_dim())
    throw CompositionError("power: network must have equal input and output widths");
  Network result = affine(Matrix::identity(phi.output_dim()), Vector(phi.output_dim(), 0.0));
  for (std::size_t i = 0; i < n; ++i) result = compose(phi, result);
  return result;
}

Network extend(std::size_t target_depth, const Network& psi, const Network& phi) {
  if (phi.depth() > target_depth)
    throw DepthError("extend: network depth " + std::to_string(phi.depth()) + " exceeds target " +
                     std::to_string(target_depth));
  if (psi.input_dim() != psi.output_dim() || phi.output_dim() != psi.input_dim())
    throw CompositionError("extend: padding net must be square and match the output width");
  return compose(power(psi, target_depth - phi.depth()), phi);
}

Network parallelize(std::span<const Network> nets) {
  if (nets.empty()) throw std::invalid_argument("parallelize: no networks");
  const std::size_t depth = nets.front().depth();
  for (const auto& n : nets)
    if (n.depth() != depth) throw DepthError("parallelize: depths differ");
  if (nets.size() == 1) return nets.front();

  std::vector<Layer> layers;
  layers.reserve(depth);
  for (std::size_t k = 0; k < depth; ++k) {
    std::size_t rows = 0, cols = 0;
    for (const auto& n : nets) {
      rows += n.layer(k).weights.rows;
      cols += n.layer(k).weights.cols;
    }
    Layer out{Matrix(rows, cols), Vector()};
    out.bias.reserve(rows);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& n : nets) {
      const Layer& l = n.layer(k);
      for (std::size_t i = 0; i < l.weights.rows; ++i)
        for (std::size_t j = 0; j < l.weights.cols; ++j) out.weights(r0 + i, c0 + j) = l.weights(i, j);
      out.bias.insert(out.bias.end(), l.bias.begin(), l.bias.end());
      r0 += l.weights.rows;
      c0 += l.weights.cols;
    }
    layers.push_back(std::move(out));
  }
  return Network(std::move(layers));
}

Network affine(Matrix w, Vector b) { return Network({Layer{std::move(w), std::move(b)}}); }

Network affine_scalar(double w, double b) { return affine(Matrix(1, 1, w), Vector{b}); }

Network fan_in(std::size_t m, std::size_t n) {
  Matrix w(m, m * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < m; ++i) w(i, c * m + i) = 1.0;
  return affine(std::move(w), Vector(m, 0.0));
}

Network fan_out(std::size_t m, std::size_t n) {
  Matrix w(m * n, m);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < m; ++i) w(c * m + i, i) = 1.0;
  return affine(std::move(w), Vector(m * n, 0.0));
}

namespace {

void check_same_interface(std::span<const Network> nets, const char* who) {
  if (nets.empty()) throw std::invalid_argument(std::string(who) + ": no networks");
  const auto& u = nets.front();
  for (const auto& n : nets) {
    if (n.depth() != u.depth()) throw DepthError(std::string(who) + ": depths differ");
    if (n.input_dim() != u.input_dim() || n.output_dim() != u.output_dim())
      throw CompositionError(std::string(who) + ": input/output widths differ");
  }
}

}  // namespace

Network sum_same_depth(std::span<const Network> nets) {
  check_same_interface(nets, "sum_same_depth");
  const std::size_t depth = nets.front().depth();
  const std::size_t in = nets.front().input_dim();
  const std::size_t out = nets.front().output_dim();

  if (depth == 1) {
    // S ∘ P ∘ T collapses to (Σ W_k, Σ B_k).
    Layer sum{Matrix(out, in), Vector(out, 0.0)};
    for (const auto& n : nets) {
      const Layer& l = n.layer(0);
      for (std::size_t i = 0; i < l.weights.data.size(); ++i) sum.weights.data[i] += l.weights.data[i];
    }
    for (const auto& n : nets)
      for (std::size_t i = 0; i < out; ++i) sum.bias[i] += n.layer(0).bias[i];
    return Network({std::move(sum)});
  }

  std::vector<Layer> layers;
  layers.reserve(depth);

  // First layer: P's first block-diagonal applied to the fan-out = vertical stack.
  {
    std::size_t rows = 0;
    for (const auto& n : nets) rows += n.layer(0).weights.rows;
    Layer first{Matrix(rows, in), Vector()};
    first.bias.reserve(rows);
    std::size_t r0 = 0;
    for (const auto& n : nets) {
      const Layer& l = n.layer(0);
      std::copy(l.weights.data.begin(), l.weights.data.end(), first.weights.data.begin() + r0 * in);
      first.bias.insert(first.bias.end(), l.bias.begin(), l.bias.end());
      r0 += l.weights.rows;
    }
    layers.push_back(std::move(first));
  }

  // Hidden-to-hidden layers stay block diagonal.
  for (std::size_t k = 1; k + 1 < depth; ++k) {
    std::vector<Network> slice;
    slice.reserve(nets.size());
    for (const auto& n : nets) slice.push_back(Network({n.layer(k)}));
    layers.push_back(parallelize(slice).layer(0));
  }

  // Last layer: the fan-in applied to P's last block-diagonal = horizontal concatenation.
  {
    std::size_t cols = 0;
    for (const auto& n : nets) cols += n.layer(depth - 1).weights.cols;
    Layer last{Matrix(out, cols), Vector(out, 0.0)};
    std::size_t c0 = 0;
    for (const auto& n : nets) {
      const Layer& l = n.layer(depth - 1);
      for (std::size_t i = 0; i < out; ++i)
        for (std::size_t j = 0; j < l.weights.cols; ++j) last.weights(i, c0 + j) = l.weights(i, j);
      c0 += l.weights.cols;
    }
    for (const auto& n : nets)
      for (std::size_t i = 0; i < out; ++i) last.bias[i] += n.layer(depth - 1).bias[i];
    layers.push_back(std::move(last));
  }
  return Network(std::move(layers));
}

Network sum_same_depth_literal(std::span<const Network> nets) {
  check_same_interface(nets, "sum_same_depth_literal");
  const std::size_t n = nets.size();
  return compose(fan_in(nets.front().output_dim(), n), compose(parallelize(nets), fan_out(nets.front().input_dim(), n)));
}

Network scalar_mul(double lambda, const Network& phi) {
  const std::size_t o = phi.output_dim();
  return compose(affine(Matrix::identity(o, lambda), Vector(o, 0.0)), phi);
}

Network linear_combination_same(std::span<const double> h, std::span<const double> t, std::span<const Vector> shifts,
                                std::span<const Network> nets) {
  if (nets.empty()) throw std::invalid_argument("linear_combination_same: no networks");
  if (h.size() != nets.size() || t.size() != nets.size() || (!shifts.empty() && shifts.size() != nets.size()))
    throw ShapeError("linear_combination_same: coefficient counts differ from network count");
  const LayerDims dims = nets.front().dims();
  const std::size_t in = nets.front().input_dim();
  std::vector<Network> terms;
  terms.reserve(nets.size());
  for (std::size_t k = 0; k < nets.size(); ++k) {
    if (nets[k].dims() != dims) throw ShapeError("linear_combination_same: networks must share dims");
    Vector b = shifts.empty() ? Vector(in, 0.0) : shifts[k];
    if (b.size() != in) throw ShapeError("linear_combination_same: shift length differs from input width");
    terms.push_back(scalar_mul(h[k], compose(nets[k], affine(Matrix::identity(in, t[k]), std::move(b)))));
  }
  return sum_same_depth(terms);
}

void require_identity_net(const Network& j, const Activation& act) {
  if (j.hidden_count() != 1 || j.input_dim() != 1 || j.output_dim() != 1)
    throw SemanticError("identity net must have dims (1,w,1), got " + to_string(j.dims()));
  const double range = act.kind() == ActivationKind::RePU ? 5.0 : 1e6;
  const double tol = act.kind() == ActivationKind::RePU ? 1e-8 : 1e-9;
  constexpr int kProbes = 32;
  for (int i = 0; i < kProbes; ++i) {
    // Half the probes spread across the range, half clustered around zero.
    const double s = -1.0 + 2.0 * i / (kProbes - 1);
    const double x = (i % 2 == 0) ? range * s : range * s * s * s * 1e-3;
    const double y = realize_scalar(j, act, x);
    if (!(std::abs(y - x) <= tol * std::max(1.0, std::abs(x))))
      throw SemanticError("identity net fails at x=" + std::to_string(x) + " under " + act.tag() +
                          " (got " + std::to_string(y) + ")");
  }
}

namespace {

void check_diff_depth_inputs(std::span<const Network> nets, const Network& j) {
  if (nets.empty()) throw std::invalid_argument("sum_diff_depth: no networks");
  if (j.hidden_count() != 1) throw SemanticError("sum_diff_depth: identity net must have exactly one hidden layer");
  if (j.input_dim() != j.output_dim()) throw CompositionError("sum_diff_depth: identity net must be square");
  const std::size_t in = nets.front().input_dim();
  for (const auto& n : nets) {
    if (n.input_dim() != in) throw CompositionError("sum_diff_depth: input widths differ");
    if (n.output_dim() != j.input_dim())
      throw CompositionError("sum_diff_depth: output width differs from the identity net width");
  }
}

}  // namespace

Network sum_diff_depth(std::span<const Network> nets, const Network& j, const std::optional<Activation>& act) {
  check_diff_depth_inputs(nets, j);
  if (act) require_identity_net(j, *act);
  std::size_t depth = 0;
  for (const auto& n : nets) depth = std::max(depth, n.depth());
  std::vector<Network> extended;
  extended.reserve(nets.size());
  for (const auto& n : nets) extended.push_back(n.depth() == depth ? n : extend(depth, j, n));
  return sum_same_depth(extended);
}

Network linear_combination_diff(std::span<const double> h, std::span<const Vector> shifts,
                                std::span<const Network> nets, const Network& j,
                                const std::optional<Activation>& act) {
  if (h.size() != nets.size() || (!shifts.empty() && shifts.size() != nets.size()))
    throw ShapeError("linear_combination_diff: coefficient counts differ from network count");
  check_diff_depth_inputs(nets, j);
  const std::size_t in = nets.front().input_dim();
  std::vector<Network> terms;
  terms.reserve(nets.size());
  for (std::size_t k = 0; k < nets.size(); ++k) {
    Vector b = shifts.empty() ? Vector(in, 0.0) : shifts[k];
    if (b.size() != in) throw ShapeError("linear_combination_diff: shift length differs from input width");
    terms.push_back(scalar_mul(h[k], compose(nets[k], affine(Matrix::identity(in), std::move(b)))));
  }
  return sum_diff_depth(terms, j, act);
}

Network activation_wrapper(std::size_t n) {
  return Network({Layer{Matrix::identity(n), Vector(n, 0.0)}, Layer{Matrix::identity(n), Vector(n, 0.0)}});
}

}  // namespace picardnets
