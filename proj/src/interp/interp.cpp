#include "picardnets/interp/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "picardnets/nn/calculus.hpp"

namespace picardnets::interp {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw std::invalid_argument("grid needs at least two knots");
  for (std::size_t k = 1; k < points_.size(); ++k)
    if (!(points_[k - 1] < points_[k])) throw std::invalid_argument("grid knots must be strictly increasing");
}

Grid Grid::uniform(double lo, double hi, std::size_t segments) {
  if (segments == 0) throw std::invalid_argument("uniform grid needs at least one segment");
  std::vector<double> pts(segments + 1);
  for (std::size_t k = 0; k <= segments; ++k)
    pts[k] = lo + static_cast<double>(k) * (hi - lo) / static_cast<double>(segments);
  pts.back() = hi;
  return Grid(std::move(pts));
}

double lin_interp(const Grid& grid, std::span<const double> values, double x) {
  const auto& p = grid.points();
  if (values.size() != p.size()) throw ShapeError("lin_interp: value count differs from knot count");
  if (x < p.front()) return values.front();
  if (x >= p.back()) return values.back();
  // First knot strictly greater than x; x lies in [p[k-1], p[k]).
  const std::size_t k = static_cast<std::size_t>(std::upper_bound(p.begin(), p.end(), x) - p.begin());
  const double w = (x - p[k - 1]) / (p[k] - p[k - 1]);
  return values[k - 1] + w * (values[k] - values[k - 1]);
}

double empirical_modulus(const std::function<double(double)>& f, std::span<const double> samples, double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("empirical_modulus: h must be non-negative");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(samples.size());
  for (double x : samples) pts.emplace_back(x, f(x));
  std::sort(pts.begin(), pts.end());
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size() && pts[j].first - pts[i].first <= h; ++j)
      best = std::max(best, std::abs(pts[j].second - pts[i].second));
  return best;
}

namespace {

// A_{1,f_0} ∘ ⊕_k c_k ⊛ (𝔦_1 ∘ A_{α_k,β_k}); realizes f_0 + Σ c_k a(α_k x + β_k).
Network one_hidden_layer(double f0, std::span<const double> c, std::span<const double> slope,
                         std::span<const double> shift) {
  const Network unit = activation_wrapper(1);
  std::vector<Network> terms;
  terms.reserve(c.size());
  for (std::size_t k = 0; k < c.size(); ++k)
    terms.push_back(scalar_mul(c[k], compose(unit, affine_scalar(slope[k], shift[k]))));
  return compose(affine_scalar(1.0, f0), sum_same_depth(terms));
}

// c_k = K (f(x_{min(k+1,K)}) - 2 f(x_k) + f(x_{max(k-1,0)})) / (2b) on the grid x_k = -b + 2kb/K.
std::vector<double> uniform_kink_coefficients(const std::vector<double>& fx, double b) {
  const std::size_t K = fx.size() - 1;
  std::vector<double> c(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    const double right = fx[std::min(k + 1, K)];
    const double left = fx[k == 0 ? 0 : k - 1];
    c[k] = static_cast<double>(K) * (right - 2.0 * fx[k] + left) / (2.0 * b);
  }
  return c;
}

struct Sampled {
  ApproxGuarantee g;
  std::vector<double> knots;
  std::vector<double> fx;
  std::vector<double> c;
};

Sampled sample(const LipschitzFn& f, double q, double eps) {
  Sampled s{plan_approximation(f.lipschitz, q, eps), {}, {}, {}};
  s.knots.resize(s.g.K + 1);
  for (std::size_t k = 0; k <= s.g.K; ++k)
    s.knots[k] = -s.g.b + 2.0 * static_cast<double>(k) * s.g.b / static_cast<double>(s.g.K);
  s.fx.resize(s.knots.size());
  for (std::size_t k = 0; k < s.knots.size(); ++k) s.fx[k] = f.eval(s.knots[k]);
  s.c = uniform_kink_coefficients(s.fx, s.g.b);
  return s;
}

}  // namespace

Network interp_net_relu(const Grid& grid, std::span<const double> values) {
  const auto& x = grid.points();
  if (values.size() != x.size()) throw ShapeError("interp_net_relu: value count differs from knot count");
  const std::size_t K = grid.segments();
  std::vector<double> c(K + 1), slope(K + 1, 1.0), shift(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    const std::size_t up = std::min(k + 1, K);
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const double right = (values[up] - values[k]) / (x[up] - x[std::min(k, K - 1)]);
    const double left = (values[k] - values[lo]) / (x[std::max<std::size_t>(k, 1)] - x[lo]);
    c[k] = right - left;
    shift[k] = -x[k];
  }
  return one_hidden_layer(values[0], c, slope, shift);
}

Network interp_net(const Grid& grid, std::span<const double> values, const Activation& act, double sharpness) {
  switch (act.kind()) {
    case ActivationKind::ReLU:
      return interp_net_relu(grid, values);
    case ActivationKind::LeakyReLU: {
      const Network relu = interp_net_relu(grid, values);
      const auto& hidden = relu.layer(0);
      const auto& out = relu.layer(1);
      const std::size_t n = hidden.weights.rows;
      // max(z,0) = p a(z) + r a(-z)
      const double alpha = act.alpha();
      const double p = alpha < 1.0 ? 1.0 / (1.0 - alpha * alpha) : alpha / (alpha * alpha - 1.0);
      const double r = alpha < 1.0 ? alpha / (1.0 - alpha * alpha) : 1.0 / (alpha * alpha - 1.0);
      std::vector<double> h(2 * n), slope(2 * n), shift(2 * n);
      for (std::size_t k = 0; k < n; ++k) {
        h[k] = out.weights(0, k) * p;
        h[k + n] = out.weights(0, k) * r;
        slope[k] = hidden.weights(k, 0);
        slope[k + n] = -hidden.weights(k, 0);
        shift[k] = hidden.bias[k];
        shift[k + n] = -hidden.bias[k];
      }
      return one_hidden_layer(out.bias[0], h, slope, shift);
    }
    case ActivationKind::Softplus: {
      if (!(sharpness > 0.0)) throw std::invalid_argument("softplus sharpness must be positive");
      const Network relu = interp_net_relu(grid, values);
      const auto& hidden = relu.layer(0);
      const auto& out = relu.layer(1);
      const std::size_t n = hidden.weights.rows;
      std::vector<double> h(n), slope(n), shift(n);
      for (std::size_t k = 0; k < n; ++k) {
        h[k] = out.weights(0, k) / sharpness;
        slope[k] = sharpness * hidden.weights(k, 0);
        shift[k] = sharpness * hidden.bias[k];
      }
      return one_hidden_layer(out.bias[0], h, slope, shift);
    }
    case ActivationKind::RePU:
      break;
  }
  throw std::invalid_argument("interpolation nets need a piecewise-linear or softplus activation");
}

double size_scale(double lipschitz, double q, double eps) {
  const double e = q / (q - 1.0);
  return std::pow(std::max(1.0, 2.0 * lipschitz), e) * std::pow(eps, -e);
}

ApproxGuarantee plan_approximation(double lipschitz, double q, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("accuracy must lie in (0,1]");
  if (!(q > 1.0) || !std::isfinite(q)) throw std::invalid_argument("growth exponent must exceed 1");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) throw std::invalid_argument("Lipschitz constant must be finite and non-negative");
  ApproxGuarantee g;
  g.eps = eps;
  g.q = q;
  g.lipschitz = lipschitz;
  g.b = std::pow(std::max(1.0, 2.0 * lipschitz) / eps, 1.0 / (q - 1.0));
  const double ratio = 2.0 * lipschitz * g.b / eps;
  g.K = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio)));
  return g;
}

ApproxNet approx_net_relu(const LipschitzFn& f, double q, double eps) {
  Sampled s = sample(f, q, eps);
  std::vector<double> slope(s.c.size(), 1.0), shift(s.c.size());
  for (std::size_t k = 0; k < shift.size(); ++k) shift[k] = -s.knots[k];
  Network net = one_hidden_layer(s.fx[0], s.c, slope, shift);
  const double scale = size_scale(f.lipschitz, q, eps);
  s.g.width = net.dim_at(1);
  s.g.params = net.param_count();
  s.g.width_bound = 2.0 * scale + 1.0;
  s.g.params_bound = 12.0 * scale;
  return {std::move(net), s.g};
}

ApproxNet approx_net_leaky(const LipschitzFn& f, double q, double eps, double alpha) {
  if (!(alpha >= 0.0) || alpha == 1.0) throw std::invalid_argument("leaky slope must lie in [0,inf) without 1");
  Sampled s = sample(f, q, eps);
  const std::size_t n = s.c.size();
  const double sgn = std::abs(1.0 - alpha) / (1.0 - alpha);
  const double denom = (1.0 - alpha) * (1.0 - alpha * alpha);
  std::vector<double> h(2 * n), slope(2 * n), shift(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    h[k] = s.c[k] * std::abs(1.0 - alpha) * alpha / denom;
    h[k + n] = s.c[k] * std::abs(1.0 - alpha) / denom;
    slope[k] = -sgn;
    slope[k + n] = sgn;
    shift[k] = sgn * s.knots[k];
    shift[k + n] = -sgn * s.knots[k];
  }
  Network net = one_hidden_layer(s.fx[0], h, slope, shift);
  const double scale = size_scale(f.lipschitz, q, eps);
  s.g.width = net.dim_at(1);
  s.g.params = net.param_count();
  s.g.width_bound = 4.0 * scale + 2.0;
  s.g.params_bound = 24.0 * scale;
  return {std::move(net), s.g};
}

ApproxNet approx_net_softplus(const LipschitzFn& f, double q, double eps) {
  Sampled s = sample(f, q, eps);
  const double K = static_cast<double>(s.g.K);
  const double beta = std::max(2.0, 2.0 * K * K * f.lipschitz * std::numbers::ln2 / eps);
  const std::size_t n = s.c.size();
  std::vector<double> h(n), slope(n, beta), shift(n);
  for (std::size_t k = 0; k < n; ++k) {
    h[k] = s.c[k] / beta;
    shift[k] = -beta * s.knots[k];
  }
  Network net = one_hidden_layer(s.fx[0], h, slope, shift);
  const double scale = size_scale(f.lipschitz, q, eps);
  s.g.width = net.dim_at(1);
  s.g.params = net.param_count();
  s.g.width_bound = 2.0 * scale + 1.0;
  s.g.params_bound = 12.0 * scale;
  s.g.error_factor = 2.0;
  s.g.beta = beta;
  return {std::move(net), s.g};
}

}  // namespace picardnets::interp
