#pragma once

// One-dimensional approximation of Lipschitz functions by one-hidden-layer
// networks built from linear interpolation on a grid.

#include <functional>
#include <span>
#include <vector>

#include "picardnets/nn/network.hpp"

namespace picardnets::interp {

/// Strictly increasing knots x_0 < ... < x_K with K >= 1.
class Grid {
 public:
  explicit Grid(std::vector<double> points);
  static Grid uniform(double lo, double hi, std::size_t segments);

  const std::vector<double>& points() const { return points_; }
  std::size_t segments() const { return points_.size() - 1; }
  double operator[](std::size_t k) const { return points_[k]; }

 private:
  std::vector<double> points_;
};

struct LipschitzFn {
  std::function<double(double)> eval;
  double lipschitz = 0.0;
};

/// Sizes and constants of one approximation net.
struct ApproxGuarantee {
  double eps = 0.0;
  double q = 0.0;
  double lipschitz = 0.0;
  double b = 0.0;          // core interval [-b, b]
  std::size_t K = 0;       // segments
  std::size_t width = 0;   // hidden width of the net
  std::size_t params = 0;
  double width_bound = 0.0;
  double params_bound = 0.0;
  /// Factor c in |G(x) - f(x)| <= c ε max{1,|x|^q}: 1 for ReLU/leaky, 2 for softplus.
  double error_factor = 1.0;
  /// Softplus sharpness; 0 for the piecewise-linear nets.
  double beta = 0.0;

  /// 2Lb/K, the sup error bound on [-b, b] for the ReLU interpolant.
  double core_error_bound() const { return 2.0 * lipschitz * b / static_cast<double>(K); }
  bool sizes_within_bounds() const {
    return static_cast<double>(width) <= width_bound && static_cast<double>(params) <= params_bound;
  }
};

struct ApproxNet {
  Network net;
  ApproxGuarantee guarantee;
};

/// Piecewise-linear interpolant, clamped to f_0 left of x_0 and f_K right of x_K.
double lin_interp(const Grid& grid, std::span<const double> values, double x);

/// Brute-force lower estimate of the modulus of continuity
/// sup{|f(x)-f(y)| : |x-y| <= h} over all pairs of the given samples.
double empirical_modulus(const std::function<double(double)>& f, std::span<const double> samples, double h);

/// A_{1,f_0} ∘ ⊕_k c_k ⊛ (𝔦_1 ∘ A_{1,-x_k}); realizes lin_interp under ReLU.
Network interp_net_relu(const Grid& grid, std::span<const double> values);

/// One-hidden-layer net for lin_interp on `grid` under `act`. Exact for
/// ReLU and leaky ReLU (each kink uses the neurons a(z) and a(-z)); for
/// softplus every kink softplus(s z)/s is smoothed with sharpness s, adding at
/// most ln(2)/s · Σ|c_k| to the error. RePU is rejected.
Network interp_net(const Grid& grid, std::span<const double> values, const Activation& act,
                   double sharpness = 64.0);

/// The constants every construction shares: b from max{1,2L} = ε b^{q-1} and
/// K = max(1, ceil(2Lb/ε)). Validates ε ∈ (0,1], q > 1 and finite L >= 0.
ApproxGuarantee plan_approximation(double lipschitz, double q, double eps);

ApproxNet approx_net_relu(const LipschitzFn& f, double q, double eps);
ApproxNet approx_net_leaky(const LipschitzFn& f, double q, double eps, double alpha);
ApproxNet approx_net_softplus(const LipschitzFn& f, double q, double eps);

/// (max{1,2L})^{q/(q-1)} ε^{-q/(q-1)}, the common factor of the size bounds.
double size_scale(double lipschitz, double q, double eps);

}  // namespace picardnets::interp
