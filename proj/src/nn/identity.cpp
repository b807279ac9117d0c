#include "picardnets/nn/identity.hpp"

#include <cmath>
#include <numeric>

#include "picardnets/nn/calculus.hpp"

namespace picardnets {

Network monomial_net(unsigned gamma) {
  const double sign = (gamma % 2 == 0) ? 1.0 : -1.0;
  return Network({Layer{Matrix(2, 1, {1.0, -1.0}), Vector{0.0, 0.0}}, Layer{Matrix(1, 2, {1.0, sign}), Vector{0.0}}});
}

Network identity_leaky(double alpha) {
  if (!(alpha >= 0.0) || alpha == 1.0) throw std::invalid_argument("identity_leaky: slope must lie in [0,inf) without 1");
  return scalar_mul(1.0 / (1.0 + alpha), monomial_net(1));
}

Network identity_softplus() { return monomial_net(1); }

namespace {

double max_row_sum(const std::vector<std::vector<double>>& a) {
  double best = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

// Gauss-Jordan inverse with partial pivoting; returns false when singular.
bool invert(std::vector<std::vector<double>> a, std::vector<std::vector<double>>& inv) {
  const std::size_t n = a.size();
  inv.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) return false;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const double p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return true;
}

}  // namespace

std::vector<double> identity_coefficients(unsigned gamma, std::span<const double> nodes) {
  if (gamma < 2) throw std::invalid_argument("identity_coefficients: gamma must be at least 2");
  if (nodes.size() != gamma) throw std::invalid_argument("identity_coefficients: need exactly gamma nodes");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i - 1] < nodes[i])) throw std::invalid_argument("identity_coefficients: nodes must be strictly increasing");

  // Unknowns (c_0, c_1, ..., c_γ); row k is the k-th moment equation.
  const std::size_t n = gamma + 1;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    a[k][0] = (k == gamma) ? 1.0 : 0.0;
    for (std::size_t i = 0; i < gamma; ++i) a[k][i + 1] = std::pow(nodes[i], static_cast<double>(k));
    rhs[k] = (k + 1 == gamma) ? 1.0 / gamma : 0.0;
  }

  std::vector<std::vector<double>> inv;
  if (!invert(a, inv)) throw Error("identity_coefficients: singular node system");
  const double cond = max_row_sum(a) * max_row_sum(inv);
  if (!(cond <= 1e12)) throw Error("identity_coefficients: node system is ill-conditioned (estimate " + std::to_string(cond) + ")");

  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i] += inv[i][j] * rhs[j];
  return c;
}

namespace {

Network assemble_identity(unsigned gamma, std::span<const double> nodes, const Network& unit) {
  const auto c = identity_coefficients(gamma, nodes);
  std::vector<Network> terms;
  terms.reserve(gamma);
  for (unsigned i = 0; i < gamma; ++i) terms.push_back(scalar_mul(c[i + 1], compose(unit, affine_scalar(1.0, nodes[i]))));
  return compose(affine_scalar(1.0, c[0]), sum_same_depth(terms));
}

}  // namespace

Network identity_repu(unsigned gamma, std::span<const double> nodes) {
  return assemble_identity(gamma, nodes, monomial_net(gamma));
}

Network identity_power(unsigned gamma, std::span<const double> nodes) {
  return assemble_identity(gamma, nodes, activation_wrapper(1));
}

std::vector<double> default_nodes(unsigned gamma) {
  std::vector<double> nodes(gamma);
  std::iota(nodes.begin(), nodes.end(), 1.0);
  return nodes;
}

Network default_identity(const Activation& act) {
  switch (act.kind()) {
    case ActivationKind::ReLU:
    case ActivationKind::LeakyReLU:
      return identity_leaky(act.alpha());
    case ActivationKind::Softplus:
      return identity_softplus();
    case ActivationKind::RePU: {
      const auto g = static_cast<unsigned>(act.gamma());
      return identity_repu(g, default_nodes(g));
    }
  }
  return identity_softplus();
}

}  // namespace picardnets
