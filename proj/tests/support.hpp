#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "picardnets/nn/network.hpp"

namespace testing {

using picardnets::Layer;
using picardnets::Matrix;
using picardnets::Network;
using picardnets::Vector;

inline Network random_net(const std::vector<std::size_t>& dims, std::mt19937_64& rng, double scale = 0.7) {
  std::normal_distribution<double> nd(0.0, scale);
  std::vector<Layer> layers;
  for (std::size_t k = 1; k < dims.size(); ++k) {
    Matrix w(dims[k], dims[k - 1]);
    for (double& v : w.data) v = nd(rng);
    Vector b(dims[k]);
    for (double& v : b) v = nd(rng);
    layers.push_back({std::move(w), std::move(b)});
  }
  return Network(std::move(layers));
}

/// Random dims with the given input/output widths, 1..max_depth layers and hidden widths 1..4.
inline std::vector<std::size_t> random_dims(std::size_t in, std::size_t out, std::size_t max_depth,
                                            std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> depth(1, max_depth), width(1, 4);
  std::vector<std::size_t> dims{in};
  const std::size_t L = depth(rng);
  for (std::size_t k = 1; k < L; ++k) dims.push_back(width(rng));
  dims.push_back(out);
  return dims;
}

inline Vector random_point(std::size_t d, std::mt19937_64& rng, double scale = 2.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector x(d);
  for (double& v : x) v = nd(rng);
  return x;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Plain forward pass written independently of the library's kernels.
template <class Act>
Vector reference_forward(const Network& net, Act act, const Vector& x) {
  Vector cur = x;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const auto& layer = net.layer(l);
    Vector next(layer.weights.rows);
    for (std::size_t i = 0; i < layer.weights.rows; ++i) {
      long double s = layer.bias[i];
      for (std::size_t j = 0; j < layer.weights.cols; ++j) s += static_cast<long double>(layer.weights(i, j)) * cur[j];
      next[i] = static_cast<double>(s);
      if (l + 1 < net.depth()) next[i] = act(next[i]);
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace testing
