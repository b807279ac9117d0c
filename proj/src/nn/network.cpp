#include "picardnets/nn/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "picardnets/simd/kernels.hpp"

namespace picardnets {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (data.size() != r * c) throw ShapeError("matrix data does not match its shape");
}

Matrix Matrix::identity(std::size_t n, double scale) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw ShapeError("matmul: inner dimensions differ");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols != x.size()) throw ShapeError("matvec: dimension mismatch");
  Vector y(a.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

LayerDims::LayerDims(std::vector<std::size_t> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) throw ShapeError("layer dims need at least input and output width");
  if (std::any_of(entries_.begin(), entries_.end(), [](std::size_t e) { return e == 0; }))
    throw ShapeError("layer widths must be positive");
}

std::string to_string(const LayerDims& dims) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << ')';
  return os.str();
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("a network needs at least one layer");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& l = layers_[k];
    if (l.weights.rows == 0 || l.weights.cols == 0) throw ShapeError("empty weight matrix in layer " + std::to_string(k + 1));
    if (l.weights.data.size() != l.weights.rows * l.weights.cols) throw ShapeError("corrupt weight storage");
    if (l.bias.size() != l.weights.rows) throw ShapeError("bias length differs from weight rows in layer " + std::to_string(k + 1));
    if (k > 0 && l.weights.cols != layers_[k - 1].weights.rows)
      throw ShapeError("layer " + std::to_string(k + 1) + " does not chain with its predecessor");
  }
}

LayerDims Network::dims() const {
  std::vector<std::size_t> e;
  e.reserve(layers_.size() + 1);
  e.push_back(input_dim());
  for (const auto& l : layers_) e.push_back(l.weights.rows);
  return LayerDims(std::move(e));
}

std::size_t Network::dim_at(std::size_t n) const {
  if (n == 0) return input_dim();
  if (n > layers_.size()) return 0;
  return layers_[n - 1].weights.rows;
}

std::size_t Network::param_count() const {
  std::size_t p = 0;
  for (const auto& l : layers_) p += l.weights.rows * (l.weights.cols + 1);
  return p;
}

std::size_t Network::max_width() const {
  std::size_t w = input_dim();
  for (const auto& l : layers_) w = std::max(w, l.weights.rows);
  return w;
}

Activation Activation::leaky_relu(double alpha) {
  if (!(alpha >= 0.0) || alpha == 1.0 || !std::isfinite(alpha))
    throw std::invalid_argument("leaky ReLU slope must lie in [0,inf) without 1");
  if (alpha == 0.0) return relu();
  return Activation(ActivationKind::LeakyReLU, alpha, 0);
}

Activation Activation::repu(int gamma) {
  if (gamma < 2) throw std::invalid_argument("RePU exponent must be at least 2");
  return Activation(ActivationKind::RePU, 0.0, gamma);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double Activation::operator()(double x) const {
  switch (kind_) {
    case ActivationKind::ReLU:
      return std::max(x, 0.0);
    case ActivationKind::LeakyReLU:
      return std::max(x, alpha_ * x);
    case ActivationKind::RePU: {
      const double r = std::max(x, 0.0);
      double p = r;
      for (int g = 1; g < gamma_; ++g) p *= r;
      return p;
    }
    case ActivationKind::Softplus:
      return picardnets::softplus(x);
  }
  return x;
}

std::string Activation::tag() const {
  switch (kind_) {
    case ActivationKind::ReLU:
      return "relu";
    case ActivationKind::LeakyReLU: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, alpha_);
      return "leaky:" + std::string(buf, res.ptr);
    }
    case ActivationKind::RePU:
      return "repu:" + std::to_string(gamma_);
    case ActivationKind::Softplus:
      return "softplus";
  }
  return "relu";
}

Activation Activation::parse(const std::string& tag) {
  if (tag == "relu") return relu();
  if (tag == "softplus") return softplus();
  const auto colon = tag.find(':');
  if (colon != std::string::npos) {
    const std::string head = tag.substr(0, colon);
    const std::string arg = tag.substr(colon + 1);
    try {
      std::size_t used = 0;
      if (head == "leaky") {
        const double a = std::stod(arg, &used);
        if (used == arg.size()) return leaky_relu(a);
      } else if (head == "repu") {
        const int g = std::stoi(arg, &used);
        if (used == arg.size()) return repu(g);
      }
    } catch (const std::logic_error&) {
    }
  }
  throw std::invalid_argument("unknown activation tag '" + tag + "'");
}

namespace {

void apply_activation(const simd::Kernels& k, const Activation& act, double* v, std::size_t n) {
  switch (act.kind()) {
    case ActivationKind::ReLU:
      k.relu(v, n);
      break;
    case ActivationKind::LeakyReLU:
      k.leaky_relu(v, n, act.alpha());
      break;
    case ActivationKind::RePU:
      k.repu(v, n, act.gamma());
      break;
    case ActivationKind::Softplus:
      for (std::size_t i = 0; i < n; ++i) v[i] = softplus(v[i]);
      break;
  }
}

void check_input(const Network& net, std::span<const double> x) {
  if (x.size() != net.input_dim())
    throw ShapeError("input has length " + std::to_string(x.size()) + ", network expects " +
                     std::to_string(net.input_dim()));
}

}  // namespace

Vector realize(const Network& net, const Activation& act, std::span<const double> x) {
  check_input(net, x);
  const auto& k = simd::active();
  Vector cur(x.begin(), x.end());
  Vector next;
  const auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    next.resize(layer.weights.rows);
    k.affine(layer.weights.data.data(), layer.weights.rows, layer.weights.cols, cur.data(), layer.bias.data(),
             next.data());
    if (l + 1 < layers.size()) apply_activation(k, act, next.data(), next.size());
    cur.swap(next);
  }
  return cur;
}

double realize_scalar(const Network& net, const Activation& act, double x) {
  const double in[1] = {x};
  const Vector out = realize(net, act, in);
  if (out.size() != 1) throw ShapeError("realize_scalar needs a network with one output");
  return out[0];
}

Vector realize_with(const Network& net, const std::function<double(double)>& act, std::span<const double> x) {
  check_input(net, x);
  const auto& k = simd::scalar_kernels();
  Vector cur(x.begin(), x.end());
  Vector next;
  const auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    next.resize(layer.weights.rows);
    k.affine(layer.weights.data.data(), layer.weights.rows, layer.weights.cols, cur.data(), layer.bias.data(),
             next.data());
    if (l + 1 < layers.size())
      for (double& v : next) v = act(v);
    cur.swap(next);
  }
  return cur;
}

}  // namespace picardnets
