#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace picardnets {

using Vector = std::vector<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input vector does not match a network's input width, or layer shapes do not chain.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> values);

  static Matrix identity(std::size_t n, double scale = 1.0);

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, std::span<const double> x);

/// Layer widths (l_0, l_1, ..., l_L).
class LayerDims {
 public:
  LayerDims() = default;
  explicit LayerDims(std::vector<std::size_t> entries);

  const std::vector<std::size_t>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t operator[](std::size_t i) const { return entries_[i]; }

  friend bool operator==(const LayerDims&, const LayerDims&) = default;

 private:
  std::vector<std::size_t> entries_;
};

std::string to_string(const LayerDims& dims);

struct Layer {
  Matrix weights;  // l_k x l_{k-1}
  Vector bias;     // l_k

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// A fully connected feed-forward network ((W_1,B_1),...,(W_L,B_L)).
///
/// Immutable after construction. The constructor validates that the layer
/// shapes chain and that every bias matches its weight rows.
class Network {
 public:
  explicit Network(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(std::size_t k) const { return layers_[k]; }

  LayerDims dims() const;
  /// l_n for n <= L, 0 beyond the output layer.
  std::size_t dim_at(std::size_t n) const;
  std::size_t param_count() const;
  std::size_t depth() const { return layers_.size(); }
  std::size_t input_dim() const { return layers_.front().weights.cols; }
  std::size_t output_dim() const { return layers_.back().weights.rows; }
  std::size_t hidden_count() const { return layers_.size() - 1; }
  std::size_t max_width() const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<Layer> layers_;
};

enum class ActivationKind { ReLU, LeakyReLU, RePU, Softplus };

/// Elementwise activation applied after every layer but the last.
class Activation {
 public:
  static Activation relu() { return Activation(ActivationKind::ReLU, 0.0, 0); }
  static Activation leaky_relu(double alpha);
  static Activation repu(int gamma);
  static Activation softplus() { return Activation(ActivationKind::Softplus, 0.0, 0); }

  ActivationKind kind() const { return kind_; }
  /// Negative slope; 0 for plain ReLU.
  double alpha() const { return alpha_; }
  int gamma() const { return gamma_; }
  bool piecewise_linear() const {
    return kind_ == ActivationKind::ReLU || kind_ == ActivationKind::LeakyReLU;
  }

  double operator()(double x) const;

  /// "relu", "leaky:ALPHA", "repu:GAMMA" or "softplus".
  std::string tag() const;
  static Activation parse(const std::string& tag);

  friend bool operator==(const Activation&, const Activation&) = default;

 private:
  Activation(ActivationKind kind, double alpha, int gamma) : kind_(kind), alpha_(alpha), gamma_(gamma) {}

  ActivationKind kind_;
  double alpha_;
  int gamma_;
};

/// ln(1 + e^x) evaluated as max(x,0) + log1p(e^{-|x|}).
double softplus(double x);

/// Forward pass under `act`; the last layer is affine.
Vector realize(const Network& net, const Activation& act, std::span<const double> x);
double realize_scalar(const Network& net, const Activation& act, double x);

/// Forward pass with an arbitrary scalar activation. Always uses the scalar
/// reference path.
Vector realize_with(const Network& net, const std::function<double(double)>& act, std::span<const double> x);

}  // namespace picardnets
