#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <initializer_list>
#include <span>
#include <vector>

#include "picardnets/nn/network.hpp"

namespace picardnets::mlp {

/// Index θ of one random source in the recursion tree. The root is the path (0).
class ThetaPath {
 public:
  ThetaPath() : entries_{0} {}
  ThetaPath(std::initializer_list<std::int64_t> entries) : entries_(entries) {}
  explicit ThetaPath(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {}

  static ThetaPath root() { return ThetaPath(); }

  /// (θ, a, b)
  ThetaPath child(std::int64_t a, std::int64_t b) const;
  const std::vector<std::int64_t>& entries() const { return entries_; }

  friend bool operator==(const ThetaPath&, const ThetaPath&) = default;

 private:
  std::vector<std::int64_t> entries_;
};

/// Streams drawn from the oracle; distinct kinds never share keys.
enum class SampleKind : std::uint64_t {
  UniformTime = 1,
  Gaussian = 2,
  BoxPoint = 3,
  Custom = 4,
};

/// Stateless keyed-hash source of randomness.
///
/// Every output is a pure function of (seed, path, kind, lane). The key is
/// the length-prefixed sequence of 64-bit two's-complement path entries,
/// absorbed word by word into a SplitMix64-style mixer together with the kind
/// tag and lane index. Gaussians come from Box–Muller on lane pairs
/// (2j, 2j+1), the even coordinate taking the cosine branch.
class RandomOracle {
 public:
  RandomOracle(std::uint64_t seed, std::size_t dim) : seed_(seed), dim_(dim) {}

  /// Called on every draw with (path, kind, lane). Intended for tests.
  using Observer = std::function<void(const ThetaPath&, SampleKind, std::uint64_t)>;
  void set_observer(Observer obs) { observer_ = obs ? std::make_shared<Observer>(std::move(obs)) : nullptr; }

  std::uint64_t seed() const { return seed_; }
  std::size_t dim() const { return dim_; }

  std::uint64_t bits(const ThetaPath& path, SampleKind kind, std::uint64_t lane) const;
  /// Uniform on [0,1).
  double uniform(const ThetaPath& path, SampleKind kind = SampleKind::UniformTime, std::uint64_t lane = 0) const;
  /// Standard Gaussian vector Z(θ) in R^dim.
  Vector gaussian(const ThetaPath& path) const;

 private:
  std::uint64_t seed_;
  std::size_t dim_;
  std::shared_ptr<Observer> observer_;
};

/// 𝒰_t^θ = t + (T - t) u^θ
double uniform_time(const RandomOracle& oracle, const ThetaPath& theta, double t, double horizon);

/// W_s^θ = sqrt(s) Z(θ). Each θ is read at a single time by the recursion, so
/// this is distributionally exact for the estimator without storing paths.
Vector brownian_increment(const RandomOracle& oracle, const ThetaPath& theta, double s);

}  // namespace picardnets::mlp
