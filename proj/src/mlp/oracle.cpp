#include "picardnets/mlp/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace picardnets::mlp {

ThetaPath ThetaPath::child(std::int64_t a, std::int64_t b) const {
  std::vector<std::int64_t> e = entries_;
  e.push_back(a);
  e.push_back(b);
  return ThetaPath(std::move(e));
}

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t absorb(std::uint64_t h, std::uint64_t word) { return mix(h + kGolden + mix(word)); }

double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t RandomOracle::bits(const ThetaPath& path, SampleKind kind, std::uint64_t lane) const {
  if (observer_) (*observer_)(path, kind, lane);
  std::uint64_t h = mix(seed_ ^ 0x6a09e667f3bcc908ULL);
  h = absorb(h, static_cast<std::uint64_t>(kind));
  h = absorb(h, static_cast<std::uint64_t>(path.entries().size()));
  for (std::int64_t e : path.entries()) h = absorb(h, static_cast<std::uint64_t>(e));
  return absorb(h, lane);
}

double RandomOracle::uniform(const ThetaPath& path, SampleKind kind, std::uint64_t lane) const {
  return to_unit(bits(path, kind, lane));
}

Vector RandomOracle::gaussian(const ThetaPath& path) const {
  Vector z(dim_);
  for (std::size_t j = 0; j < dim_; j += 2) {
    // u1 in (0,1] keeps the logarithm finite.
    const double u1 = 1.0 - to_unit(bits(path, SampleKind::Gaussian, j));
    const double u2 = to_unit(bits(path, SampleKind::Gaussian, j + 1));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    z[j] = r * std::cos(phi);
    if (j + 1 < dim_) z[j + 1] = r * std::sin(phi);
  }
  return z;
}

double uniform_time(const RandomOracle& oracle, const ThetaPath& theta, double t, double horizon) {
  if (!(t >= 0.0 && t <= horizon)) throw std::invalid_argument("uniform_time: t must lie in [0,T]");
  return t + (horizon - t) * oracle.uniform(theta, SampleKind::UniformTime);
}

Vector brownian_increment(const RandomOracle& oracle, const ThetaPath& theta, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("brownian_increment: time increment must be non-negative");
  Vector w = oracle.gaussian(theta);
  const double scale = std::sqrt(s);
  for (double& v : w) v *= scale;
  return w;
}

}  // namespace picardnets::mlp
