#include "picardnets/lab/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "picardnets/mlp/oracle.hpp"

namespace picardnets::lab {

namespace {

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

// Two-pass mean and standard error of the mean.
Moments moments(std::span<const double> v) {
  Moments m;
  if (v.empty()) return m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return m;
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return m;
}

}  // namespace

std::vector<Vector> box_points(std::uint64_t seed, std::size_t count, std::size_t d, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("box needs a < b");
  const mlp::RandomOracle oracle(seed, d);
  std::vector<Vector> pts(count, Vector(d));
  for (std::size_t s = 0; s < count; ++s) {
    const mlp::ThetaPath path{static_cast<std::int64_t>(s)};
    for (std::size_t j = 0; j < d; ++j) pts[s][j] = a + (b - a) * oracle.uniform(path, mlp::SampleKind::BoxPoint, j);
  }
  return pts;
}

ErrorEstimate lp_norm(std::span<const double> diffs, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (diffs.empty()) throw std::invalid_argument("lp_norm needs at least one sample");
  std::vector<double> pow_abs(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) pow_abs[i] = std::pow(std::abs(diffs[i]), p);
  const Moments m = moments(pow_abs);
  ErrorEstimate e;
  e.p = p;
  e.samples = diffs.size();
  e.value = std::pow(m.mean, 1.0 / p);
  e.std_error = m.mean > 0.0 ? std::pow(m.mean, 1.0 / p - 1.0) * m.std_error / p : 0.0;
  return e;
}

ErrorEstimate lp_error(const std::function<double(std::span<const double>)>& u_ref,
                       const std::function<double(std::span<const double>)>& approx, double a, double b,
                       std::size_t d, double p, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("lp_error needs at least two samples");
  const auto pts = box_points(seed, n_samples, d, a, b);
  std::vector<double> diffs(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) diffs[i] = u_ref(pts[i]) - approx(pts[i]);
  return lp_norm(diffs, p);
}

double brownian_moment(std::size_t d, double s, unsigned gamma) {
  double r = std::pow(2.0 * s, static_cast<double>(gamma));
  for (unsigned k = 0; k < gamma; ++k) r *= static_cast<double>(d) / 2.0 + static_cast<double>(k);
  return r;
}

MomentCheck brownian_moment_check(std::size_t d, double s, unsigned gamma, std::size_t n_samples,
                                  std::uint64_t seed) {
  if (gamma < 1 || gamma > 3) throw std::invalid_argument("moment order must be 1, 2 or 3");
  if (n_samples < 10000) throw std::invalid_argument("moment check needs at least 10^4 samples");
  if (!(s >= 0.0)) throw std::invalid_argument("time must be non-negative");
  const mlp::RandomOracle oracle(seed, d);
  std::vector<double> v(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Vector w = mlp::brownian_increment(oracle, mlp::ThetaPath{static_cast<std::int64_t>(i)}, s);
    double sq = 0.0;
    for (double x : w) sq += x * x;
    v[i] = std::pow(sq, static_cast<double>(gamma));
  }
  const Moments m = moments(v);
  MomentCheck c;
  c.d = d;
  c.s = s;
  c.gamma = gamma;
  c.samples = n_samples;
  c.empirical = m.mean;
  c.expected = brownian_moment(d, s, gamma);
  c.std_error = m.std_error;
  c.pass = std::abs(c.empirical - c.expected) <= std::max(3.0 * c.std_error, 0.03 * c.expected);
  return c;
}

}  // namespace picardnets::lab
