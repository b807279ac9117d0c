#include "picardnets/mlp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace picardnets::mlp {

void MlpConfig::validate() const {
  if (M < 1) throw std::invalid_argument("M must be at least 1");
  if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("horizon must be positive");
  if (!(t >= 0.0 && t <= T)) throw std::invalid_argument("evaluation time must lie in [0,T]");
}

namespace {

std::int64_t ipow(unsigned base, unsigned e) {
  std::int64_t r = 1;
  for (unsigned k = 0; k < e; ++k) r *= base;
  return r;
}

struct Recursion {
  const MlpConfig& cfg;
  const ProblemFns& fns;
  const RandomOracle& oracle;

  double operator()(unsigned n, double t, const Vector& x, const ThetaPath& theta) const {
    if (n == 0) return 0.0;
    const double T = cfg.T;
    const std::int64_t mn = ipow(cfg.M, n);
    Vector y(x.size());

    double g_sum = 0.0;
    for (std::int64_t k = 1; k <= mn; ++k) {
      const Vector w = brownian_increment(oracle, theta.child(0, -k), T - t);
      for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + w[j];
      g_sum += fns.g(y);
    }
    double value = g_sum / static_cast<double>(mn);

    for (unsigned i = 0; i < n; ++i) {
      const std::int64_t mi = ipow(cfg.M, n - i);
      double acc = 0.0;
      for (std::int64_t k = 1; k <= mi; ++k) {
        const ThetaPath path = theta.child(i, k);
        const double u = uniform_time(oracle, path, t, T);
        const Vector w = brownian_increment(oracle, path, u - t);
        Vector z(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) z[j] = x[j] + w[j];
        double term = fns.f((*this)(i, u, z, path));
        if (i >= 1) term -= fns.f((*this)(i - 1, u, z, theta.child(-static_cast<std::int64_t>(i), k)));
        acc += term;
      }
      value += (T - t) / static_cast<double>(mi) * acc;
    }
    return value;
  }
};

}  // namespace

double mlp_eval(const MlpConfig& cfg, std::span<const double> x, const ThetaPath& theta, const ProblemFns& fns,
                const RandomOracle& oracle) {
  cfg.validate();
  if (x.size() != cfg.d) throw ShapeError("mlp_eval: point has the wrong dimension");
  if (oracle.dim() != cfg.d) throw ShapeError("mlp_eval: oracle dimension differs from the problem dimension");
  return Recursion{cfg, fns, oracle}(cfg.n, cfg.t, Vector(x.begin(), x.end()), theta);
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min<std::size_t>(workers, count);
  for (std::size_t w = 0; w < spawn; ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::vector<double>> mlp_estimate_batch(const MlpConfig& cfg, std::span<const Vector> points,
                                                    std::span<const std::uint64_t> seeds, const ProblemFns& fns,
                                                    unsigned workers) {
  cfg.validate();
  std::vector<std::vector<double>> out(seeds.size(), std::vector<double>(points.size(), 0.0));
  parallel_for(seeds.size() * points.size(), workers, [&](std::size_t job) {
    const std::size_t s = job / points.size();
    const std::size_t p = job % points.size();
    const RandomOracle oracle(seeds[s], cfg.d);
    out[s][p] = mlp_eval(cfg, points[p], ThetaPath::root(), fns, oracle);
  });
  return out;
}

}  // namespace picardnets::mlp
