#include "picardnets/lab/experiments.hpp"

#include <charconv>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "picardnets/lab/stats.hpp"
#include "picardnets/mlp/engine.hpp"

namespace picardnets::lab {

std::vector<Level> parse_levels(const std::string& text) {
  std::vector<Level> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("level '" + item + "' is not of the form n:M");
    Level l;
    const char* first = item.data();
    const char* mid = first + colon;
    const char* last = first + item.size();
    auto r1 = std::from_chars(first, mid, l.n);
    auto r2 = std::from_chars(mid + 1, last, l.M);
    if (r1.ec != std::errc() || r1.ptr != mid || r2.ec != std::errc() || r2.ptr != last || l.M == 0)
      throw std::invalid_argument("level '" + item + "' is not of the form n:M with M >= 1");
    out.push_back(l);
  }
  if (out.empty()) throw std::invalid_argument("no levels given");
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::vector<Vector> eval_points(const PdeProblem& problem, const ConvergenceOptions& opts) {
  return box_points(opts.points_seed, opts.eval_points, problem.d, problem.a, problem.b);
}

}  // namespace

double reference_lp_norm(const PdeProblem& problem, const ConvergenceOptions& opts) {
  const auto pts = eval_points(problem, opts);
  std::vector<double> ref(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) ref[i] = reference_solution(problem, opts.t, pts[i]);
  return lp_norm(ref, opts.p).value;
}

std::vector<ConvergenceRow> convergence_experiment(const PdeProblem& problem, const std::vector<Level>& levels,
                                                   const std::vector<std::uint64_t>& seeds,
                                                   const ConvergenceOptions& opts) {
  require_reference_residual(problem);
  if (opts.eval_points < 1) throw std::invalid_argument("need at least one evaluation point");
  const auto pts = eval_points(problem, opts);
  std::vector<double> ref(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) ref[i] = reference_solution(problem, opts.t, pts[i]);

  std::vector<ConvergenceRow> rows;
  for (const Level& level : levels) {
    const EngineSetup setup = engine_setup(problem, level.n, level.M, opts.t);
    for (std::uint64_t seed : seeds) {
      const auto start = std::chrono::steady_clock::now();
      std::vector<double> approx = ref;
      if (!opts.self_test) {
        const std::uint64_t one[1] = {seed};
        approx = mlp::mlp_estimate_batch(setup.cfg, pts, one, setup.fns, opts.workers)[0];
      }
      const auto stop = std::chrono::steady_clock::now();
      std::vector<double> diffs(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) diffs[i] = ref[i] - approx[i];
      const double err = lp_norm(diffs, opts.p).value;
      const double half = lp_norm(diffs, opts.p / 2.0).value;
      if (half > err * (1.0 + 1e-12))
        throw Error("moment ordering violated: error at p/2 exceeds error at p for seed " + std::to_string(seed));
      ConvergenceRow row;
      row.n = level.n;
      row.M = level.M;
      row.seed = seed;
      row.p = opts.p;
      row.error = err;
      row.wall_ms = opts.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string to_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "n,M,seed,p,error,wall_ms\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.M) + ',' + std::to_string(r.seed) + ',' + format_double(r.p) +
           ',' + format_double(r.error) + ',' + format_double(r.wall_ms) + '\n';
  }
  return out;
}

}  // namespace picardnets::lab
