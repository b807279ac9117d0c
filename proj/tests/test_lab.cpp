#include <cmath>

#include "doctest.h"
#include "picardnets/lab/experiments.hpp"
#include "picardnets/lab/problems.hpp"
#include "picardnets/lab/stats.hpp"
#include "support.hpp"

using namespace picardnets;
using namespace picardnets::lab;

TEST_CASE("reference solution closed forms") {
  const auto p = PdeProblem::heat_quadratic(2, 0.5, 1.0);
  CHECK(reference_solution(p, 0.0, Vector{0.0, 0.0}) == doctest::Approx(2.0));
  const Vector x{0.3, -1.1};
  CHECK(reference_solution(p, 1.0, x) == doctest::Approx(0.09 + 1.21));
  const auto q = PdeProblem::heat_quadratic(3, 0.7, 2.0, 0.4);
  const Vector y{1.0, 2.0, -1.0};
  CHECK(reference_solution(q, 0.5, y) == doctest::Approx(std::exp(0.4 * 1.5) * (6.0 + 2 * 0.7 * 3 * 1.5)));
  auto init = q;
  init.direction = Direction::Initial;
  CHECK(reference_solution(init, 0.0, y) == doctest::Approx(6.0));
  CHECK(reference_solution(init, 1.5, y) == doctest::Approx(reference_solution(q, 0.5, y)));
}

TEST_CASE("reference solutions solve their PDE") {
  std::mt19937_64 rng(400);
  for (double lambda : {0.0, 0.1, -0.7, 1.3}) {
    for (Direction dir : {Direction::Terminal, Direction::Initial}) {
      auto p = PdeProblem::heat_quadratic(4, 0.8, 1.5, lambda);
      p.direction = dir;
      CHECK(require_reference_residual(p, 64, 3) <= 1e-6);
      for (int k = 0; k < 20; ++k) {
        const double t = std::uniform_real_distribution<double>(0.1, 1.4)(rng);
        CHECK(reference_residual(p, t, testing::random_point(4, rng, 1.0)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("direction mapping and unsupported data") {
  auto p = PdeProblem::heat_quadratic(2, 0.5, 1.0);
  const double t = 0.4;
  const Vector x{0.5, 0.5};
  auto flipped = p;
  flipped.direction = Direction::Initial;
  const double r = reference_residual(p, t, x);
  CHECK(r <= 1e-6);
  const double terminal_value_shifted = reference_solution(flipped, p.T - t, x);
  CHECK(terminal_value_shifted == doctest::Approx(reference_solution(p, t, x)));
  p.g = Datum::gaussian_bump();
  CHECK_THROWS_AS(reference_solution(p, t, x), NoReferenceError);
  CHECK_THROWS_AS(require_reference_residual(p), NoReferenceError);
}

TEST_CASE("time rescaling") {
  auto p = PdeProblem::heat_quadratic(3, 0.5, 1.0, 0.3);
  const auto same = time_rescale(p);
  CHECK(same.T == 1.0);
  CHECK(same.f.lambda == 0.3);
  p.c = 1.0;
  const auto r = time_rescale(p);
  CHECK(r.T == 2.0);
  CHECK(r.c == 0.5);
  CHECK(r.f.lambda == doctest::Approx(0.15));
  const auto back = time_unrescale(r, 1.0);
  CHECK(back.T == p.T);
  CHECK(back.f.lambda == doctest::Approx(p.f.lambda).epsilon(1e-15));
  std::mt19937_64 rng(401);
  for (int k = 0; k < 50; ++k) {
    const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const Vector x = testing::random_point(3, rng);
    const double u = reference_solution(p, t, x);
    CHECK(std::abs(reference_solution(r, rescaled_time(p, t), x) - u) <= 1e-12 * std::max(1.0, std::abs(u)));
    CHECK(std::abs(reference_solution(back, t, x) - u) <= 1e-12 * std::max(1.0, std::abs(u)));
  }
  auto custom = p;
  custom.f = Nonlinearity::from([](double u) { return std::sin(u); }, 1.0);
  const auto rc = time_rescale(custom);
  CHECK(rc.f(1.0) == doctest::Approx(std::sin(1.0) / 2.0));
  CHECK(rc.f.lipschitz == 0.5);
  CHECK_THROWS_AS(time_unrescale(p, 1.0), std::invalid_argument);
}

TEST_CASE("engine setup maps direction and diffusion") {
  auto p = PdeProblem::heat_quadratic(2, 1.0, 1.0, 0.2);
  auto s = engine_setup(p, 2, 3, 0.25);
  CHECK(s.cfg.T == 2.0);
  CHECK(s.cfg.t == 0.5);
  CHECK(s.fns.f(1.0) == doctest::Approx(0.1));
  p.direction = Direction::Initial;
  s = engine_setup(p, 2, 3, 0.25);
  CHECK(s.cfg.t == 1.5);
  CHECK_THROWS_AS(engine_setup(p, 1, 1, 2.0), std::invalid_argument);
}

TEST_CASE("problem validation") {
  auto p = PdeProblem::heat_quadratic(2, 0.5, 1.0);
  p.a = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_THROWS_AS(PdeProblem::heat_quadratic(2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PdeProblem::heat_quadratic(2, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("box points") {
  const auto a = box_points(5, 1000, 3, -2.0, 1.0);
  const auto b = box_points(5, 10, 3, -2.0, 1.0);
  for (std::size_t i = 0; i < 10; ++i) CHECK(a[i] == b[i]);
  double mean = 0.0;
  for (const auto& x : a)
    for (double v : x) {
      CHECK(v >= -2.0);
      CHECK(v < 1.0);
      mean += v;
    }
  CHECK(mean / 3000.0 == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(box_points(6, 1, 3, -2.0, 1.0)[0] != a[0]);
}

TEST_CASE("Lp error estimator") {
  const auto ref = [](std::span<const double> x) { return x[0] * x[0] + 1.0; };
  const auto e0 = lp_error(ref, ref, 0.0, 1.0, 2, 2.0, 1000, 1);
  CHECK(e0.value == 0.0);
  CHECK(e0.std_error == 0.0);
  for (double p : {0.5, 1.0, 2.0, 4.0}) {
    const auto e = lp_error(ref, [&](std::span<const double> x) { return ref(x) + 0.3; }, 0.0, 1.0, 2, p, 10000, 2);
    CHECK(std::abs(e.value - 0.3) <= 3.0 * e.std_error + 1e-12);
  }
  const auto ramp = lp_error([](std::span<const double> x) { return x[0]; }, [](std::span<const double>) { return 0.0; },
                             0.0, 1.0, 1, 2.0, 100000, 3);
  CHECK(std::abs(ramp.value - std::sqrt(1.0 / 3.0)) <= 3.0 * ramp.std_error);
  CHECK(ramp.std_error > 0.0);
  CHECK(ramp.samples == 100000);
  const std::vector<double> diffs{1.0, -2.0, 3.0, 0.5};
  CHECK(lp_norm(diffs, 1.0).value <= lp_norm(diffs, 2.0).value);
  CHECK(lp_norm(diffs, 2.0).value == doctest::Approx(std::sqrt((1 + 4 + 9 + 0.25) / 4.0)));
  CHECK_THROWS_AS(lp_norm(diffs, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lp_error(ref, ref, 0.0, 1.0, 2, 2.0, 1, 1), std::invalid_argument);
}

TEST_CASE("Lp estimate does not depend on evaluation order") {
  const auto ref = [](std::span<const double> x) { return std::sin(x[0] + 2 * x[1]); };
  const auto approx = [](std::span<const double> x) { return x[0] - x[1]; };
  const auto a = lp_error(ref, approx, -1.0, 1.0, 2, 3.0, 5000, 9);
  const auto b = lp_error(ref, approx, -1.0, 1.0, 2, 3.0, 5000, 9);
  CHECK(a.value == b.value);
  const auto pts = box_points(9, 5000, 2, -1.0, 1.0);
  std::vector<double> diffs;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) diffs.push_back(ref(*it) - approx(*it));
  CHECK(lp_norm(diffs, 3.0).value == doctest::Approx(a.value).epsilon(1e-13));
}

TEST_CASE("Brownian moments") {
  CHECK(brownian_moment(3, 0.5, 1) == doctest::Approx(1.5));
  CHECK(brownian_moment(2, 1.0, 2) == doctest::Approx(8.0));
  CHECK(brownian_moment(4, 0.0, 2) == 0.0);
  const auto zero = brownian_moment_check(3, 0.0, 2, 10000, 1);
  CHECK(zero.empirical == 0.0);
  CHECK(zero.pass);
  for (std::size_t d : {1u, 5u})
    for (unsigned g : {1u, 2u, 3u}) {
      const auto c = brownian_moment_check(d, 0.5, g, 20000, 4);
      CAPTURE(d);
      CAPTURE(g);
      CHECK(c.pass);
    }
  CHECK_THROWS_AS(brownian_moment_check(2, 1.0, 4, 10000, 1), std::invalid_argument);
  CHECK_THROWS_AS(brownian_moment_check(2, 1.0, 2, 100, 1), std::invalid_argument);
}

TEST_CASE("level parsing") {
  const auto l = parse_levels("1:1,2:2,3:3");
  REQUIRE(l.size() == 3);
  CHECK(l[2].n == 3);
  CHECK(l[2].M == 3);
  CHECK_THROWS_AS(parse_levels("1-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_levels("1:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_levels("1:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_levels(""), std::invalid_argument);
}

TEST_CASE("convergence experiment") {
  const auto p = PdeProblem::heat_quadratic(3, 0.5, 1.0);
  ConvergenceOptions opts;
  opts.eval_points = 32;
  opts.timing = false;
  const std::vector<std::uint64_t> seeds{1, 2};
  SUBCASE("level zero reports the reference norm") {
    const auto rows = convergence_experiment(p, {{0, 1}}, seeds, opts);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error == doctest::Approx(reference_lp_norm(p, opts)).epsilon(1e-14));
  }
  SUBCASE("self test gives zero error") {
    opts.self_test = true;
    for (const auto& r : convergence_experiment(p, {{2, 2}}, seeds, opts)) CHECK(r.error == 0.0);
  }
  SUBCASE("CSV is byte-stable across worker counts") {
    const std::vector<Level> levels{{1, 1}, {2, 2}};
    const std::string a = to_csv(convergence_experiment(p, levels, seeds, opts));
    opts.workers = 4;
    const std::string b = to_csv(convergence_experiment(p, levels, seeds, opts));
    CHECK(a == b);
    CHECK(a.rfind("n,M,seed,p,error,wall_ms\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 5);
  }
  SUBCASE("problems without a reference are refused") {
    auto bump = p;
    bump.g = Datum::gaussian_bump();
    CHECK_THROWS_AS(convergence_experiment(bump, {{1, 1}}, seeds, opts), NoReferenceError);
  }
}

TEST_CASE("double formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, 0.0})
    CHECK(std::stod(format_double(v)) == v);
}
