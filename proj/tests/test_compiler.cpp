#include <cmath>

#include "doctest.h"
#include "picardnets/mlp/compiler.hpp"
#include "picardnets/nn/calculus.hpp"
#include "picardnets/nn/identity.hpp"
#include "picardnets/nn/serialize.hpp"
#include "support.hpp"

using namespace picardnets;
using namespace picardnets::mlp;

namespace {

CompileInputs make_inputs(unsigned n, unsigned M, std::size_t d, const Activation& act, std::uint64_t seed,
                          std::mt19937_64& rng, std::size_t w = 3, std::size_t v = 2) {
  return CompileInputs{MlpConfig{n, M, 1.0, 0.0, d},
                       testing::random_net({d, w, 1}, rng),
                       testing::random_net({1, v, 1}, rng),
                       default_identity(act),
                       act,
                       RandomOracle(seed, d)};
}

std::vector<Vector> probes(std::size_t d, std::size_t count, std::mt19937_64& rng) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(testing::random_point(d, rng, 1.5));
  return out;
}

}  // namespace

TEST_CASE("level zero compiles to the zero affine net") {
  std::mt19937_64 rng(300);
  const auto in = make_inputs(0, 2, 3, Activation::relu(), 1, rng);
  const Network net = compile_mlp(in, ThetaPath::root(), 0.0);
  CHECK(net.dims() == LayerDims({3, 1}));
  CHECK(realize(net, Activation::relu(), Vector{1, 2, 3})[0] == 0.0);
  const auto rep = verify_equivalence(in, ThetaPath::root(), 0.0, probes(3, 5, rng), 1e-8);
  CHECK(rep.max_residual == 0.0);
  const auto sizes = size_report(in, net);
  CHECK(sizes.params == 4);
  CHECK(sizes.within_bounds());
}

TEST_CASE("level one, one sample, zero nonlinearity: datum at the shifted point") {
  std::mt19937_64 rng(301);
  const auto act = Activation::relu();
  const std::size_t d = 2;
  const Network g = affine(Matrix(1, 2, std::vector<double>{2.0, -1.0}), Vector{0.5});
  const Network f({Layer{Matrix(2, 1, 1.0), Vector(2, 0.0)}, Layer{Matrix(1, 2, 0.0), Vector{0.0}}});
  const CompileInputs in{MlpConfig{1, 1, 1.0, 0.0, d}, g, f, default_identity(act), act, RandomOracle(9, d)};
  const double t = 0.25;
  const Network net = compile_mlp(in, ThetaPath::root(), t);
  const Vector w = brownian_increment(in.oracle, ThetaPath{0, 0, -1}, 1.0 - t);
  for (const Vector& x : probes(d, 10, rng)) {
    const double want = 2.0 * (x[0] + w[0]) - (x[1] + w[1]) + 0.5;
    CHECK(realize(net, act, x)[0] == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("hand-chained dims for small levels") {
  std::mt19937_64 rng(302);
  const auto act = Activation::leaky_relu(0.1);
  const std::size_t d = 2, w = 3, v = 2, dj = 2;
  {
    auto in = make_inputs(1, 1, d, act, 1, rng, w, v);
    CHECK(compile_mlp(in, ThetaPath::root(), 0.0).dims() == LayerDims({d, w + 2 * v, 1}));
  }
  {
    auto in = make_inputs(1, 2, d, act, 1, rng, w, v);
    CHECK(compile_mlp(in, ThetaPath::root(), 0.0).dims() == LayerDims({d, 2 * w + 4 * v, 1}));
  }
  {
    // Before the outer sum: block 1 (d,w,1), block 2 (d,v+w+2v,𝔡+v,1), block 3 (d,2v,1).
    // Blocks 1 and 3 are padded with one copy of J.
    auto in = make_inputs(2, 1, d, act, 1, rng, w, v);
    CHECK(compile_mlp(in, ThetaPath::root(), 0.0).dims() == LayerDims({d, 2 * w + 5 * v, 3 * dj + v, 1}));
  }
}

TEST_CASE("compiled net equals the estimator") {
  std::mt19937_64 rng(303);
  for (const auto& act : {Activation::relu(), Activation::leaky_relu(0.1), Activation::softplus()}) {
    CAPTURE(act.tag());
    const auto in = make_inputs(2, 2, 2, act, 17, rng);
    for (double t : {0.0, 1.0 / 3.0, 2.0 / 3.0}) {
      const auto rep = verify_equivalence(in, ThetaPath::root(), t, probes(2, 20, rng), 1e-8);
      CHECK(rep.max_residual <= 1e-8);
      CHECK(rep.net_values.size() == 20);
    }
    const auto one = make_inputs(1, 3, 3, act, 18, rng);
    CHECK(verify_equivalence(one, ThetaPath{0, 2, 5}, 0.5, probes(3, 20, rng), 1e-8).max_residual <= 1e-8);
  }
}

TEST_CASE("deeper datum and nonlinearity nets") {
  std::mt19937_64 rng(304);
  const auto act = Activation::relu();
  const CompileInputs in{MlpConfig{2, 2, 1.5, 0.0, 2}, testing::random_net({2, 4, 3, 1}, rng),
                         testing::random_net({1, 3, 2, 1}, rng), default_identity(act), act, RandomOracle(4, 2)};
  const Network net = compile_mlp(in, ThetaPath::root(), 0.5);
  CHECK(verify_equivalence(in, net, ThetaPath::root(), 0.5, probes(2, 20, rng), 1e-8).max_residual <= 1e-8);
  CHECK(size_report(in, net).within_bounds());
}

TEST_CASE("dims do not depend on path, time or seed") {
  std::mt19937_64 rng(305);
  const auto act = Activation::softplus();
  auto in = make_inputs(2, 2, 2, act, 1, rng);
  const LayerDims ref = compile_mlp(in, ThetaPath::root(), 0.0).dims();
  for (int k = 0; k < 5; ++k) {
    in.oracle = RandomOracle(1000 + k, 2);
    const ThetaPath theta{k, -k, 2 * k};
    CHECK(compile_mlp(in, theta, 0.2 * k).dims() == ref);
  }
}

TEST_CASE("size bounds over a sweep") {
  std::mt19937_64 rng(306);
  const auto act = Activation::relu();
  for (unsigned n = 0; n <= 3; ++n) {
    for (unsigned M = 1; M <= 3; ++M) {
      const auto in = make_inputs(n, M, 2, act, n * 7 + M, rng);
      const auto rep = size_report(in, compile_mlp(in, ThetaPath::root(), 0.0));
      CAPTURE(rep.to_json(-1));
      CHECK(rep.depth <= rep.bound_depth);
      CHECK(static_cast<double>(rep.max_width) <= rep.bound_width);
      CHECK(static_cast<double>(rep.params) <= rep.bound_params);
      CHECK(rep.within_bounds());
    }
  }
}

TEST_CASE("size report JSON has every field") {
  std::mt19937_64 rng(307);
  const auto in = make_inputs(1, 2, 2, Activation::relu(), 3, rng);
  const auto rep = size_report(in, compile_mlp(in, ThetaPath::root(), 0.0));
  const std::string js = rep.to_json();
  for (const char* key : {"\"dims\"", "\"depth\"", "\"max_width\"", "\"params\"", "\"bound_depth\"", "\"bound_width\"",
                          "\"bound_params\""})
    CHECK(js.find(key) != std::string::npos);
}

TEST_CASE("compilation is deterministic") {
  std::mt19937_64 rng(308);
  const auto in = make_inputs(2, 2, 3, Activation::leaky_relu(0.1), 5, rng);
  const Network a = compile_mlp(in, ThetaPath::root(), 0.1);
  const Network b = compile_mlp(in, ThetaPath::root(), 0.1);
  CHECK(a == b);
  CHECK(serialize(a) == serialize(b));
}

TEST_CASE("compiled realization is continuous") {
  std::mt19937_64 rng(309);
  const auto act = Activation::relu();
  const auto in = make_inputs(2, 2, 2, act, 6, rng);
  const Network net = compile_mlp(in, ThetaPath::root(), 0.0);
  for (const Vector& x : probes(2, 20, rng)) {
    const double v = realize(net, act, x)[0];
    REQUIRE(std::isfinite(v));
    Vector y = x;
    y[0] += 1e-9;
    CHECK(std::abs(realize(net, act, y)[0] - v) <= 1e-6);
  }
}

TEST_CASE("input validation and memory guard") {
  std::mt19937_64 rng(310);
  const auto act = Activation::leaky_relu(0.1);
  auto in = make_inputs(1, 1, 2, act, 1, rng);
  in.j = identity_leaky(0.0);  // identity only under plain ReLU
  CHECK_THROWS_AS(compile_mlp(in, ThetaPath::root(), 0.0), SemanticError);
  in = make_inputs(1, 1, 2, act, 1, rng);
  in.g = testing::random_net({3, 2, 1}, rng);
  CHECK_THROWS_AS(compile_mlp(in, ThetaPath::root(), 0.0), ShapeError);
  in = make_inputs(1, 1, 2, act, 1, rng);
  in.f = testing::random_net({1, 2, 2}, rng);
  CHECK_THROWS_AS(compile_mlp(in, ThetaPath::root(), 0.0), ShapeError);
  in = make_inputs(6, 3, 2, act, 1, rng);
  CHECK(predicted_bounds(in).bound_params > kMaxBoundParams);
  CHECK_THROWS_AS(compile_mlp(in, ThetaPath::root(), 0.0), BoundError);
  in = make_inputs(1, 1, 2, act, 1, rng);
  CHECK_THROWS_AS(compile_mlp(in, ThetaPath::root(), 1.5), std::invalid_argument);
}

TEST_CASE("equivalence failure names the probe") {
  std::mt19937_64 rng(311);
  const auto act = Activation::relu();
  const auto in = make_inputs(1, 2, 2, act, 7, rng);
  const Network wrong = compile_mlp(make_inputs(1, 2, 2, act, 8, rng), ThetaPath::root(), 0.0);
  CHECK_THROWS_AS(verify_equivalence(in, wrong, ThetaPath::root(), 0.0, probes(2, 5, rng), 1e-8), EquivalenceError);
}

TEST_CASE("pruning keeps the realization") {
  std::mt19937_64 rng(312);
  for (const auto& act : {Activation::relu(), Activation::leaky_relu(0.1), Activation::softplus()}) {
    const auto in = make_inputs(2, 2, 2, act, 9, rng);
    const Network net = compile_mlp(in, ThetaPath::root(), 0.0);
    const Network pruned = prune_zero_blocks(net, act);
    CHECK(pruned.param_count() < net.param_count());
    CHECK(pruned.depth() == net.depth());
    for (const Vector& x : probes(2, 100, rng))
      CHECK(std::abs(realize(pruned, act, x)[0] - realize(net, act, x)[0]) <= 1e-12 * std::max(1.0, std::abs(realize(net, act, x)[0])));
    CHECK(prune_zero_blocks(pruned, act) == pruned);
  }
  const auto zero_in = make_inputs(0, 2, 2, Activation::relu(), 1, rng);
  const Network zero = compile_mlp(zero_in, ThetaPath::root(), 0.0);
  CHECK(prune_zero_blocks(zero, Activation::relu()) == zero);
}

TEST_CASE("pruning folds constant neurons and keeps one neuron per layer") {
  const auto act = Activation::softplus();
  // Hidden neuron 0 has a zero incoming row (constant softplus(2)); neuron 1 is live.
  const Network net({Layer{Matrix(2, 1, std::vector<double>{0.0, 1.0}), Vector{2.0, 0.0}},
                     Layer{Matrix(1, 2, std::vector<double>{3.0, 1.0}), Vector{1.0}}});
  const Network p = prune_zero_blocks(net, act);
  CHECK(p.dims() == LayerDims({1, 1, 1}));
  for (double x : {-3.0, 0.0, 2.5}) CHECK(realize_scalar(p, act, x) == doctest::Approx(realize_scalar(net, act, x)).epsilon(1e-14));
  const Network dead({Layer{Matrix(2, 1, 1.0), Vector(2, 0.0)}, Layer{Matrix(1, 2, 0.0), Vector{4.0}}});
  const Network q = prune_zero_blocks(dead, act);
  CHECK(q.dims() == LayerDims({1, 1, 1}));
  CHECK(realize_scalar(q, act, 1.0) == 4.0);
}
