#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "picardnets/nn/serialize.hpp"
#include "support.hpp"

using namespace picardnets;

TEST_CASE("serialization round trip is bit exact") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> wide(-1e300, 1e300);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dims = testing::random_dims(1 + trial % 5, 1 + trial % 2, 4, rng);
    Network net = testing::random_net(dims, rng, trial % 7 == 0 ? 1e-200 : 1.0);
    std::vector<Layer> layers = net.layers();
    if (trial % 3 == 0) layers.front().bias.front() = wide(rng);
    if (trial % 5 == 0) layers.back().bias.back() = std::numeric_limits<double>::denorm_min();
    net = Network(layers);
    const auto act = trial % 2 ? std::optional(Activation::leaky_relu(0.1 * (trial % 9))) : std::nullopt;
    const NetworkFile back = deserialize(serialize(net, act, trial % 4 == 0 ? 2 : -1));
    CHECK(back.net == net);
    CHECK(back.activation == act);
    CHECK(serialize(back.net, back.activation) == serialize(net, act));
  }
}

TEST_CASE("deserialize rejects malformed documents") {
  CHECK_THROWS_AS(deserialize("not json"), ShapeError);
  CHECK_THROWS_AS(deserialize(R"({"dims":[1,1],"layers":[]})"), ShapeError);
  CHECK_THROWS_AS(deserialize(R"({"dims":[1,1],"layers":[{"w":[1,2],"b":[0]}]})"), ShapeError);
  CHECK_THROWS_AS(deserialize(R"({"dims":[2,1],"layers":[{"w":[1],"b":[0]}]})"), ShapeError);
  CHECK_THROWS_AS(deserialize(R"({"dims":[1,1],"layers":[{"w":[1],"b":[0]}],"activation":"tanh"})"), ShapeError);
}

TEST_CASE("file round trip") {
  std::mt19937_64 rng(6);
  const Network net = testing::random_net({2, 3, 1}, rng);
  const auto path = std::filesystem::temp_directory_path() / "picardnets_serialize_test.json";
  save_network(path.string(), net, Activation::softplus());
  const NetworkFile back = load_network(path.string());
  CHECK(back.net == net);
  CHECK(back.activation == Activation::softplus());
  std::filesystem::remove(path);
  CHECK_THROWS(load_network(path.string()));
}
