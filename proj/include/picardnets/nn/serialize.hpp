#pragma once

#include <optional>
#include <string>

#include "picardnets/nn/network.hpp"

namespace picardnets {

/// JSON document {"dims": [...], "layers": [{"w": [...], "b": [...]}, ...],
/// "activation": "relu" | "leaky:A" | "repu:G" | "softplus"}.
///
/// Weights are row-major. Doubles are written as the shortest decimal string
/// that parses back to the same bits, so a round trip is bit-exact.
struct NetworkFile {
  Network net;
  std::optional<Activation> activation;
};

std::string serialize(const Network& net, const std::optional<Activation>& act = std::nullopt, int indent = -1);
NetworkFile deserialize(const std::string& text);

void save_network(const std::string& path, const Network& net, const std::optional<Activation>& act = std::nullopt);
NetworkFile load_network(const std::string& path);

}  // namespace picardnets
