#include "picardnets/nn/serialize.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace picardnets {

using nlohmann::json;

std::string serialize(const Network& net, const std::optional<Activation>& act, int indent) {
  json doc;
  doc["dims"] = net.dims().entries();
  json layers = json::array();
  for (const auto& l : net.layers()) layers.push_back({{"w", l.weights.data}, {"b", l.bias}});
  doc["layers"] = std::move(layers);
  if (act) doc["activation"] = act->tag();
  return doc.dump(indent);
}

NetworkFile deserialize(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ShapeError(std::string("network JSON does not parse: ") + e.what());
  }
  try {
    const auto dims = doc.at("dims").get<std::vector<std::size_t>>();
    const auto& layers = doc.at("layers");
    if (dims.size() != layers.size() + 1) throw ShapeError("dims length must equal layer count + 1");
    std::vector<Layer> out;
    out.reserve(layers.size());
    for (std::size_t k = 0; k < layers.size(); ++k) {
      auto w = layers[k].at("w").get<std::vector<double>>();
      auto b = layers[k].at("b").get<std::vector<double>>();
      if (w.size() != dims[k + 1] * dims[k]) throw ShapeError("layer " + std::to_string(k + 1) + " weight count mismatch");
      out.push_back(Layer{Matrix(dims[k + 1], dims[k], std::move(w)), std::move(b)});
    }
    NetworkFile file{Network(std::move(out)), std::nullopt};
    if (doc.contains("activation")) file.activation = Activation::parse(doc["activation"].get<std::string>());
    return file;
  } catch (const json::exception& e) {
    throw ShapeError(std::string("malformed network JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ShapeError(std::string("malformed network JSON: ") + e.what());
  }
}

void save_network(const std::string& path, const Network& net, const std::optional<Activation>& act) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << serialize(net, act) << '\n';
}

NetworkFile load_network(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return deserialize(ss.str());
}

}  // namespace picardnets
