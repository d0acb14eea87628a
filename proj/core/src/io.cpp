#include "volta/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "volta/errors.hpp"

namespace volta {

namespace {

using nlohmann::json;

std::string require_string(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw ParseError(std::string("network document: ") + where + " needs a string \"" + key +
                     "\"");
  return j.at(key).get<std::string>();
}

}  // namespace

NetworkData network_data_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("network document: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("network document: top level must be an object");
  if (!j.contains("vertices") || !j.at("vertices").is_array())
    throw ParseError("network document: missing \"vertices\" array");
  if (!j.contains("edges") || !j.at("edges").is_array())
    throw ParseError("network document: missing \"edges\" array");

  NetworkData data;
  data.base = require_string(j, "base", "top level");
  for (const json& v : j.at("vertices")) {
    if (!v.is_string()) throw ParseError("network document: vertices must be strings");
    data.vertices.push_back(v.get<std::string>());
  }
  for (const json& e : j.at("edges")) {
    if (!e.is_object()) throw ParseError("network document: edges must be objects");
    EdgeData edge;
    edge.u = require_string(e, "u", "edge");
    edge.v = require_string(e, "v", "edge");
    if (!e.contains("c") || !e.at("c").is_number())
      throw ParseError("network document: edge needs a numeric \"c\"");
    edge.c = e.at("c").get<double>();
    data.edges.push_back(std::move(edge));
  }
  return data;
}

std::string network_data_to_json(const NetworkData& data) {
  json j;
  j["vertices"] = data.vertices;
  j["base"] = data.base;
  json edges = json::array();
  for (const EdgeData& e : data.edges) {
    edges.push_back(json{{"u", e.u}, {"v", e.v}, {"c", e.c}});
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

NetworkData load_network_data(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network document: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return network_data_from_json(buf.str());
}

void save_network_data(const std::filesystem::path& path, const NetworkData& data) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write network document: " + path.string());
  out << network_data_to_json(data);
}

Network load_network(const std::filesystem::path& path) {
  return Network::from_data(load_network_data(path));
}

}  // namespace volta
