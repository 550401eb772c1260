#pragma once

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "json.hpp"

#include "hypernull/errors.hpp"
#include "hypernull/hypergraph.hpp"

namespace hypernull {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Canonical form: {"n": int, "edges": [[sorted ids], ...]} in stored edge order.
inline ordered_json to_json(const Hypergraph& h) {
  ordered_json edges = ordered_json::array();
  for (const auto& e : h.edges()) edges.push_back(e.nodes);
  ordered_json out;
  out["n"] = h.num_nodes();
  out["edges"] = std::move(edges);
  return out;
}

// One line, no whitespace; used for newline-delimited sample streams.
inline std::string to_json_line(const Hypergraph& h) { return to_json(h).dump(); }

inline Hypergraph hypergraph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw FormatError("hypergraph JSON needs \"n\" and \"edges\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0)
    throw FormatError("\"n\" must be a non-negative integer");
  const auto n = j["n"].get<std::size_t>();
  if (!j["edges"].is_array()) throw FormatError("\"edges\" must be an array");
  std::vector<Edge> edges;
  edges.reserve(j["edges"].size());
  std::size_t index = 0;
  for (const auto& row : j["edges"]) {
    if (!row.is_array()) throw FormatError("edge " + std::to_string(index) + " is not an array");
    std::vector<NodeId> nodes;
    for (const auto& v : row) {
      if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<std::size_t>() >= n)
        throw FormatError("edge " + std::to_string(index) + " has an invalid node id");
      nodes.push_back(v.get<NodeId>());
    }
    Edge e = Edge::from_unsorted(std::move(nodes));
    if (e.empty()) throw FormatError("edge " + std::to_string(index) + " is empty");
    if (e.is_degenerate()) throw FormatError("edge " + std::to_string(index) + " repeats a node");
    edges.push_back(std::move(e));
    ++index;
  }
  return Hypergraph(n, std::move(edges));
}

inline Hypergraph parse_hypergraph_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  return hypergraph_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Hypergraph load_json(const std::string& path) {
  try {
    return parse_hypergraph_json(read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void save_json(const Hypergraph& h, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << to_json(h).dump() << '\n';
}

}  // namespace hypernull
