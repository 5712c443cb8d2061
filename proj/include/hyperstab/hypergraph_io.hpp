#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperstab/hypergraph.hpp"

namespace hyperstab {

namespace detail {

inline int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline std::vector<int> parse_index_list(const nlohmann::json& arr,
                                         std::size_t h, const char* which) {
  if (!arr.is_array())
    throw ParseError("hyperedge " + std::to_string(h) + ": \"" + which +
                     "\" must be an array of vertex indices");
  std::vector<int> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_integer())
      throw ParseError("hyperedge " + std::to_string(h) + ": \"" + which +
                       "\" entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace detail

/// Parses the hypergraph JSON format:
///   {"vertices": N | ["label",...],
///    "hyperedges": [{"inputs":[...], "outputs":[...]}, ...]}
/// Classical (unoriented) hyperedges carry all members as inputs and an
/// empty output list.
inline ChemicalHypergraph parse_hypergraph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("JSON parse error near line " +
                     std::to_string(detail::line_of_byte(text, e.byte)) + ": " +
                     e.what());
  }
  if (!doc.is_object())
    throw ParseError("top-level JSON value must be an object");
  if (!doc.contains("vertices"))
    throw ParseError("missing \"vertices\" field");
  if (!doc.contains("hyperedges"))
    throw ParseError("missing \"hyperedges\" field");

  int n = 0;
  std::optional<std::vector<std::string>> labels;
  const auto& verts = doc["vertices"];
  if (verts.is_number_integer()) {
    n = verts.get<int>();
  } else if (verts.is_array()) {
    std::vector<std::string> names;
    for (const auto& v : verts) {
      if (!v.is_string())
        throw ParseError("\"vertices\" array entries must be strings");
      names.push_back(v.get<std::string>());
    }
    n = static_cast<int>(names.size());
    labels = std::move(names);
  } else {
    throw ParseError("\"vertices\" must be an integer count or a label array");
  }

  const auto& hedges = doc["hyperedges"];
  if (!hedges.is_array())
    throw ParseError("\"hyperedges\" must be an array");
  std::vector<Hyperedge> hs;
  hs.reserve(hedges.size());
  for (std::size_t h = 0; h < hedges.size(); ++h) {
    const auto& he = hedges[h];
    if (!he.is_object())
      throw ParseError("hyperedge " + std::to_string(h) + " must be an object");
    if (!he.contains("inputs") || !he.contains("outputs"))
      throw ParseError("hyperedge " + std::to_string(h) +
                       " must have \"inputs\" and \"outputs\"");
    auto in = detail::parse_index_list(he["inputs"], h, "inputs");
    auto out = detail::parse_index_list(he["outputs"], h, "outputs");
    hs.emplace_back(std::move(in), std::move(out));
  }
  return ChemicalHypergraph(n, std::move(hs), std::move(labels));
}

/// Serializes to the same JSON format: sorted index lists, hyperedges in
/// input order, one line, newline-terminated.
inline std::string serialize_hypergraph(const ChemicalHypergraph& H) {
  nlohmann::ordered_json doc;
  if (H.labels())
    doc["vertices"] = *H.labels();
  else
    doc["vertices"] = H.n_vertices();
  doc["hyperedges"] = nlohmann::ordered_json::array();
  for (const Hyperedge& he : H.hyperedges()) {
    nlohmann::ordered_json j;
    j["inputs"] = he.inputs;
    j["outputs"] = he.outputs;
    doc["hyperedges"].push_back(std::move(j));
  }
  return doc.dump() + "\n";
}

inline ChemicalHypergraph load_hypergraph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open hypergraph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hypergraph(buf.str());
}

}  // namespace hyperstab
