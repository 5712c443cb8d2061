#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hyperstab/errors.hpp"

namespace hyperstab {

/// One oriented hyperedge: an ordered pair of vertex sets (inputs, outputs).
/// Vertices appearing on both sides are catalysts; they are derived, never
/// stored.  Member lists are kept sorted and duplicate-free.
struct Hyperedge {
  std::vector<int> inputs;
  std::vector<int> outputs;

  Hyperedge() = default;
  Hyperedge(std::vector<int> in, std::vector<int> out)
      : inputs(std::move(in)), outputs(std::move(out)) {
    std::sort(inputs.begin(), inputs.end());
    std::sort(outputs.begin(), outputs.end());
  }

  /// Vertices in inputs ∩ outputs.
  std::vector<int> catalysts() const {
    std::vector<int> c;
    std::set_intersection(inputs.begin(), inputs.end(), outputs.begin(),
                          outputs.end(), std::back_inserter(c));
    return c;
  }

  /// All member vertices (inputs ∪ outputs), sorted.
  std::vector<int> members() const {
    std::vector<int> m;
    std::set_union(inputs.begin(), inputs.end(), outputs.begin(),
                   outputs.end(), std::back_inserter(m));
    return m;
  }

  /// Number of member vertices.
  int size() const { return static_cast<int>(members().size()); }

  /// |inputs \ outputs| - |outputs \ inputs|.  Zero for every hyperedge
  /// exactly when the constant vector lies in the kernel of the signed
  /// incidence transpose.
  int imbalance() const {
    int c = static_cast<int>(catalysts().size());
    return (static_cast<int>(inputs.size()) - c) -
           (static_cast<int>(outputs.size()) - c);
  }

  bool operator==(const Hyperedge& other) const = default;
};

/// A chemical hypergraph: N vertices and an ordered list of oriented
/// hyperedges.  Immutable after construction; all invariants are enforced
/// by the constructor.
class ChemicalHypergraph {
 public:
  ChemicalHypergraph(int n_vertices, std::vector<Hyperedge> hyperedges,
                     std::optional<std::vector<std::string>> labels = {})
      : n_(n_vertices), hyperedges_(std::move(hyperedges)),
        labels_(std::move(labels)) {
    validate();
  }

  /// Build a hypergraph from an ordinary graph: each edge (i, j) becomes a
  /// hyperedge with inputs {i} and outputs {j}.  Self-loops are rejected
  /// (they would be catalyst-only hyperedges).
  static ChemicalHypergraph from_graph(
      int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<Hyperedge> hs;
    hs.reserve(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto [i, j] = edges[e];
      if (i == j)
        throw ValidationError("edge " + std::to_string(e) + " is a self-loop (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      hs.push_back(Hyperedge{{i}, {j}});
    }
    return ChemicalHypergraph(n, std::move(hs));
  }

  int n_vertices() const { return n_; }
  int n_hyperedges() const { return static_cast<int>(hyperedges_.size()); }
  const std::vector<Hyperedge>& hyperedges() const { return hyperedges_; }
  const Hyperedge& hyperedge(int h) const { return hyperedges_.at(h); }
  const std::optional<std::vector<std::string>>& labels() const {
    return labels_;
  }

  /// Label of vertex i, or its index as a string when unlabeled.
  std::string vertex_name(int i) const {
    if (labels_) return (*labels_)[i];
    return std::to_string(i);
  }

  bool operator==(const ChemicalHypergraph& other) const {
    return n_ == other.n_ && hyperedges_ == other.hyperedges_ &&
           labels_ == other.labels_;
  }

 private:
  void validate() const {
    if (n_ < 1) throw ValidationError("vertex count must be >= 1");
    if (labels_) {
      if (static_cast<int>(labels_->size()) != n_)
        throw ValidationError("label count does not match vertex count");
      std::set<std::string> uniq(labels_->begin(), labels_->end());
      if (static_cast<int>(uniq.size()) != n_)
        throw ValidationError("vertex labels must be distinct");
    }
    for (std::size_t h = 0; h < hyperedges_.size(); ++h) {
      const Hyperedge& he = hyperedges_[h];
      if (he.inputs.empty() && he.outputs.empty())
        throw ValidationError("hyperedge " + std::to_string(h) + " is empty");
      check_side(he.inputs, h, "inputs");
      check_side(he.outputs, h, "outputs");
    }
  }

  void check_side(const std::vector<int>& side, std::size_t h,
                  const char* which) const {
    for (std::size_t k = 0; k < side.size(); ++k) {
      int v = side[k];
      if (v < 0 || v >= n_)
        throw ValidationError("hyperedge " + std::to_string(h) + ": vertex index " +
                              std::to_string(v) + " in " + which +
                              " is out of range [0," + std::to_string(n_) + ")");
      if (k > 0 && side[k] == side[k - 1])
        throw ValidationError("hyperedge " + std::to_string(h) +
                              ": duplicate vertex " + std::to_string(v) +
                              " in " + which);
    }
  }

  int n_;
  std::vector<Hyperedge> hyperedges_;
  std::optional<std::vector<std::string>> labels_;
};

}  // namespace hyperstab
