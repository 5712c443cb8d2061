#pragma once

// Shared test fixtures: the worked hypergraphs plus random generators used
// by the property suites.

#include <numeric>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "hyperstab/hypergraph.hpp"
#include "hyperstab/incidence.hpp"

namespace fixtures {

using hyperstab::ChemicalHypergraph;
using hyperstab::Hyperedge;

// Three vertices, one hyperedge splitting vertex 0 into 1 and 2.
inline ChemicalHypergraph splitter() {
  return ChemicalHypergraph(3, {Hyperedge{{0}, {1, 2}}});
}

// For each i a hyperedge with inputs {i} and outputs {i+1, i+2} mod 3.
inline ChemicalHypergraph cyclic3() {
  std::vector<Hyperedge> hs;
  for (int i = 0; i < 3; ++i)
    hs.push_back(Hyperedge{{i}, {(i + 1) % 3, (i + 2) % 3}});
  return ChemicalHypergraph(3, std::move(hs));
}

// Single classical (all-input) hyperedge covering n vertices.
inline ChemicalHypergraph all_input(int n) {
  std::vector<int> members(n);
  std::iota(members.begin(), members.end(), 0);
  return ChemicalHypergraph(n, {Hyperedge{members, {}}});
}

// Complete graph on n vertices as a 1-in/1-out hypergraph.
inline ChemicalHypergraph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return ChemicalHypergraph::from_graph(n, edges);
}

// Path with a single edge (two vertices).
inline ChemicalHypergraph p2_graph() {
  return ChemicalHypergraph::from_graph(2, {{0, 1}});
}

// Collaboration example: classical hyperedges {A},{C},{A,B},{A,B,C}.
inline ChemicalHypergraph intro_collab() {
  std::vector<Hyperedge> hs = {
      Hyperedge{{0}, {}},
      Hyperedge{{2}, {}},
      Hyperedge{{0, 1}, {}},
      Hyperedge{{0, 1, 2}, {}},
  };
  return ChemicalHypergraph(3, std::move(hs),
                            std::vector<std::string>{"A", "B", "C"});
}

inline bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        q.push(w);
      }
  }
  return count == n;
}

inline bool bipartite(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<int> color(n, -1);
  for (int s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[v]) {
        if (color[w] == -1) {
          color[w] = 1 - color[v];
          q.push(w);
        } else if (color[w] == color[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

// Erdos-Renyi graph, resampled until connected.
inline std::vector<std::pair<int, int>> random_connected_edges(
    std::mt19937& rng, int n, double p = 0.5) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng) < p) edges.emplace_back(i, j);
    if (!edges.empty() && connected(n, edges)) return edges;
  }
}

// Random connected bipartite graph: random bipartition, edges across only.
inline std::vector<std::pair<int, int>> random_connected_bipartite_edges(
    std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> side(0, 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    std::vector<int> color(n);
    for (int i = 0; i < n; ++i) color[i] = side(rng);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (color[i] != color[j] && coin(rng) < 0.6) edges.emplace_back(i, j);
    if (!edges.empty() && connected(n, edges)) return edges;
  }
}

// Random chemical hypergraph.  When require_degrees is set, resamples until
// every vertex has at least one non-catalyst membership (Laplacian exists).
inline ChemicalHypergraph random_hypergraph(std::mt19937& rng, int n_max = 5,
                                            bool require_degrees = true) {
  std::uniform_int_distribution<int> nd(2, n_max);
  for (;;) {
    const int n = nd(rng);
    std::uniform_int_distribution<int> md(1, 2 * n);
    const int m = md(rng);
    std::uniform_int_distribution<int> role(0, 3);
    std::vector<Hyperedge> hs;
    for (int h = 0; h < m; ++h) {
      std::vector<int> in, out;
      for (int v = 0; v < n; ++v) {
        switch (role(rng)) {
          case 0: in.push_back(v); break;
          case 1: out.push_back(v); break;
          case 2:  // catalyst
            in.push_back(v);
            out.push_back(v);
            break;
          default: break;  // not a member
        }
      }
      if (in.empty() && out.empty()) in.push_back(0);
      hs.push_back(Hyperedge{std::move(in), std::move(out)});
    }
    ChemicalHypergraph H(n, std::move(hs));
    if (!require_degrees) return H;
    bool ok = true;
    const auto inc = hyperstab::incidence(H);
    for (int i = 0; i < n; ++i)
      if (inc.degrees(i) == 0) ok = false;
    if (ok) return H;
  }
}

}  // namespace fixtures
