#include "cliquenash/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "cliquenash/rng.hpp"

namespace cliquenash {

using nlohmann::json;

PlantedGraph::PlantedGraph(int n, std::vector<std::pair<int, int>> edges,
                           std::optional<std::vector<int>> planted)
    : n_(n), adj_(static_cast<std::size_t>(n) * n, 0), planted_(std::move(planted)) {
  if (n <= 0) throw std::invalid_argument("graph: n must be positive");
  for (int i = 0; i < n; ++i) adj_[static_cast<std::size_t>(i) * n + i] = 1;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw std::invalid_argument("graph: bad edge");
    }
    adj_[static_cast<std::size_t>(a) * n + b] = 1;
    adj_[static_cast<std::size_t>(b) * n + a] = 1;
  }
  if (planted_) {
    std::sort(planted_->begin(), planted_->end());
    for (int v : *planted_) {
      if (v < 0 || v >= n) throw std::invalid_argument("graph: planted vertex out of range");
    }
    if (!is_clique(*planted_)) {
      throw std::invalid_argument("graph: planted set is not a clique");
    }
  }
}

double PlantedGraph::density(const std::vector<int>& s1,
                             const std::vector<int>& s2) const {
  if (s1.empty() || s2.empty()) {
    throw std::invalid_argument("density: empty vertex set");
  }
  long long hits = 0;
  for (int i : s1) {
    for (int j : s2) {
      if (adjacent(i, j)) ++hits;  // diagonal is true, so i == j counts
    }
  }
  return static_cast<double>(hits) /
         (static_cast<double>(s1.size()) * static_cast<double>(s2.size()));
}

int PlantedGraph::neighbors_in(int v, const std::vector<int>& s) const {
  int count = 0;
  for (int u : s) {
    if (adjacent(v, u)) ++count;
  }
  return count;
}

std::vector<std::pair<int, int>> PlantedGraph::edge_list() const {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (adjacent(i, j)) edges.emplace_back(i, j);
    }
  }
  return edges;
}

int PlantedGraph::degree(int v) const {
  int d = 0;
  for (int u = 0; u < n_; ++u) {
    if (u != v && adjacent(v, u)) ++d;
  }
  return d;
}

bool PlantedGraph::is_regular(int deg) const {
  for (int v = 0; v < n_; ++v) {
    if (degree(v) != deg) return false;
  }
  return true;
}

bool PlantedGraph::is_connected() const {
  std::vector<char> seen(n_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n_; ++u) {
      if (u != v && adjacent(v, u) && !seen[u]) {
        seen[u] = 1;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == n_;
}

bool PlantedGraph::is_clique(const std::vector<int>& s) const {
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (!adjacent(s[a], s[b])) return false;
    }
  }
  return true;
}

std::string PlantedGraph::to_json() const {
  json j;
  j["n"] = n_;
  json edges = json::array();
  for (auto [a, b] : edge_list()) edges.push_back(json::array({a, b}));
  j["edges"] = std::move(edges);
  if (planted_) j["planted"] = *planted_;
  return j.dump();
}

PlantedGraph PlantedGraph::from_json(const std::string& text) {
  json j = json::parse(text);
  const int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (e.size() != 2) throw std::invalid_argument("graph: edge must have two endpoints");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  std::optional<std::vector<int>> planted;
  if (j.contains("planted")) {
    planted = j["planted"].get<std::vector<int>>();
  }
  return PlantedGraph(n, std::move(edges), std::move(planted));
}

PlantedGraph sample_planted_clique(int n, int k, std::uint64_t seed) {
  if (k < 0 || k > n) throw std::invalid_argument("sample_planted_clique: need 0 <= k <= n");
  Rng edge_rng = Rng(seed).derive(1);
  Rng subset_rng = Rng(seed).derive(2);

  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (edge_rng.bernoulli(0.5)) edges.emplace_back(i, j);
    }
  }
  std::vector<int> clique = subset_rng.sample_subset(n, k);
  for (std::size_t a = 0; a < clique.size(); ++a) {
    for (std::size_t b = a + 1; b < clique.size(); ++b) {
      edges.emplace_back(clique[a], clique[b]);
    }
  }
  return PlantedGraph(n, std::move(edges), std::move(clique));
}

PlantedGraph octahedron() {
  // Parts {0,1}, {2,3}, {4,5}; every cross-part pair is an edge.
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      if (i / 2 != j / 2) edges.emplace_back(i, j);
    }
  }
  return PlantedGraph(6, std::move(edges));
}

PlantedGraph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return PlantedGraph(n, std::move(edges));
}

PlantedGraph circulant_4regular(int n) {
  if (n < 5) throw std::invalid_argument("circulant_4regular: need n >= 5");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int d : {1, 2}) {
      const int j = (i + d) % n;
      edges.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  return PlantedGraph(n, std::move(edges));
}

}  // namespace cliquenash
