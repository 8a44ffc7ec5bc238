#ifndef CLIQUENASH_GRAPH_HPP
#define CLIQUENASH_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cliquenash {

/// Undirected graph with self-loop-inclusive adjacency: the diagonal
/// is always true, matching the reduction's use of A with ones on the
/// diagonal. Optionally carries the planted clique that generated it.
class PlantedGraph {
 public:
  PlantedGraph(int n, std::vector<std::pair<int, int>> edges,
               std::optional<std::vector<int>> planted = std::nullopt);

  int n() const { return n_; }
  bool adjacent(int i, int j) const { return adj_[static_cast<std::size_t>(i) * n_ + j] != 0; }
  const std::vector<std::uint8_t>& adjacency() const { return adj_; }
  const std::optional<std::vector<int>>& planted() const { return planted_; }

  /// Ordered pairs (i,j) in S1 x S2 that are edges or share the vertex,
  /// divided by |S1||S2|.
  double density(const std::vector<int>& s1, const std::vector<int>& s2) const;

  /// Number of vertices in S adjacent (or equal) to v.
  int neighbors_in(int v, const std::vector<int>& s) const;

  std::vector<std::pair<int, int>> edge_list() const;
  int degree(int v) const;
  bool is_regular(int degree) const;
  bool is_connected() const;
  bool is_clique(const std::vector<int>& s) const;

  std::string to_json() const;
  static PlantedGraph from_json(const std::string& text);

 private:
  int n_;
  std::vector<std::uint8_t> adj_;  // n*n, symmetric, true diagonal
  std::optional<std::vector<int>> planted_;
};

/// G(n, 1/2) with a planted clique on a uniformly random k-subset.
/// Deterministic in the seed.
PlantedGraph sample_planted_clique(int n, int k, std::uint64_t seed);

/// Octahedron K_{2,2,2}: 6 vertices, 4-regular, 3-chromatic.
PlantedGraph octahedron();

/// Complete graph on n vertices.
PlantedGraph complete_graph(int n);

/// Circulant graph on n >= 5 vertices with offsets {1,2}: 4-regular
/// and connected, handy as coloring-gadget input.
PlantedGraph circulant_4regular(int n);

}  // namespace cliquenash

#endif
