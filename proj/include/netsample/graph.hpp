#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace netsample {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, simple, connected graph on nodes 0..n-1.
///
/// Adjacency lists are sorted. Instances are immutable once constructed, so
/// they can be shared freely between threads.
class Graph {
 public:
  /// Builds a graph from an edge list. Duplicate and reversed edges collapse
  /// to one; self-loops and out-of-range endpoints are rejected. Throws
  /// DisconnectedGraphError unless the result has exactly one component.
  static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges);

  std::size_t num_nodes() const noexcept { return adjacency_.size(); }
  std::size_t num_edges() const noexcept { return num_edges_; }
  std::size_t degree(NodeId i) const { return adjacency_.at(i).size(); }
  std::span<const NodeId> neighbors(NodeId i) const { return adjacency_.at(i); }
  bool has_edge(NodeId u, NodeId v) const;

  std::vector<std::size_t> degrees() const;
  std::size_t max_degree() const;

  /// Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Graph() = default;

  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t num_edges_ = 0;
};

/// Number of connected components of the graph on `num_nodes` nodes spanned by
/// `edges` (isolated nodes count as components).
std::size_t count_components(std::size_t num_nodes, std::span<const Edge> edges);

/// Per-edge influence factors v_ij, or a single uniform value alpha.
///
/// Uniform(alpha) behaves exactly like PerEdge with every edge set to alpha.
class InfluenceFactors {
 public:
  static InfluenceFactors uniform(double alpha);

  /// Keys are normalized to (min, max); conflicting duplicate keys throw.
  static InfluenceFactors per_edge(const std::vector<std::pair<Edge, double>>& weights);

  /// One U[0, max_weight] draw per undirected edge, in `g.edges()` order.
  static InfluenceFactors random_uniform(const Graph& g, double max_weight, std::uint64_t seed);

  bool is_uniform() const noexcept { return alpha_.has_value(); }
  std::optional<double> alpha() const noexcept { return alpha_; }

  /// Weight of edge {u, v}. Throws std::out_of_range for unknown edges of a
  /// per-edge instance.
  double weight(NodeId u, NodeId v) const;

  /// Checks that weights are finite, nonnegative and defined exactly on the
  /// edges of `g`.
  void validate(const Graph& g) const;

  /// True when every edge of `g` carries a strictly positive weight.
  bool all_positive(const Graph& g) const;

 private:
  InfluenceFactors() = default;

  std::optional<double> alpha_;
  std::map<std::pair<NodeId, NodeId>, double> weights_;
};

/// The game matrix W = L + I of the opinion-formation game, with L the
/// weighted graph Laplacian.
struct GameMatrix {
  Eigen::MatrixXd w;
  std::optional<double> alpha;

  std::size_t size() const noexcept { return static_cast<std::size_t>(w.rows()); }
};

/// Assembles W and verifies symmetry and unit row sums.
GameMatrix build_game_matrix(const Graph& g, const InfluenceFactors& v);

// Generators. Random generators are deterministic in their seed.

Graph clique(std::size_t n);
Graph star(std::size_t n);
Graph hypercube(std::size_t dimension);
Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed);
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);
Graph barabasi_albert(std::size_t n, std::size_t attach, std::uint64_t seed);

struct LoadedGraph {
  Graph graph;
  /// Present when the input carried a third (weight) column.
  std::optional<InfluenceFactors> weights;
  /// Original ids, indexed by dense id.
  std::vector<std::int64_t> original_ids;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
};

/// Parses a whitespace-separated edge list: "u v" or "u v w" per line, '#'
/// starts a comment. A line holding a single id declares an isolated node.
LoadedGraph load_edge_list(std::istream& in);

/// Writes "u v" lines (or "u v w" when `weights` is given) in edges() order.
void write_edge_list(std::ostream& out, const Graph& g, const InfluenceFactors* weights = nullptr);

}  // namespace netsample
