#include "netsample/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "netsample/errors.hpp"

namespace netsample {

namespace {

// Union-find over dense ids.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::pair<NodeId, NodeId> key(NodeId u, NodeId v) { return {std::min(u, v), std::max(u, v)}; }

std::string describe(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Graph

std::size_t count_components(std::size_t num_nodes, std::span<const Edge> edges) {
  DisjointSets sets(num_nodes);
  for (const Edge& e : edges) sets.unite(e.u, e.v);
  std::size_t components = 0;
  for (std::size_t i = 0; i < num_nodes; ++i) components += sets.find(i) == i;
  return components;
}

Graph Graph::from_edges(std::size_t num_nodes, std::span<const Edge> edges) {
  if (num_nodes == 0) throw std::invalid_argument("graph needs at least one node");
  if (num_nodes > std::numeric_limits<NodeId>::max())
    throw std::invalid_argument("too many nodes");

  Graph g;
  g.adjacency_.resize(num_nodes);
  for (const Edge& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes)
      throw std::invalid_argument("edge endpoint out of range: " + std::to_string(e.u) + " " +
                                  std::to_string(e.v));
    if (e.u == e.v) throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    g.adjacency_[e.u].push_back(e.v);
    g.adjacency_[e.v].push_back(e.u);
  }
  std::size_t endpoints = 0;
  for (auto& list : g.adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    endpoints += list.size();
  }
  g.num_edges_ = endpoints / 2;

  if (const std::size_t c = count_components(num_nodes, edges); c != 1)
    throw DisconnectedGraphError(c);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto& list = adjacency_.at(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out(adjacency_.size());
  std::transform(adjacency_.begin(), adjacency_.end(), out.begin(),
                 [](const auto& list) { return list.size(); });
  return out;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adjacency_) best = std::max(best, list.size());
  return best;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (NodeId u = 0; u < adjacency_.size(); ++u)
    for (NodeId v : adjacency_[u])
      if (u < v) out.push_back({u, v});
  return out;
}

// ---------------------------------------------------------------------------
// InfluenceFactors

InfluenceFactors InfluenceFactors::uniform(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0)
    throw std::invalid_argument("influence factor must be finite and nonnegative, got " +
                                describe(alpha));
  InfluenceFactors f;
  f.alpha_ = alpha;
  return f;
}

InfluenceFactors InfluenceFactors::per_edge(const std::vector<std::pair<Edge, double>>& weights) {
  InfluenceFactors f;
  for (const auto& [e, w] : weights) {
    if (e.u == e.v) throw std::invalid_argument("influence factor on a self-loop");
    if (!std::isfinite(w) || w < 0)
      throw std::invalid_argument("influence factor must be finite and nonnegative, got " +
                                  describe(w));
    auto [it, inserted] = f.weights_.emplace(key(e.u, e.v), w);
    if (!inserted && it->second != w)
      throw std::invalid_argument("conflicting influence factors on edge " + std::to_string(e.u) +
                                  " " + std::to_string(e.v));
  }
  return f;
}

InfluenceFactors InfluenceFactors::random_uniform(const Graph& g, double max_weight,
                                                  std::uint64_t seed) {
  if (!std::isfinite(max_weight) || max_weight < 0)
    throw std::invalid_argument("weight range must be finite and nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(0.0, max_weight);
  InfluenceFactors f;
  for (const Edge& e : g.edges()) f.weights_.emplace(key(e.u, e.v), max_weight == 0 ? 0.0 : draw(rng));
  return f;
}

double InfluenceFactors::weight(NodeId u, NodeId v) const {
  if (alpha_) return *alpha_;
  auto it = weights_.find(key(u, v));
  if (it == weights_.end())
    throw std::out_of_range("no influence factor for edge " + std::to_string(u) + " " +
                            std::to_string(v));
  return it->second;
}

void InfluenceFactors::validate(const Graph& g) const {
  if (alpha_) return;
  for (const Edge& e : g.edges())
    if (!weights_.contains(key(e.u, e.v)))
      throw std::invalid_argument("missing influence factor for edge " + std::to_string(e.u) +
                                  " " + std::to_string(e.v));
  if (weights_.size() != g.num_edges())
    throw std::invalid_argument("influence factors given for pairs that are not edges");
}

bool InfluenceFactors::all_positive(const Graph& g) const {
  if (alpha_) return *alpha_ > 0 || g.num_edges() == 0;
  for (const Edge& e : g.edges())
    if (weight(e.u, e.v) <= 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Game matrix

GameMatrix build_game_matrix(const Graph& g, const InfluenceFactors& v) {
  v.validate(g);
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  GameMatrix gm;
  gm.alpha = v.alpha();
  gm.w = Eigen::MatrixXd::Identity(n, n);
  for (const Edge& e : g.edges()) {
    const double w = v.weight(e.u, e.v);
    gm.w(e.u, e.v) = -w;
    gm.w(e.v, e.u) = -w;
    gm.w(e.u, e.u) += w;
    gm.w(e.v, e.v) += w;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sum = gm.w.row(i).sum();
    if (std::abs(sum - 1.0) > 1e-12)
      throw NumericalError("game matrix row " + std::to_string(i) + " sums to " + describe(sum));
  }
  return gm;
}

// ---------------------------------------------------------------------------
// Generators

Graph clique(std::size_t n) {
  if (n == 0) throw std::invalid_argument("clique requires n >= 1");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph::from_edges(n, edges);
}

Graph star(std::size_t n) {
  if (n < 2) throw std::invalid_argument("star requires n >= 2");
  std::vector<Edge> edges;
  for (NodeId leaf = 1; leaf < n; ++leaf) edges.push_back({0, leaf});
  return Graph::from_edges(n, edges);
}

Graph hypercube(std::size_t dimension) {
  if (dimension < 1 || dimension > 24)
    throw std::invalid_argument("hypercube requires 1 <= d <= 24");
  const std::size_t n = std::size_t{1} << dimension;
  std::vector<Edge> edges;
  edges.reserve(n * dimension / 2);
  for (NodeId u = 0; u < n; ++u)
    for (std::size_t bit = 0; bit < dimension; ++bit) {
      const NodeId v = u ^ (NodeId{1} << bit);
      if (u < v) edges.push_back({u, v});
    }
  return Graph::from_edges(n, edges);
}

namespace {

// One attempt of the pairing model: pair up n*d stubs at random, keep the
// pairs that are neither loops nor repeats, and re-pair the leftover stubs.
// Gives up when no admissible pair remains among the leftovers.
std::optional<std::vector<Edge>> try_pairing(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::set<std::pair<NodeId, NodeId>> chosen;
  std::vector<NodeId> stubs;
  stubs.reserve(n * d);
  for (NodeId node = 0; node < n; ++node)
    for (std::size_t k = 0; k < d; ++k) stubs.push_back(node);

  while (!stubs.empty()) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::map<NodeId, std::size_t> leftover;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
      const auto pair = key(stubs[k], stubs[k + 1]);
      if (pair.first != pair.second && !chosen.contains(pair)) {
        chosen.insert(pair);
      } else {
        ++leftover[stubs[k]];
        ++leftover[stubs[k + 1]];
      }
    }
    if (leftover.empty()) break;

    bool admissible = false;
    for (auto a = leftover.begin(); a != leftover.end() && !admissible; ++a)
      for (auto b = std::next(a); b != leftover.end(); ++b)
        if (!chosen.contains(key(a->first, b->first))) {
          admissible = true;
          break;
        }
    if (!admissible) return std::nullopt;

    stubs.clear();
    for (const auto& [node, count] : leftover) stubs.insert(stubs.end(), count, node);
  }

  std::vector<Edge> edges;
  edges.reserve(chosen.size());
  for (const auto& [u, v] : chosen) edges.push_back({u, v});
  return edges;
}

constexpr std::size_t kMaxGeneratorAttempts = 1000;

}  // namespace

Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (d == 0 || d >= n) throw std::invalid_argument("random_regular requires 1 <= d < n");
  if ((n * d) % 2 != 0) throw std::invalid_argument("random_regular requires n*d even");
  if (d == 1 && n != 2) throw std::invalid_argument("random_regular with d = 1 is disconnected unless n = 2");

  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; attempt < kMaxGeneratorAttempts; ++attempt) {
    auto edges = try_pairing(n, d, rng);
    if (!edges || count_components(n, *edges) != 1) continue;
    return Graph::from_edges(n, *edges);
  }
  throw std::invalid_argument("random_regular: no connected simple graph found after " +
                              std::to_string(kMaxGeneratorAttempts) + " attempts");
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("erdos_renyi requires n >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("erdos_renyi requires 0 < p <= 1");

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t attempt = 0; attempt < kMaxGeneratorAttempts; ++attempt) {
    edges.clear();
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (coin(rng)) edges.push_back({u, v});
    if (count_components(n, edges) == 1) return Graph::from_edges(n, edges);
  }
  throw std::invalid_argument("erdos_renyi: no connected sample after " +
                              std::to_string(kMaxGeneratorAttempts) + " attempts; raise p");
}

Graph barabasi_albert(std::size_t n, std::size_t attach, std::uint64_t seed) {
  if (attach < 1) throw std::invalid_argument("barabasi_albert requires attach >= 1");
  if (n < attach + 1) throw std::invalid_argument("barabasi_albert requires n >= attach + 1");

  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  // Every edge endpoint appears once here, so a uniform pick is a
  // degree-proportional pick.
  std::vector<NodeId> endpoints;
  const auto seed_size = static_cast<NodeId>(attach + 1);
  for (NodeId u = 0; u < seed_size; ++u)
    for (NodeId v = u + 1; v < seed_size; ++v) {
      edges.push_back({u, v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }

  std::vector<NodeId> targets;
  for (NodeId node = seed_size; node < n; ++node) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < attach) {
      const NodeId candidate = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), candidate) == targets.end())
        targets.push_back(candidate);
    }
    for (NodeId t : targets) {
      edges.push_back({t, node});
      endpoints.push_back(t);
      endpoints.push_back(node);
    }
  }
  return Graph::from_edges(n, edges);
}

// ---------------------------------------------------------------------------
// Edge-list I/O

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

std::int64_t parse_id(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("non-numeric node id '" + std::string(token) + "'", line);
  if (value < 0) throw ParseError("negative node id '" + std::string(token) + "'", line);
  return value;
}

double parse_weight(std::string_view token, std::size_t line) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("non-numeric weight '" + std::string(token) + "'", line);
  if (!std::isfinite(value) || value < 0)
    throw ParseError("weight must be finite and nonnegative, got '" + std::string(token) + "'", line);
  return value;
}

}  // namespace

LoadedGraph load_edge_list(std::istream& in) {
  std::unordered_map<std::int64_t, NodeId> dense;
  std::vector<std::int64_t> original;
  auto intern = [&](std::int64_t id) {
    auto [it, inserted] = dense.emplace(id, static_cast<NodeId>(original.size()));
    if (inserted) original.push_back(id);
    return it->second;
  };

  std::map<std::pair<NodeId, NodeId>, std::pair<double, std::size_t>> edges;  // weight, line
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
  std::optional<bool> weighted;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens.size() > 3)
      throw ParseError("expected 'u v' or 'u v w', got " + std::to_string(tokens.size()) + " fields",
                       line_no);

    const NodeId u = intern(parse_id(tokens[0], line_no));
    if (tokens.size() == 1) continue;
    const NodeId v = intern(parse_id(tokens[1], line_no));

    const bool has_weight = tokens.size() == 3;
    const double w = has_weight ? parse_weight(tokens[2], line_no) : 0.0;
    if (u == v) {
      ++self_loops;
      continue;
    }
    if (weighted && *weighted != has_weight)
      throw ParseError("mixing weighted and unweighted edges", line_no);
    weighted = has_weight;

    auto [it, inserted] = edges.emplace(key(u, v), std::make_pair(w, line_no));
    if (!inserted) {
      if (has_weight && it->second.first != w)
        throw ParseError("conflicting weight for edge " + std::string(tokens[0]) + " " +
                             std::string(tokens[1]) + " (first given on line " +
                             std::to_string(it->second.second) + ")",
                         line_no);
      ++duplicates;
    }
  }

  if (original.empty()) throw ParseError("edge list is empty", 0);

  std::vector<Edge> edge_list;
  std::vector<std::pair<Edge, double>> weight_list;
  edge_list.reserve(edges.size());
  for (const auto& [pair, info] : edges) {
    edge_list.push_back({pair.first, pair.second});
    weight_list.push_back({{pair.first, pair.second}, info.first});
  }

  LoadedGraph out{Graph::from_edges(original.size(), edge_list), std::nullopt, std::move(original),
                  self_loops, duplicates};
  if (weighted.value_or(false)) out.weights = InfluenceFactors::per_edge(weight_list);
  return out;
}

void write_edge_list(std::ostream& out, const Graph& g, const InfluenceFactors* weights) {
  for (const Edge& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (weights) out << ' ' << describe(weights->weight(e.u, e.v));
    out << '\n';
  }
}

}  // namespace netsample
