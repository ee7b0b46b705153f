#include <doctest.h>

#include <sstream>

#include "netsample/errors.hpp"
#include "netsample/graph.hpp"

using namespace netsample;

namespace {

LoadedGraph parse(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

}  // namespace

TEST_CASE("clique sizes") {
  CHECK(clique(1).num_edges() == 0);
  const Graph k3 = clique(3);
  CHECK(k3.num_edges() == 3);
  for (NodeId i = 0; i < 3; ++i) CHECK(k3.degree(i) == 2);
  CHECK(clique(5).num_edges() == 10);
}

TEST_CASE("star and hypercube") {
  const Graph s = star(5);
  CHECK(s.degrees() == std::vector<std::size_t>{4, 1, 1, 1, 1});
  const Graph c4 = hypercube(2);
  CHECK(c4.num_nodes() == 4);
  CHECK(c4.num_edges() == 4);
  for (NodeId i = 0; i < 4; ++i) CHECK(c4.degree(i) == 2);
  CHECK(hypercube(3).num_edges() == 12);
  CHECK_THROWS_AS(star(1), std::invalid_argument);
  CHECK_THROWS_AS(hypercube(0), std::invalid_argument);
}

TEST_CASE("random regular is regular, connected and seeded") {
  const Graph g = random_regular(10, 3, 7);
  for (NodeId i = 0; i < 10; ++i) CHECK(g.degree(i) == 3);
  CHECK(g.num_edges() == 15);
  CHECK(g == random_regular(10, 3, 7));
  CHECK_THROWS_AS(random_regular(9, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_regular(5, 5, 1), std::invalid_argument);

  const Graph big = random_regular(200, 15, 3);
  for (NodeId i = 0; i < 200; ++i) CHECK(big.degree(i) == 15);
}

TEST_CASE("erdos renyi and barabasi albert") {
  const Graph er = erdos_renyi(60, 0.25, 5);
  CHECK(er.num_nodes() == 60);
  CHECK(er == erdos_renyi(60, 0.25, 5));
  CHECK_THROWS_AS(erdos_renyi(10, 0.0, 1), std::invalid_argument);

  const Graph ba = barabasi_albert(100, 2, 1);
  CHECK(ba.num_nodes() == 100);
  CHECK(ba.num_edges() == 197);
  CHECK(ba == barabasi_albert(100, 2, 1));
  CHECK(barabasi_albert(50, 3, 4).num_edges() == 6 + 3 * 46);
}

TEST_CASE("from_edges validation") {
  const std::vector<Edge> dup{{0, 1}, {1, 0}, {1, 2}};
  CHECK(Graph::from_edges(3, dup).num_edges() == 2);
  const std::vector<Edge> loop{{0, 0}, {0, 1}};
  CHECK_THROWS_AS(Graph::from_edges(2, loop), std::invalid_argument);
  const std::vector<Edge> out_of_range{{0, 5}};
  CHECK_THROWS_AS(Graph::from_edges(2, out_of_range), std::invalid_argument);
  const std::vector<Edge> split{{0, 1}, {2, 3}};
  try {
    Graph::from_edges(4, split);
    FAIL("expected DisconnectedGraphError");
  } catch (const DisconnectedGraphError& e) {
    CHECK(e.components() == 2);
  }
}

TEST_CASE("edge list parsing") {
  const LoadedGraph path = parse("0 1\n1 2\n");
  CHECK(path.graph.num_nodes() == 3);
  CHECK(path.graph.num_edges() == 2);
  CHECK_FALSE(path.weights.has_value());

  const LoadedGraph w = parse("0 1 0.5\n1 0 0.5\n");
  CHECK(w.graph.num_edges() == 1);
  REQUIRE(w.weights.has_value());
  CHECK(w.weights->weight(0, 1) == doctest::Approx(0.5));
  CHECK(w.duplicates_merged == 1);

  const LoadedGraph remap = parse("# comment\n10   20\n20\t7  # trailing\n");
  CHECK(remap.original_ids == std::vector<std::int64_t>{10, 20, 7});

  const LoadedGraph looped = parse("0 1\n1 1\n");
  CHECK(looped.self_loops_dropped == 1);
  CHECK(looped.graph.num_nodes() == 2);
}

TEST_CASE("edge list errors") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("# only a comment\n"), ParseError);
  try {
    parse("0 1\n1 x\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("0 1\n2\n"), DisconnectedGraphError);
  CHECK_THROWS_AS(parse("0 1\n2 2\n"), DisconnectedGraphError);
  CHECK_THROWS_AS(parse("0 1 0.5\n1 2\n"), ParseError);
  CHECK_THROWS_AS(parse("0 1 0.5\n1 0 0.7\n"), ParseError);
  CHECK_THROWS_AS(parse("0 1 -1\n"), std::invalid_argument);
}

TEST_CASE("edge list round trip") {
  const Graph g = barabasi_albert(40, 2, 9);
  const auto v = InfluenceFactors::random_uniform(g, 1.0, 3);
  std::ostringstream out;
  write_edge_list(out, g, &v);
  const LoadedGraph back = parse(out.str());
  CHECK(back.graph.num_edges() == g.num_edges());
  REQUIRE(back.weights.has_value());
  for (const Edge& e : g.edges()) {
    const NodeId u = static_cast<NodeId>(std::find(back.original_ids.begin(), back.original_ids.end(), e.u) -
                                         back.original_ids.begin());
    const NodeId w = static_cast<NodeId>(std::find(back.original_ids.begin(), back.original_ids.end(), e.v) -
                                         back.original_ids.begin());
    CHECK(back.weights->weight(u, w) == v.weight(e.u, e.v));
  }
}

TEST_CASE("influence factors") {
  const Graph g = clique(4);
  const auto a = InfluenceFactors::random_uniform(g, 2.0, 11);
  const auto b = InfluenceFactors::random_uniform(g, 2.0, 11);
  for (const Edge& e : g.edges()) {
    CHECK(a.weight(e.u, e.v) == b.weight(e.v, e.u));
    CHECK(a.weight(e.u, e.v) >= 0.0);
    CHECK(a.weight(e.u, e.v) <= 2.0);
  }
  CHECK_THROWS_AS(InfluenceFactors::uniform(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(InfluenceFactors::per_edge({{{0, 1}, 1.0}, {{1, 0}, 2.0}}), std::invalid_argument);
  const auto partial = InfluenceFactors::per_edge({{{0, 1}, 1.0}});
  CHECK_THROWS(partial.validate(g));
  CHECK_FALSE(InfluenceFactors::uniform(0.0).all_positive(g));
}

TEST_CASE("game matrix") {
  const auto w2 = build_game_matrix(clique(2), InfluenceFactors::uniform(1.0)).w;
  CHECK(w2(0, 0) == 2.0);
  CHECK(w2(0, 1) == -1.0);
  CHECK(build_game_matrix(clique(1), InfluenceFactors::uniform(1.0)).w(0, 0) == 1.0);
  const auto w3 = build_game_matrix(clique(3), InfluenceFactors::uniform(1.0)).w;
  CHECK(w3(1, 1) == 3.0);
  CHECK(w3(1, 2) == -1.0);
  const Graph g = erdos_renyi(30, 0.3, 2);
  const auto w = build_game_matrix(g, InfluenceFactors::random_uniform(g, 1.0, 2)).w;
  CHECK(w == w.transpose());
}
