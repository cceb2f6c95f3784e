#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "streamviz/metrics.hpp"

using namespace streamviz;

namespace {

Graph two_triangles() {
  return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

}  // namespace

TEST_CASE("modularity: fixed examples") {
  const Graph g = two_triangles();
  CHECK(modularity(g, std::vector<NodeId>(6, 0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(modularity(Graph(2, {{0, 1}}), std::vector<NodeId>{0, 1}) == doctest::Approx(-0.5));

  const std::vector<NodeId> halves{0, 0, 0, 1, 1, 1};
  const std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  const double literal = oracle::modularity_double_sum(6, edges, halves);
  CHECK(literal == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
  CHECK(modularity(g, halves) == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
}

TEST_CASE("modularity: errors") {
  CHECK_THROWS(modularity(Graph(3, {}), std::vector<NodeId>{0, 1, 2}));
  CHECK_THROWS(modularity(two_triangles(), std::vector<NodeId>{0, 0}));
}

TEST_CASE("modularity: matches the double sum on random graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    const auto edges = oracle::random_edges(n, 1 + rng() % (3 * n), rng);
    const Graph g(n, edges);
    std::vector<NodeId> labels(n);
    const NodeId k = 1 + static_cast<NodeId>(rng() % 12);
    for (auto& l : labels) l = static_cast<NodeId>(rng() % k);
    CHECK(std::abs(modularity(g, labels) - oracle::modularity_double_sum(n, edges, labels)) <= 1e-9);
  }
}

TEST_CASE("modularity: invariant under relabeling, within range") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 30;
    const Graph g(n, oracle::random_edges(n, 80, rng));
    std::vector<NodeId> labels(n);
    for (auto& l : labels) l = static_cast<NodeId>(rng() % 5);
    std::vector<NodeId> perm{3, 0, 4, 1, 2};
    std::vector<NodeId> relabeled(n);
    for (std::size_t v = 0; v < n; ++v) relabeled[v] = perm[labels[v]] + 100;
    const double q = modularity(g, labels);
    CHECK(modularity(g, relabeled) == doctest::Approx(q).epsilon(1e-12));
    CHECK(q >= -0.5);
    CHECK(q <= 1.0);
  }
}

TEST_CASE("modularity counts parallel edges") {
  const Graph g(4, {{0, 1}, {0, 1}, {2, 3}, {1, 2}});
  const std::vector<NodeId> labels{0, 0, 1, 1};
  const std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  CHECK(modularity(g, labels) == doctest::Approx(oracle::modularity_double_sum(4, edges, labels)));
}

TEST_CASE("community_stats") {
  const auto stats = community_stats(two_triangles(), std::vector<NodeId>{0, 0, 0, 1, 1, 1});
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].intra_edges == 3);
  CHECK(stats[0].boundary_edges == 1);
  CHECK(stats[1].intra_edges == 3);
  CHECK(stats[1].boundary_edges == 1);
}

TEST_CASE("intra_probability") {
  CHECK(intra_probability({5, 0}, 0) == 1.0);
  CHECK(intra_probability({5, 0}, 5) == 1.0);
  CHECK(intra_probability({3, 1}, 1) == doctest::Approx(0.75));
  CHECK(intra_probability({3, 1}, 2) == doctest::Approx(0.5));
  CHECK(intra_probability({3, 1}, 4) == 0.0);
  CHECK_THROWS(intra_probability({3, 1}, 5));

  // Draw 2 of {i1, i2, i3, b} without replacement: count the all-intra pairs.
  int all_intra = 0, pairs = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      ++pairs;
      if (a < 3 && b < 3) ++all_intra;
    }
  }
  CHECK(intra_probability({3, 1}, 2) == doctest::Approx(static_cast<double>(all_intra) / pairs));
}

TEST_CASE("intra_probability is non-increasing in k and in boundary edges") {
  for (std::uint64_t intra = 0; intra < 8; ++intra) {
    for (std::uint64_t boundary = 0; boundary < 8; ++boundary) {
      for (std::uint64_t k = 0; k + 1 <= intra + boundary; ++k) {
        CHECK(intra_probability({intra, boundary}, k + 1) <= intra_probability({intra, boundary}, k));
        CHECK(intra_probability({intra, boundary + 1}, k) <= intra_probability({intra, boundary}, k));
      }
    }
  }
}

TEST_CASE("size_histogram") {
  // sizes 1, 2, 3, 4
  const std::vector<NodeId> labels{0, 1, 1, 2, 2, 2, 3, 3, 3, 3};
  CHECK(size_histogram(labels) == std::vector<std::uint64_t>{1, 2, 1});
}
