#include "streamviz/synthetic.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace streamviz {

SyntheticGraph planted_cliques(const PlantedCliques& spec, std::uint64_t seed) {
  if (spec.cliques == 0 || spec.clique_size < 2) throw std::invalid_argument("need cliques of at least two nodes");
  if (spec.bridges > 0 && spec.cliques < 2) throw std::invalid_argument("bridges need at least two cliques");
  std::mt19937_64 rng(seed);
  const std::size_t n = spec.cliques * spec.clique_size;

  std::vector<Edge> edges;
  std::vector<NodeId> truth(n);
  for (std::size_t c = 0; c < spec.cliques; ++c) {
    const std::size_t first = c * spec.clique_size;
    for (std::size_t i = 0; i < spec.clique_size; ++i) {
      truth[first + i] = static_cast<NodeId>(c);
      for (std::size_t j = i + 1; j < spec.clique_size; ++j) {
        edges.push_back({static_cast<NodeId>(first + i), static_cast<NodeId>(first + j)});
      }
    }
  }
  std::shuffle(edges.begin(), edges.end(), rng);

  std::uniform_int_distribution<std::size_t> pick_clique(0, spec.cliques - 1);
  std::uniform_int_distribution<std::size_t> pick_member(0, spec.clique_size - 1);
  for (std::size_t b = 0; b < spec.bridges; ++b) {
    std::size_t x = pick_clique(rng);
    std::size_t y = pick_clique(rng);
    while (y == x) y = pick_clique(rng);
    edges.push_back({static_cast<NodeId>(x * spec.clique_size + pick_member(rng)),
                     static_cast<NodeId>(y * spec.clique_size + pick_member(rng))});
  }
  if (!spec.bridges_last) std::shuffle(edges.begin(), edges.end(), rng);
  return {Graph(n, std::move(edges)), std::move(truth)};
}

SyntheticGraph clustered_graph(const ClusteredSpec& spec, std::uint64_t seed) {
  if (spec.communities == 0 || spec.community_size < 2) throw std::invalid_argument("need communities of at least two nodes");
  if (spec.mixing < 0.0 || spec.mixing > 1.0) throw std::invalid_argument("mixing must lie in [0, 1]");
  if (spec.mixing > 0.0 && spec.communities < 2) throw std::invalid_argument("mixing needs two communities");
  std::mt19937_64 rng(seed);
  const std::size_t n = spec.communities * spec.community_size;

  std::vector<NodeId> truth(n);
  for (std::size_t v = 0; v < n; ++v) truth[v] = static_cast<NodeId>(v / spec.community_size);

  std::uniform_int_distribution<std::size_t> pick_community(0, spec.communities - 1);
  std::uniform_int_distribution<std::size_t> pick_member(0, spec.community_size - 1);
  std::bernoulli_distribution crosses(spec.mixing);
  std::vector<Edge> edges;
  edges.reserve(spec.edges);
  while (edges.size() < spec.edges) {
    const std::size_t c = pick_community(rng);
    std::size_t d = c;
    if (crosses(rng)) {
      while (d == c) d = pick_community(rng);
    }
    const std::size_t u = c * spec.community_size + pick_member(rng);
    const std::size_t v = d * spec.community_size + pick_member(rng);
    if (u == v) continue;
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  return {Graph(n, std::move(edges)), std::move(truth)};
}

}  // namespace streamviz
