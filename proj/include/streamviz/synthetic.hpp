#pragma once

#include <cstdint>
#include <vector>

#include "streamviz/graph.hpp"

namespace streamviz {

/// A generated graph together with the partition it was built from.
struct SyntheticGraph {
  Graph graph;
  std::vector<NodeId> truth;
};

struct PlantedCliques {
  std::size_t cliques = 8;
  std::size_t clique_size = 16;
  std::size_t bridges = 8;  // random inter-clique edges
  /// Bridges follow all clique edges in the stream; otherwise everything is
  /// shuffled together.
  bool bridges_last = true;
};

/// Disjoint cliques joined by random bridges. Clique edges are streamed in a
/// seeded random order.
SyntheticGraph planted_cliques(const PlantedCliques& spec, std::uint64_t seed);

struct ClusteredSpec {
  std::size_t communities = 200;
  std::size_t community_size = 100;
  std::size_t edges = 100000;
  double mixing = 0.05;  // fraction of edges between communities
};

/// Equal-size communities; each edge lands inside a uniformly chosen
/// community with probability 1 - mixing, else between two random
/// communities. Stream order is the generation order.
SyntheticGraph clustered_graph(const ClusteredSpec& spec, std::uint64_t seed);

}  // namespace streamviz
