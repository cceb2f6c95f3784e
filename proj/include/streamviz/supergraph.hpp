#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "streamviz/community.hpp"
#include "streamviz/graph.hpp"
#include "streamviz/sketch.hpp"

namespace streamviz {

struct SuperNode {
  NodeId community = 0;
  std::uint64_t weight = 0;  // sketch estimate of the members' degree sum
  std::uint32_t members = 0;
  bool isolated = false;     // sole member has degree 0; counted but not drawn
};

struct SuperEdge {
  NodeId src = 0;  // src < dst
  NodeId dst = 0;
  std::uint64_t multiplicity = 0;

  friend bool operator==(const SuperEdge&, const SuperEdge&) = default;
};

/// Contracted graph: one supernode per community (indexed by community id),
/// one superedge per connected community pair, sorted by (src, dst).
struct SuperGraph {
  std::vector<SuperNode> nodes;
  std::vector<SuperEdge> edges;
  /// community id -> original node ids; filled only on request.
  std::vector<std::vector<NodeId>> members;

  std::size_t node_count() const noexcept { return nodes.size(); }
  std::size_t edge_count() const noexcept { return edges.size(); }
  std::vector<std::uint64_t> weights() const;
};

/// Adds every node's degree to the sketch under its community id. Parallel
/// over nodes.
void accumulate_sizes(const Graph& g, const CommunityAssignment& a, CountMinSketch& sketch,
                      int workers = 1);

/// Builds the supergraph. Supernode weights are read from `sketch`, which
/// must already hold the accumulated sizes. Intra-community edges vanish;
/// parallel inter-community edges collapse into one superedge with their
/// count as multiplicity.
SuperGraph contract(const Graph& g, const CommunityAssignment& a, const CountMinSketch& sketch,
                    int workers = 1, bool keep_members = false);

/// Exact per-community degree sums, for checking sketch estimates.
std::vector<std::uint64_t> exact_community_volumes(const Graph& g, const CommunityAssignment& a);

/// "community\tweight" table.
void write_supernode_tsv(const SuperGraph& sg, std::ostream& out);
/// "src\tdst\tmultiplicity" table.
void write_superedge_tsv(const SuperGraph& sg, std::ostream& out);

}  // namespace streamviz
