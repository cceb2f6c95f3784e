#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "streamviz/community.hpp"
#include "streamviz/graph.hpp"

namespace streamviz {

/// Edge counts of one community C.
struct CommunityStats {
  std::uint64_t intra_edges = 0;     // both endpoints in C
  std::uint64_t boundary_edges = 0;  // exactly one endpoint in C
};

/// Newman modularity of a resolved assignment, with parallel edges counted
/// by multiplicity. O(|E| + |V|). Throws std::invalid_argument for a graph
/// without edges or a mismatched assignment.
double modularity(const Graph& g, std::span<const NodeId> labels);
double modularity(const Graph& g, const CommunityAssignment& a);

/// Per-community intra/boundary edge counts, indexed by label.
std::vector<CommunityStats> community_stats(const Graph& g, std::span<const NodeId> labels);

/// Probability that k edges drawn without replacement from the edges touching
/// C are all intra-community: prod_{l<k} (intra - l) / (intra + boundary - l).
/// Throws std::invalid_argument when k exceeds intra + boundary.
double intra_probability(const CommunityStats& cs, std::uint64_t k);

/// Counts of communities by size class: bucket b holds sizes in [2^b, 2^(b+1)).
std::vector<std::uint64_t> size_histogram(std::span<const NodeId> labels);

}  // namespace streamviz
