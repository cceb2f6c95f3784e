#include "streamviz/metrics.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace streamviz {

namespace {

std::size_t label_bound(std::span<const NodeId> labels) {
  NodeId max_label = 0;
  for (NodeId l : labels) max_label = std::max(max_label, l);
  return labels.empty() ? 0 : std::size_t{max_label} + 1;
}

}  // namespace

double modularity(const Graph& g, std::span<const NodeId> labels) {
  if (g.edge_count() == 0) throw std::invalid_argument("modularity: graph has no edges");
  if (labels.size() != g.node_count()) throw std::invalid_argument("modularity: assignment does not match graph");

  const std::size_t k = label_bound(labels);
  std::vector<double> intra(k, 0.0);
  std::vector<double> volume(k, 0.0);
  for (const Edge& e : g.edges()) {
    if (labels[e.src] == labels[e.dst]) intra[labels[e.src]] += 1.0;
  }
  for (NodeId v = 0; v < g.node_count(); ++v) volume[labels[v]] += static_cast<double>(g.degree(v));

  const auto m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double share = volume[c] / (2.0 * m);
    q += intra[c] / m - share * share;
  }
  return q;
}

double modularity(const Graph& g, const CommunityAssignment& a) { return modularity(g, a.label); }

std::vector<CommunityStats> community_stats(const Graph& g, std::span<const NodeId> labels) {
  if (labels.size() != g.node_count()) throw std::invalid_argument("community_stats: assignment does not match graph");
  std::vector<CommunityStats> stats(label_bound(labels));
  for (const Edge& e : g.edges()) {
    const NodeId a = labels[e.src];
    const NodeId b = labels[e.dst];
    if (a == b) {
      ++stats[a].intra_edges;
    } else {
      ++stats[a].boundary_edges;
      ++stats[b].boundary_edges;
    }
  }
  return stats;
}

double intra_probability(const CommunityStats& cs, std::uint64_t k) {
  const std::uint64_t total = cs.intra_edges + cs.boundary_edges;
  if (k > total) throw std::invalid_argument("intra_probability: k exceeds the community's edge count");
  double p = 1.0;
  for (std::uint64_t l = 0; l < k; ++l) {
    if (cs.intra_edges <= l) return 0.0;
    p *= static_cast<double>(cs.intra_edges - l) / static_cast<double>(total - l);
  }
  return p;
}

std::vector<std::uint64_t> size_histogram(std::span<const NodeId> labels) {
  std::vector<std::uint64_t> sizes(label_bound(labels), 0);
  for (NodeId l : labels) ++sizes[l];
  std::vector<std::uint64_t> histogram;
  for (std::uint64_t s : sizes) {
    if (s == 0) continue;
    const auto bucket = static_cast<std::size_t>(std::bit_width(s) - 1);
    if (histogram.size() <= bucket) histogram.resize(bucket + 1, 0);
    ++histogram[bucket];
  }
  return histogram;
}

}  // namespace streamviz
