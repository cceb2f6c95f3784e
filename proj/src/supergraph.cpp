#include "streamviz/supergraph.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "streamviz/parallel.hpp"

namespace streamviz {

std::vector<std::uint64_t> SuperGraph::weights() const {
  std::vector<std::uint64_t> w;
  w.reserve(nodes.size());
  for (const SuperNode& n : nodes) w.push_back(n.weight);
  return w;
}

namespace {

std::size_t label_bound(const CommunityAssignment& a) {
  NodeId max_label = 0;
  for (NodeId l : a.label) max_label = std::max(max_label, l);
  return a.label.empty() ? 0 : std::size_t{max_label} + 1;
}

void check_assignment(const Graph& g, const CommunityAssignment& a) {
  if (a.label.size() != g.node_count()) throw std::invalid_argument("assignment does not match graph");
}

}  // namespace

void accumulate_sizes(const Graph& g, const CommunityAssignment& a, CountMinSketch& sketch,
                      int workers) {
  check_assignment(g, a);
  const auto n = static_cast<std::int64_t>(g.node_count());
  const auto degrees = g.degrees();
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
  for (std::int64_t v = 0; v < n; ++v) {
    const auto i = static_cast<std::size_t>(v);
    sketch.add(a.label[i], degrees[i]);
  }
}

SuperGraph contract(const Graph& g, const CommunityAssignment& a, const CountMinSketch& sketch,
                    int workers, bool keep_members) {
  check_assignment(g, a);
  const int threads = resolve_workers(workers);
  const std::size_t k = label_bound(a);

  SuperGraph sg;
  sg.nodes.resize(k);
  for (std::size_t c = 0; c < k; ++c) sg.nodes[c].community = static_cast<NodeId>(c);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    SuperNode& sn = sg.nodes[a.label[v]];
    ++sn.members;
    sn.isolated = sn.members == 1 && g.degree(v) == 0;
  }
  std::erase_if(sg.nodes, [](const SuperNode& n) { return n.members == 0; });
  if (sg.nodes.size() != k) throw std::invalid_argument("community labels are not dense");
  for (SuperNode& sn : sg.nodes) sn.weight = sketch.estimate(sn.community);

  if (keep_members) {
    sg.members.resize(k);
    for (NodeId v = 0; v < g.node_count(); ++v) sg.members[a.label[v]].push_back(v);
  }

  // Each worker collects packed (min, max) community pairs; one sort merges
  // them and yields a canonical order.
  const std::span<const Edge> edges = g.edges();
  std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(threads));
  const auto m = static_cast<std::int64_t>(edges.size());
#pragma omp parallel num_threads(threads)
  {
    auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) {
      const Edge& e = edges[static_cast<std::size_t>(i)];
      NodeId cu = a.label[e.src];
      NodeId cv = a.label[e.dst];
      if (cu == cv) continue;
      if (cu > cv) std::swap(cu, cv);
      local.push_back((std::uint64_t{cu} << 32) | cv);
    }
  }
  std::vector<std::uint64_t> pairs;
  std::size_t total = 0;
  for (const auto& p : partial) total += p.size();
  pairs.reserve(total);
  for (auto& p : partial) {
    pairs.insert(pairs.end(), p.begin(), p.end());
    std::vector<std::uint64_t>().swap(p);
  }
  std::sort(pairs.begin(), pairs.end());

  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    sg.edges.push_back({static_cast<NodeId>(pairs[i] >> 32),
                        static_cast<NodeId>(pairs[i] & 0xffffffffULL), j - i});
    i = j;
  }
  return sg;
}

std::vector<std::uint64_t> exact_community_volumes(const Graph& g, const CommunityAssignment& a) {
  check_assignment(g, a);
  std::vector<std::uint64_t> volume(label_bound(a), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) volume[a.label[v]] += g.degree(v);
  return volume;
}

void write_supernode_tsv(const SuperGraph& sg, std::ostream& out) {
  out << "community\tweight\n";
  for (const SuperNode& n : sg.nodes) out << n.community << '\t' << n.weight << '\n';
}

void write_superedge_tsv(const SuperGraph& sg, std::ostream& out) {
  out << "src\tdst\tmultiplicity\n";
  for (const SuperEdge& e : sg.edges) out << e.src << '\t' << e.dst << '\t' << e.multiplicity << '\n';
}

}  // namespace streamviz
