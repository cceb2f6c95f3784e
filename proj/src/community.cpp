#include "streamviz/community.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "streamviz/parallel.hpp"

namespace streamviz {

std::size_t CommunityAssignment::community_count() const {
  if (label.empty()) return 0;
  std::vector<bool> seen(label.size(), false);
  std::size_t count = 0;
  for (NodeId l : label) {
    if (l >= seen.size()) seen.resize(l + 1, false);
    if (!seen[l]) {
      seen[l] = true;
      ++count;
    }
  }
  return count;
}

CommunityAssignment CommunityAssignment::identity(std::size_t node_count) {
  CommunityAssignment a;
  a.label.resize(node_count);
  std::iota(a.label.begin(), a.label.end(), NodeId{0});
  return a;
}

ThresholdSchedule ThresholdSchedule::make(std::uint64_t base, int rounds, std::uint64_t cap) {
  if (base == 0) throw std::invalid_argument("threshold base must be positive");
  if (rounds < 1) throw std::invalid_argument("need at least one round");
  if (cap == 0) throw std::invalid_argument("threshold cap must be positive");
  return ThresholdSchedule{std::max<std::uint64_t>(base, 2), rounds, cap};
}

std::uint64_t ThresholdSchedule::threshold(int round) const {
  std::uint64_t t = 1;
  for (int i = 0; i < round; ++i) {
    if (t > cap / base) return cap;
    t *= base;
  }
  return std::min(t, cap);
}

std::size_t resolve_labels(std::span<NodeId> labels) {
  constexpr NodeId kUnset = std::numeric_limits<NodeId>::max();
  NodeId max_label = 0;
  for (NodeId l : labels) max_label = std::max(max_label, l);
  std::vector<NodeId> remap(labels.empty() ? 0 : std::size_t{max_label} + 1, kUnset);
  NodeId next = 0;
  for (NodeId& l : labels) {
    if (remap[l] == kUnset) remap[l] = next++;
    l = remap[l];
  }
  return next;
}

namespace {

// Increments `cell` unless it already exceeds `threshold`. Returns the new
// value, or 0 if the counter was full.
std::uint32_t bounded_increment(std::uint32_t& cell, std::uint32_t threshold) {
  std::atomic_ref<std::uint32_t> ref(cell);
  std::uint32_t current = ref.load(std::memory_order_relaxed);
  do {
    if (current > threshold) return 0;
  } while (!ref.compare_exchange_weak(current, current + 1, std::memory_order_relaxed));
  return current + 1;
}

void process_edge(const Edge& e, std::span<NodeId> labels, std::span<std::uint32_t> counters,
                  std::uint32_t threshold, TieRule tie_rule) {
  const NodeId u = e.src;
  const NodeId v = e.dst;
  if (std::atomic_ref<std::uint32_t>(counters[u]).load(std::memory_order_relaxed) > threshold ||
      std::atomic_ref<std::uint32_t>(counters[v]).load(std::memory_order_relaxed) > threshold) {
    return;
  }
  const std::uint32_t du = bounded_increment(counters[u], threshold);
  if (u == v) return;  // an internal edge of a contracted community: one event
  const std::uint32_t dv = bounded_increment(counters[v], threshold);
  if (du == 0 || dv == 0 || du > threshold || dv > threshold) return;

  std::atomic_ref<NodeId> label_u(labels[u]);
  std::atomic_ref<NodeId> label_v(labels[v]);
  bool u_joins = du < dv;
  bool v_joins = dv < du;
  if (du == dv) {
    u_joins = tie_rule == TieRule::kSrcJoinsDst;
    v_joins = tie_rule == TieRule::kDstJoinsSrc;
  }
  if (u_joins) {
    label_u.store(label_v.load(std::memory_order_relaxed), std::memory_order_relaxed);
  } else if (v_joins) {
    label_v.store(label_u.load(std::memory_order_relaxed), std::memory_order_relaxed);
  }
}

}  // namespace

void stream_round(std::span<const Edge> stream, std::span<NodeId> labels,
                  std::span<std::uint32_t> counters, std::uint64_t threshold,
                  const RoundOptions& options) {
  if (labels.size() != counters.size()) throw std::invalid_argument("labels/counters size mismatch");
  const auto t = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(threshold, std::numeric_limits<std::uint32_t>::max() - 1));
  const int workers = resolve_workers(options.workers);

  if (workers == 1) {
    for (const Edge& e : stream) process_edge(e, labels, counters, t, options.tie_rule);
    return;
  }

  // Chunks are dispatched roughly in stream order, like thread blocks on a
  // GPU; inside each window of `workers` chunks the order is shuffled by
  // seed. The automatic chunk keeps about 1/64 of the stream in flight.
  const std::size_t chunk =
      options.chunk > 0 ? options.chunk
                        : std::clamp<std::size_t>((stream.size() + 64 * workers - 1) / (64 * workers), 1, 4096);
  const std::size_t chunk_count = (stream.size() + chunk - 1) / chunk;
  std::vector<std::size_t> order(chunk_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(options.seed);
  const auto window = static_cast<std::size_t>(workers);
  for (std::size_t begin = 0; begin < chunk_count; begin += window) {
    auto first = order.begin() + static_cast<std::ptrdiff_t>(begin);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(std::min(begin + window, chunk_count));
    std::shuffle(first, last, rng);
  }

  const auto count = static_cast<std::int64_t>(chunk_count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::int64_t i = 0; i < count; ++i) {
    const std::size_t begin = order[static_cast<std::size_t>(i)] * chunk;
    const std::size_t end = std::min(begin + chunk, stream.size());
    for (std::size_t k = begin; k < end; ++k) {
      process_edge(stream[k], labels, counters, t, options.tie_rule);
    }
  }
}

CommunityAssignment scoda_round(const Graph& g, CommunityAssignment assignment,
                                std::uint64_t threshold, const RoundOptions& options) {
  if (threshold == 0) throw std::invalid_argument("threshold must be at least 1");
  if (assignment.label.size() != g.node_count()) {
    throw std::invalid_argument("assignment does not match graph");
  }
  assignment.counter_degree.assign(g.node_count(), 0);
  stream_round(g.edges(), assignment.label, assignment.counter_degree, threshold, options);
  resolve_labels(assignment.label);
  assignment.round_history.push_back(assignment.label);
  return assignment;
}

namespace {

std::vector<Edge> contracted_stream(const Graph& g, std::span<const NodeId> label,
                                    bool keep_internal, int workers) {
  const std::span<const Edge> edges = g.edges();
  std::vector<Edge> stream;
  if (keep_internal) {
    stream.resize(edges.size());
    const auto m = static_cast<std::int64_t>(edges.size());
#pragma omp parallel for schedule(static) num_threads(workers)
    for (std::int64_t i = 0; i < m; ++i) {
      const Edge& e = edges[static_cast<std::size_t>(i)];
      stream[static_cast<std::size_t>(i)] = {label[e.src], label[e.dst]};
    }
    return stream;
  }
  stream.reserve(edges.size());
  for (const Edge& e : edges) {
    if (label[e.src] != label[e.dst]) stream.push_back({label[e.src], label[e.dst]});
  }
  return stream;
}

}  // namespace

CommunityAssignment detect_communities(const Graph& g, const ThresholdSchedule& schedule,
                                       const DetectionOptions& options) {
  if (g.edge_count() == 0) throw std::invalid_argument("detect_communities: graph has no edges");
  const int workers = resolve_workers(options.round.workers);
  RoundOptions round_options = options.round;
  round_options.workers = workers;

  CommunityAssignment result = CommunityAssignment::identity(g.node_count());
  std::size_t communities = g.node_count();

  for (int round = 1; round <= schedule.rounds; ++round) {
    const std::uint64_t threshold = schedule.threshold(round);
    round_options.seed = options.round.seed + static_cast<std::uint64_t>(round);
    std::vector<NodeId> next;

    if (options.mode == RoundMode::kContract) {
      std::vector<Edge> stream = contracted_stream(g, result.label, options.count_internal_edges, workers);
      std::vector<NodeId> merged(communities);
      std::iota(merged.begin(), merged.end(), NodeId{0});
      result.counter_degree.assign(communities, 0);
      stream_round(stream, merged, result.counter_degree, threshold, round_options);
      next.resize(g.node_count());
      for (std::size_t v = 0; v < next.size(); ++v) next[v] = merged[result.label[v]];
    } else {
      next = result.label;
      result.counter_degree.assign(g.node_count(), 0);
      stream_round(g.edges(), next, result.counter_degree, threshold, round_options);
    }

    communities = resolve_labels(next);
    const bool unchanged = next == result.label;
    result.label = std::move(next);
    result.round_history.push_back(result.label);
    if (unchanged) break;
  }
  return result;
}

void write_community_tsv(const Graph& g, const CommunityAssignment& a, std::ostream& out) {
  out << "node\tcommunity";
  for (std::size_t r = 0; r < a.round_history.size(); ++r) out << "\tround_" << r + 1;
  out << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.external_id(v) << '\t' << a.label[v];
    for (const auto& snapshot : a.round_history) out << '\t' << snapshot[v];
    out << '\n';
  }
}

}  // namespace streamviz
