#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "streamviz/graph.hpp"

namespace streamviz {

/// What happens when both endpoints of an accepted edge have the same
/// counter degree.
enum class TieRule {
  kSrcJoinsDst,  // default
  kDstJoinsSrc,
  kNone,         // leave both labels unchanged
};

/// How rounds after the first see the graph.
enum class RoundMode {
  /// Stream the edges of the contracted graph: every edge is mapped to its
  /// endpoints' current communities and whole communities merge.
  kContract,
  /// Re-stream the original edges; labels persist per node, counters reset.
  kRestream,
};

struct CommunityAssignment {
  /// Resolved community of every node, dense in 0..community_count()-1.
  std::vector<NodeId> label;
  /// Counter degrees left by the last round, indexed by the ids that round
  /// streamed (communities in contract mode, nodes otherwise).
  std::vector<std::uint32_t> counter_degree;
  /// Resolved labels after each executed round.
  std::vector<std::vector<NodeId>> round_history;

  std::size_t community_count() const;

  /// Every node its own community.
  static CommunityAssignment identity(std::size_t node_count);
};

/// Per-round thresholds base^i for i = 1..rounds, capped at `cap`.
struct ThresholdSchedule {
  std::uint64_t base = 2;
  int rounds = 10;
  std::uint64_t cap = UINT32_MAX - 1;

  /// Base 1 would keep every round at threshold 1; it is lifted to 2.
  /// Throws std::invalid_argument for base 0 or rounds < 1.
  static ThresholdSchedule make(std::uint64_t base, int rounds, std::uint64_t cap);

  /// Threshold for 1-based round `round`.
  std::uint64_t threshold(int round) const;
};

struct RoundOptions {
  TieRule tie_rule = TieRule::kSrcJoinsDst;
  int workers = 1;
  /// Only used with workers > 1: permutes chunk dispatch inside windows of
  /// `workers` chunks, so runs with different seeds see different interleavings.
  std::uint64_t seed = 0;
  /// Edges per dispatched chunk; 0 sizes chunks so that workers * chunk is
  /// about 1/64 of the stream.
  std::size_t chunk = 0;
};

/// One streaming pass over `stream`.
///
/// For every edge (u, v) whose endpoints both have counter degree <= threshold,
/// both counters are incremented (never past threshold + 1). If both
/// incremented values are still within the threshold, the endpoint with the
/// smaller counter adopts the other's label. Loops (u == v) count once and never merge. Label
/// and counter cells are updated atomically; with workers > 1 the result
/// depends on the interleaving.
void stream_round(std::span<const Edge> stream, std::span<NodeId> labels,
                  std::span<std::uint32_t> counters, std::uint64_t threshold,
                  const RoundOptions& options);

/// One round over the edges of `g`, starting from `assignment`'s labels with
/// counters reset. The returned labels are resolved to dense ids.
CommunityAssignment scoda_round(const Graph& g, CommunityAssignment assignment,
                                std::uint64_t threshold, const RoundOptions& options);

struct DetectionOptions {
  RoundOptions round;
  RoundMode mode = RoundMode::kContract;
  /// Contract mode: intra-community edges stay in the stream as loops so a
  /// community's counter reflects its full degree. Off streams only the
  /// inter-community superedges.
  bool count_internal_edges = true;
};

/// Runs up to `schedule.rounds` rounds, stopping once a round leaves the
/// partition unchanged.
CommunityAssignment detect_communities(const Graph& g, const ThresholdSchedule& schedule,
                                       const DetectionOptions& options);

/// Renumbers labels densely in order of first appearance. Returns the count.
std::size_t resolve_labels(std::span<NodeId> labels);

/// TSV with columns: node (external id), community, round_1..round_R.
void write_community_tsv(const Graph& g, const CommunityAssignment& a, std::ostream& out);

}  // namespace streamviz
