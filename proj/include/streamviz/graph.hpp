#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace streamviz {

using NodeId = std::uint32_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Thrown by the edge-list reader. `line()` is 1-based; 0 means the error is
/// not tied to a particular line (e.g. an empty stream).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Immutable undirected multigraph over dense node ids 0..node_count-1.
///
/// Edges keep stream order (the community detector depends on it). Self-loops
/// are removed on construction, parallel edges are kept. Degrees count edge
/// endpoints, so the degree sum is always twice the edge count.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from dense ids. Throws std::out_of_range if an endpoint
  /// is not below `node_count`.
  Graph(std::size_t node_count, std::vector<Edge> edges);

  /// As above, also recording the external id of every dense node (used when
  /// writing results back out).
  Graph(std::size_t node_count, std::vector<Edge> edges,
        std::vector<std::int64_t> external_ids);

  std::size_t node_count() const noexcept { return degree_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const std::uint64_t> degrees() const noexcept { return degree_; }
  std::uint64_t degree(NodeId v) const { return degree_.at(v); }

  /// External id of `v`; equals `v` when the graph was not parsed from text.
  std::int64_t external_id(NodeId v) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> degree_;
  std::vector<std::int64_t> external_ids_;
};

struct DegreeStats {
  std::uint64_t mode_degree = 0;  // most frequent nonzero degree, ties to the smaller
  double average_degree = 0.0;    // over all nodes
  std::uint64_t max_degree = 0;
};

/// Throws std::invalid_argument for a graph without edges.
DegreeStats degree_stats(const Graph& g);

/// Reads a whitespace-separated edge list. Lines starting with '#' or '%' and
/// blank lines are skipped; tokens past the second on a line are ignored
/// (SNAP/KONECT files sometimes carry weights or timestamps there). External
/// ids are remapped to dense ids in first-seen order.
Graph parse_edge_list(std::istream& in);
Graph parse_edge_list(std::string_view text);
Graph read_edge_list_file(const std::string& path);

/// Writes one "src dst" line per edge using the external ids.
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace streamviz
