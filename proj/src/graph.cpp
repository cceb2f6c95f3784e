#include "streamviz/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

namespace streamviz {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges)
    : Graph(node_count, std::move(edges), {}) {}

Graph::Graph(std::size_t node_count, std::vector<Edge> edges,
             std::vector<std::int64_t> external_ids)
    : degree_(node_count, 0), external_ids_(std::move(external_ids)) {
  if (!external_ids_.empty() && external_ids_.size() != node_count) {
    throw std::invalid_argument("external id table does not match node count");
  }
  std::erase_if(edges, [](const Edge& e) { return e.src == e.dst; });
  for (const Edge& e : edges) {
    if (e.src >= node_count || e.dst >= node_count) {
      throw std::out_of_range(
          fmt::format("edge ({}, {}) outside node range {}", e.src, e.dst, node_count));
    }
    ++degree_[e.src];
    ++degree_[e.dst];
  }
  edges_ = std::move(edges);
}

std::int64_t Graph::external_id(NodeId v) const {
  if (v >= node_count()) throw std::out_of_range("node id out of range");
  return external_ids_.empty() ? static_cast<std::int64_t>(v) : external_ids_[v];
}

DegreeStats degree_stats(const Graph& g) {
  if (g.edge_count() == 0) throw std::invalid_argument("degree_stats: graph has no edges");

  // std::map iterates ascending, so the first maximum is the smaller degree.
  std::map<std::uint64_t, std::size_t> frequency;
  DegreeStats stats;
  std::uint64_t total = 0;
  for (std::uint64_t d : g.degrees()) {
    total += d;
    stats.max_degree = std::max(stats.max_degree, d);
    if (d > 0) ++frequency[d];
  }
  std::size_t best = 0;
  for (const auto& [degree, count] : frequency) {
    if (count > best) {
      best = count;
      stats.mode_degree = degree;
    }
  }
  stats.average_degree = static_cast<double>(total) / static_cast<double>(g.node_count());
  return stats;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t begin = 0;
  while (begin < rest.size() && is_space(rest[begin])) ++begin;
  std::size_t end = begin;
  while (end < rest.size() && !is_space(rest[end])) ++end;
  std::string_view token = rest.substr(begin, end - begin);
  rest.remove_prefix(end);
  return token;
}

std::int64_t parse_id(std::string_view token, std::size_t line) {
  if (token.empty()) throw ParseError(line, fmt::format("line {}: expected two node ids", line));
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ParseError(line, fmt::format("line {}: malformed node id '{}'", line, token));
  }
  return value;
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
  std::unordered_map<std::int64_t, NodeId> dense;
  std::vector<std::int64_t> external;
  std::vector<Edge> edges;

  auto intern = [&](std::int64_t id) {
    auto [it, inserted] = dense.try_emplace(id, static_cast<NodeId>(external.size()));
    if (inserted) external.push_back(id);
    return it->second;
  };

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);

    std::string_view rest = line;
    std::string_view first = next_token(rest);
    if (first.empty() || first.front() == '#' || first.front() == '%') continue;
    std::int64_t a = parse_id(first, line_no);
    std::int64_t b = parse_id(next_token(rest), line_no);
    if (a == b) continue;
    NodeId u = intern(a);
    NodeId v = intern(b);
    edges.push_back({u, v});
  }
  if (edges.empty()) throw ParseError(0, "no edges");
  std::size_t n = external.size();
  return Graph(n, std::move(edges), std::move(external));
}

Graph parse_edge_list(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_edge_list(std::string_view(text));
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  return parse_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (const Edge& e : g.edges()) {
    out << g.external_id(e.src) << ' ' << g.external_id(e.dst) << '\n';
  }
}

}  // namespace streamviz
