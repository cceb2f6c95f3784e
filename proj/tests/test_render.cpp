#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "streamviz/layout.hpp"
#include "streamviz/metrics.hpp"
#include "streamviz/render.hpp"
#include "streamviz/supergraph.hpp"
#include "streamviz/synthetic.hpp"

using namespace streamviz;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++count;
  return count;
}

// Balanced open/close tags, nothing after the root.
bool tags_balanced(const std::string& svg) {
  std::vector<std::string> open;
  bool closed_root = false;
  for (std::size_t at = svg.find('<'); at != std::string::npos; at = svg.find('<', at + 1)) {
    if (closed_root) return false;
    const std::size_t end = svg.find('>', at);
    if (end == std::string::npos) return false;
    const std::string tag = svg.substr(at + 1, end - at - 1);
    if (tag.empty() || tag[0] == '?') continue;
    if (tag[0] == '/') {
      if (open.empty() || open.back() != tag.substr(1)) return false;
      open.pop_back();
      closed_root = open.empty();
    } else if (tag.back() != '/') {
      open.push_back(tag.substr(0, tag.find(' ')));
    }
  }
  return open.empty() && closed_root;
}

struct Fixture50 {
  std::vector<Vec2> pos;
  std::vector<std::uint64_t> weights;
  std::vector<SvgEdge> edges;
};

Fixture50 fixture50() {
  Fixture50 f;
  for (std::uint32_t i = 0; i < 50; ++i) {
    f.pos.push_back({static_cast<double>((i * 37) % 50) - 25.0, static_cast<double>((i * 11) % 23) * 2.0 - 20.0});
    f.weights.push_back((i * 37) % 101 + 1);
    f.edges.push_back({i, (i * 7 + 3) % 50, static_cast<double>(i % 4 + 1)});
  }
  return f;
}

}  // namespace

TEST_CASE("palette") {
  const Palette p = Palette::qualitative();
  CHECK(p.hex[0] == "#b15928");
  CHECK(p.hex[10] == "#1f78b4");
  std::map<std::string, int> seen;
  for (const auto& h : p.hex) CHECK(++seen[h] == 1);
}

TEST_CASE("colors: worked example") {
  const std::vector<std::uint64_t> w{5, 5, 10, 10, 20, 50};
  const ColorAssignment c = assign_colors(w);
  CHECK(c.color_class == std::vector<int>{0, 0, 0, 0, 0, 10});
  CHECK(c.hex(5) == "#1f78b4");
  CHECK(c.hex(0) == "#b15928");
}

TEST_CASE("colors: order of input does not matter") {
  const std::vector<std::uint64_t> w{50, 10, 5, 20, 10, 5};
  CHECK(assign_colors(w).color_class == std::vector<int>{10, 0, 0, 0, 0, 0});
}

TEST_CASE("colors: 22 equal weights") {
  const std::vector<std::uint64_t> w(22, 7);
  const ColorAssignment c = assign_colors(w);
  std::vector<int> per_class(11, 0);
  for (int k : c.color_class) ++per_class[static_cast<std::size_t>(k)];
  CHECK(per_class[0] == 11);
  int total = 0;
  for (int k = 1; k <= 10; ++k) {
    CHECK(per_class[static_cast<std::size_t>(k)] >= 1);
    CHECK(per_class[static_cast<std::size_t>(k)] <= 2);
    total += per_class[static_cast<std::size_t>(k)];
  }
  CHECK(total == 11);
  CHECK(per_class[10] == 2);
  CHECK(per_class[1] == 1);
}

TEST_CASE("colors: degenerate inputs") {
  CHECK(assign_colors(std::vector<std::uint64_t>{42}).color_class == std::vector<int>{kTopClass});
  CHECK(assign_colors(std::vector<std::uint64_t>{}).color_class.empty());
  CHECK(assign_colors(std::vector<std::uint64_t>{0, 0, 0}).color_class == std::vector<int>{0, 0, 0});
}

TEST_CASE("colors: pool rule and monotone classes on random weights") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 300;
    std::vector<std::uint64_t> w(n);
    for (auto& x : w) x = 1 + rng() % (trial % 2 ? 1000 : 10);
    const ColorAssignment c = assign_colors(w);
    std::uint64_t total = 0, pool = 0, lightest_outside = UINT64_MAX;
    for (std::size_t i = 0; i < n; ++i) {
      total += w[i];
      if (c.color_class[i] == 0) {
        pool += w[i];
      } else {
        lightest_outside = std::min(lightest_outside, w[i]);
      }
    }
    if (n > 1) {
      CHECK(2 * pool <= total);
      if (lightest_outside != UINT64_MAX) CHECK(2 * (pool + lightest_outside) > total);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (w[i] > w[j]) CHECK(c.color_class[i] >= c.color_class[j]);
      }
    }
  }
}

TEST_CASE("radii") {
  const auto r = compute_radii(std::vector<std::uint64_t>{16, 4, 1}, 100.0);
  CHECK(r[0] == doctest::Approx(3.0));
  CHECK(r[0] / r[1] == doctest::Approx(2.0));
  // quadrupled weight, quadrupled area
  CHECK((r[0] * r[0]) / (r[1] * r[1]) == doctest::Approx(4.0));
  CHECK(compute_radii(std::vector<std::uint64_t>{9}, 0.0)[0] == doctest::Approx(0.03));
}

TEST_CASE("svg: one node, centered") {
  const std::vector<Vec2> pos{{12.5, -3.0}};
  const std::vector<double> radii{0.0};
  const std::vector<int> classes{10};
  const std::string svg = export_svg(pos, radii, classes, Palette::qualitative(), {});
  CHECK(count_of(svg, "<circle") == 1);
  CHECK(svg.find("cx=\"500.00\" cy=\"500.00\" r=\"0.50\" fill=\"#1f78b4\"") != std::string::npos);
  CHECK(tags_balanced(svg));
}

TEST_CASE("svg: painter's order and edges") {
  const std::vector<Vec2> pos{{0, 0}, {10, 0}, {0, 10}};
  const std::vector<double> radii{1, 2, 0.5};
  const std::vector<int> classes{10, 0, 4};
  const std::vector<SvgEdge> edges{{0, 1, 1.0}, {1, 2, 4.0}};
  const std::string svg = export_svg(pos, radii, classes, Palette::qualitative(), edges);
  CHECK(count_of(svg, "<line") == 2);
  CHECK(svg.find("stroke-opacity=\"0.700\"") != std::string::npos);
  CHECK(svg.find("stroke-opacity=\"0.250\"") != std::string::npos);
  const std::size_t brown = svg.find("#b15928");
  const std::size_t orange = svg.find("#ff7f00");
  const std::size_t blue = svg.find("#1f78b4");
  CHECK(brown < orange);
  CHECK(orange < blue);
  CHECK(tags_balanced(svg));
  CHECK_THROWS(export_svg(pos, radii, std::vector<int>{1}, Palette::qualitative(), {}));
}

TEST_CASE("svg: golden 50-node supergraph") {
  const Fixture50 f = fixture50();
  const ColorAssignment colors = assign_colors(f.weights);
  const auto radii = compute_radii(f.weights, layout_diameter(f.pos));
  const std::string svg = export_svg(f.pos, radii, colors.color_class, colors.palette, f.edges);
  CHECK(svg == export_svg(f.pos, radii, colors.color_class, colors.palette, f.edges));
  CHECK(count_of(svg, "<circle") == 50);
  CHECK(tags_balanced(svg));

  const std::string path = std::string(STREAMVIZ_TEST_DATA) + "/golden_supergraph50.svg";
  if (std::getenv("STREAMVIZ_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << svg;
  }
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  const std::string golden{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  CHECK(svg == golden);
}

TEST_CASE("nodes tsv") {
  const std::vector<std::int64_t> ids{7};
  const std::vector<Vec2> pos{{1.5, -2.0}};
  const std::vector<double> radii{0.25};
  const std::vector<int> classes{3};
  std::ostringstream out;
  write_nodes_tsv(ids, pos, radii, classes, Palette::qualitative(), out);
  CHECK(out.str() == "id\tx\ty\tradius\tclass\thex\n7\t1.500000\t-2.000000\t0.250000\t3\t#fdbf6f\n");
}

TEST_CASE("full-graph colors") {
  const Graph g(4, {{0, 1}, {2, 3}});
  CommunityAssignment one;
  one.label = {0, 0, 0, 0};
  const auto all = color_full_graph(g, one, assign_colors(std::vector<std::uint64_t>{4}));
  CHECK(all == std::vector<int>{10, 10, 10, 10});

  CommunityAssignment identity = CommunityAssignment::identity(4);
  const std::vector<std::uint64_t> w{1, 2, 3, 40};
  const ColorAssignment c = assign_colors(w);
  CHECK(color_full_graph(g, identity, c) == c.color_class);

  CommunityAssignment bad;
  bad.label = {0, 0, 0, 5};
  CHECK_THROWS_AS(color_full_graph(g, bad, c), std::out_of_range);
}

TEST_CASE("full-graph colors follow planted cliques") {
  const SyntheticGraph s = planted_cliques({}, 3);
  const DegreeStats stats = degree_stats(s.graph);
  DetectionOptions o;
  o.round.workers = 1;
  const CommunityAssignment a = detect_communities(s.graph, ThresholdSchedule::make(stats.mode_degree, 10, stats.max_degree), o);
  CountMinSketch sketch(4, 1024, 1);
  accumulate_sizes(s.graph, a, sketch);
  const SuperGraph sg = contract(s.graph, a, sketch);
  const auto classes = color_full_graph(s.graph, a, assign_colors(sg.weights()));
  for (NodeId clique = 0; clique < 8; ++clique) {
    std::map<int, int> votes;
    for (NodeId v = 0; v < s.truth.size(); ++v) {
      if (s.truth[v] == clique) ++votes[classes[v]];
    }
    int best = 0;
    for (const auto& [k, count] : votes) best = std::max(best, count);
    CHECK(best >= 0.95 * 16);
  }
}
