#include "streamviz/render.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace streamviz {

Palette Palette::qualitative() {
  return Palette{{
      "#b15928",  // brown
      "#cab2d6",  // light purple
      "#6a3d9a",  // purple
      "#fdbf6f",  // light orange
      "#ff7f00",  // orange
      "#fb9a99",  // light red
      "#e31a1c",  // red
      "#b2df8a",  // light green
      "#33a02c",  // green
      "#a6cee3",  // light blue
      "#1f78b4",  // blue
  }};
}

ColorAssignment assign_colors(std::span<const std::uint64_t> weights, Palette palette) {
  const std::size_t n = weights.size();
  ColorAssignment out;
  out.palette = std::move(palette);
  out.color_class.assign(n, kSmallPoolClass);
  if (n == 0) return out;
  if (n == 1) {
    out.color_class[0] = kTopClass;
    return out;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });

  // Compare 2 * cumulative against the total to stay in integers.
  unsigned __int128 total = 0;
  for (std::uint64_t w : weights) total += w;
  unsigned __int128 cumulative = 0;
  std::size_t pool = 0;
  while (pool < n && 2 * (cumulative + weights[order[pool]]) <= total) {
    cumulative += weights[order[pool]];
    ++pool;
  }

  const std::size_t rest = n - pool;
  constexpr std::size_t kGroups = kColorClasses - 1;
  const std::size_t base = rest / kGroups;
  const std::size_t extra = rest % kGroups;
  std::size_t position = pool;
  for (std::size_t g = 0; g < kGroups; ++g) {
    // The top `extra` groups take one more member each.
    const std::size_t size = base + (g >= kGroups - extra ? 1 : 0);
    for (std::size_t k = 0; k < size; ++k) out.color_class[order[position++]] = static_cast<int>(g + 1);
  }
  return out;
}

std::vector<double> compute_radii(std::span<const std::uint64_t> weights, double layout_diameter) {
  std::vector<double> radii(weights.size(), 0.0);
  if (weights.empty()) return radii;
  const std::uint64_t heaviest = *std::max_element(weights.begin(), weights.end());
  const double diameter = layout_diameter > 0.0 ? layout_diameter : 1.0;
  const double scale = heaviest > 0 ? 0.03 * diameter / std::sqrt(static_cast<double>(heaviest)) : 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    radii[i] = scale * std::sqrt(static_cast<double>(weights[i]));
  }
  return radii;
}

std::vector<int> color_full_graph(const Graph& g, const CommunityAssignment& a, const ColorAssignment& colors) {
  if (a.label.size() != g.node_count()) throw std::invalid_argument("assignment does not match graph");
  std::vector<int> classes(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const NodeId c = a.label[v];
    if (c >= colors.color_class.size()) {
      throw std::out_of_range(fmt::format("node {} has community {} without a color", v, c));
    }
    classes[v] = colors.color_class[c];
  }
  return classes;
}

std::string export_svg(std::span<const Vec2> positions, std::span<const double> radii,
                       std::span<const int> classes, const Palette& palette,
                       std::span<const SvgEdge> edges, const SvgOptions& options) {
  const std::size_t n = positions.size();
  if (radii.size() != n || classes.size() != n) throw std::invalid_argument("export_svg: input sizes differ");

  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!positions[i].finite()) throw std::invalid_argument("export_svg: non-finite position");
    const double r = radii[i];
    if (i == 0) {
      min_x = positions[i].x - r;
      max_x = positions[i].x + r;
      min_y = positions[i].y - r;
      max_y = positions[i].y + r;
      continue;
    }
    min_x = std::min(min_x, positions[i].x - r);
    max_x = std::max(max_x, positions[i].x + r);
    min_y = std::min(min_y, positions[i].y - r);
    max_y = std::max(max_y, positions[i].y + r);
  }
  const double extent = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double size = options.size_px;
  const double inner = size * (1.0 - 2.0 * options.margin);
  const double scale = inner / extent;
  const double cx = 0.5 * (min_x + max_x);
  const double cy = 0.5 * (min_y + max_y);
  auto to_px_x = [&](double x) { return 0.5 * size + (x - cx) * scale; };
  auto to_px_y = [&](double y) { return 0.5 * size + (y - cy) * scale; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0:.0f}\" height=\"{0:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {0:.0f}\">\n",
      size);
  svg += fmt::format("<rect width=\"100%\" height=\"100%\" fill=\"{}\"/>\n", options.background);

  if (!edges.empty()) {
    double heaviest = 0.0;
    for (const SvgEdge& e : edges) heaviest = std::max(heaviest, e.multiplicity);
    svg += fmt::format("<g stroke=\"{}\" stroke-width=\"0.5\">\n", options.edge_color);
    for (const SvgEdge& e : edges) {
      const double opacity = 0.1 + 0.6 * (heaviest > 0.0 ? e.multiplicity / heaviest : 0.0);
      svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke-opacity=\"{:.3f}\"/>\n",
                         to_px_x(positions[e.a].x), to_px_y(positions[e.a].y), to_px_x(positions[e.b].x),
                         to_px_y(positions[e.b].y), opacity);
    }
    svg += "</g>\n";
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return classes[a] < classes[b]; });
  svg += "<g stroke=\"none\">\n";
  for (std::size_t i : order) {
    const double r = std::max(options.min_radius_px, radii[i] * scale);
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"{}\"/>\n", to_px_x(positions[i].x),
                       to_px_y(positions[i].y), r, palette.hex.at(static_cast<std::size_t>(classes[i])));
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void write_nodes_tsv(std::span<const std::int64_t> ids, std::span<const Vec2> positions,
                     std::span<const double> radii, std::span<const int> classes,
                     const Palette& palette, std::ostream& out) {
  out << "id\tx\ty\tradius\tclass\thex\n";
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out << fmt::format("{}\t{:.6f}\t{:.6f}\t{:.6f}\t{}\t{}\n", ids[i], positions[i].x, positions[i].y, radii[i],
                       classes[i], palette.hex.at(static_cast<std::size_t>(classes[i])));
  }
}

}  // namespace streamviz
