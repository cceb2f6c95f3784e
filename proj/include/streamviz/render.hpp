#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "streamviz/community.hpp"
#include "streamviz/graph.hpp"
#include "streamviz/quadtree.hpp"

namespace streamviz {

inline constexpr int kColorClasses = 11;
inline constexpr int kSmallPoolClass = 0;
inline constexpr int kTopClass = kColorClasses - 1;

/// One color per class: the small-community pool first, then ten colors from
/// the lightest/smallest rank to the largest.
struct Palette {
  std::array<std::string, kColorClasses> hex;

  /// Brown, then light/dark pairs of purple, orange, red, green and blue
  /// taken from the ColorBrewer "Paired" scheme.
  static Palette qualitative();
};

struct ColorAssignment {
  std::vector<int> color_class;  // per supernode, 0..10
  Palette palette;

  const std::string& hex(std::size_t supernode) const { return palette.hex[color_class.at(supernode)]; }
};

/// Size-rank coloring. Supernodes sorted by weight (ties by index): the
/// longest prefix whose cumulative weight stays within half the total goes
/// to class 0; the rest are cut into ten contiguous equal-count groups,
/// classes 1..10, with any remainder going to the largest groups. A single
/// supernode always gets the top class.
ColorAssignment assign_colors(std::span<const std::uint64_t> weights, Palette palette = Palette::qualitative());

/// r = s * sqrt(weight), with s chosen so the heaviest node's radius is 3% of
/// `layout_diameter` (1 is used when the diameter is 0).
std::vector<double> compute_radii(std::span<const std::uint64_t> weights, double layout_diameter);

/// Class of every original node: the class of its community's supernode.
/// Throws std::out_of_range when a label has no supernode.
std::vector<int> color_full_graph(const Graph& g, const CommunityAssignment& a, const ColorAssignment& colors);

struct SvgEdge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double multiplicity = 1.0;
};

struct SvgOptions {
  double size_px = 1000.0;       // square canvas
  double margin = 0.05;          // fraction of the canvas on each side
  double min_radius_px = 0.5;
  std::string background = "#ffffff";
  std::string edge_color = "#7f7f7f";
};

/// Circles (in ascending class order, so the small-community pool is drawn
/// first) over optional edges whose opacity grows with multiplicity. Output
/// depends only on the inputs.
std::string export_svg(std::span<const Vec2> positions, std::span<const double> radii,
                       std::span<const int> classes, const Palette& palette,
                       std::span<const SvgEdge> edges, const SvgOptions& options = {});

/// Sidecar table: id, x, y, radius, class, hex.
void write_nodes_tsv(std::span<const std::int64_t> ids, std::span<const Vec2> positions,
                     std::span<const double> radii, std::span<const int> classes,
                     const Palette& palette, std::ostream& out);

}  // namespace streamviz
