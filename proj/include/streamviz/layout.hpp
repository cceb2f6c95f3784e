#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "streamviz/graph.hpp"
#include "streamviz/quadtree.hpp"
#include "streamviz/supergraph.hpp"

namespace streamviz {

/// Raised when a force or position stops being finite.
class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SpeedFormula {
  kProduct,  // speed / (1 + sqrt(speed * swing)), the ForceAtlas2 form
  kSum,      // speed / (1 + sqrt(speed + swing))
};

enum class AttractionForm {
  kLinear,      // w * (p_j - p_i): a spring pulling toward the neighbor
  kUnitAway,    // (p_i - p_j) / |p_i - p_j|: unit push away from the neighbor
};

enum class GravityForm {
  kLinear,    // -g * m * p
  kConstant,  // -g * m * p / |p|
};

struct LayoutParams {
  double gravity = 1.0;
  double repulsion = 80.0;
  double theta = 0.5;
  SpeedFormula speed_formula = SpeedFormula::kProduct;
  AttractionForm attraction = AttractionForm::kLinear;
  GravityForm gravity_form = GravityForm::kLinear;
  double max_displacement = 10.0;
  double jitter_tolerance = 1.0;
  /// Local speed reads mass * |force - prev_force| instead of the bare swing.
  bool mass_weighted_swing = true;
  int workers = 1;
};

struct WeightedEdge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;
};

/// What the layout runs on: masses per node plus weighted edges.
struct LayoutInput {
  std::vector<double> mass;
  std::vector<WeightedEdge> edges;

  std::size_t node_count() const noexcept { return mass.size(); }

  /// Full graph: mass = degree + 1, one unit edge per (possibly parallel) edge.
  static LayoutInput from_graph(const Graph& g);

  /// Supergraph: mass = max(weight, 1), edge weight = multiplicity (or 1 when
  /// `use_multiplicity` is false). `index_of` maps community id to layout
  /// index; supernodes mapped to -1 are left out.
  static LayoutInput from_supergraph(const SuperGraph& sg, std::span<const std::int64_t> index_of,
                                     bool use_multiplicity = true);
};

struct LayoutState {
  std::vector<Vec2> pos;
  std::vector<Vec2> force;
  std::vector<Vec2> prev_force;
  std::vector<double> mass;
  double global_speed = 1.0;
  double speed_efficiency = 1.0;
  std::size_t iterations = 0;

  std::size_t node_count() const noexcept { return pos.size(); }
};

/// Positions uniform in a square of side sqrt(n) centered on the origin;
/// unit masses. Throws std::invalid_argument for n == 0.
LayoutState init_layout(std::size_t n, std::uint64_t seed);
/// Same, with the given masses.
LayoutState init_layout(std::span<const double> masses, std::uint64_t seed);

void apply_gravity(LayoutState& state, const LayoutParams& params);
void apply_repulsion(LayoutState& state, const BarnesHutTree& tree, const LayoutParams& params);
void apply_attraction(LayoutState& state, std::span<const WeightedEdge> edges, const LayoutParams& params);

/// Displacement factor for node i from its swing |force - prev_force|,
/// optionally multiplied by the node's mass.
double local_speed(const LayoutState& state, std::size_t i, SpeedFormula formula, bool mass_weighted = false);

struct IterationStats {
  double max_displacement = 0.0;
  double total_swing = 0.0;
  double total_traction = 0.0;
};

/// One full pass: tree build, forces, global speed update, displacement.
/// Throws LayoutError on a non-finite force.
IterationStats iterate(LayoutState& state, std::span<const WeightedEdge> edges, const LayoutParams& params);

struct LayoutRun {
  std::vector<Vec2> positions;
  std::vector<IterationStats> history;
};
/// Runs `iterations` passes from a seeded initial placement.
LayoutRun run_layout(const LayoutInput& input, int iterations, const LayoutParams& params,
                     std::uint64_t seed);

/// Largest pairwise extent: the diagonal of the bounding box.
double layout_diameter(std::span<const Vec2> positions);

}  // namespace streamviz
