#include "streamviz/layout.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "streamviz/parallel.hpp"

namespace streamviz {

LayoutInput LayoutInput::from_graph(const Graph& g) {
  LayoutInput in;
  in.mass.reserve(g.node_count());
  for (std::uint64_t d : g.degrees()) in.mass.push_back(static_cast<double>(d) + 1.0);
  in.edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) in.edges.push_back({e.src, e.dst, 1.0});
  return in;
}

LayoutInput LayoutInput::from_supergraph(const SuperGraph& sg, std::span<const std::int64_t> index_of,
                                         bool use_multiplicity) {
  LayoutInput in;
  for (const SuperNode& n : sg.nodes) {
    if (index_of[n.community] < 0) continue;
    if (static_cast<std::size_t>(index_of[n.community]) != in.mass.size()) {
      throw std::invalid_argument("supernode index map is not dense in supernode order");
    }
    in.mass.push_back(std::max(1.0, static_cast<double>(n.weight)));
  }
  for (const SuperEdge& e : sg.edges) {
    const std::int64_t a = index_of[e.src];
    const std::int64_t b = index_of[e.dst];
    if (a < 0 || b < 0) continue;
    in.edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b),
                        use_multiplicity ? static_cast<double>(e.multiplicity) : 1.0});
  }
  return in;
}

LayoutState init_layout(std::span<const double> masses, std::uint64_t seed) {
  const std::size_t n = masses.size();
  if (n == 0) throw std::invalid_argument("layout needs at least one node");
  LayoutState s;
  s.mass.assign(masses.begin(), masses.end());
  s.pos.resize(n);
  s.force.assign(n, {});
  s.prev_force.assign(n, {});
  const double half = 0.5 * std::sqrt(static_cast<double>(n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-half, half);
  for (Vec2& p : s.pos) {
    p.x = coord(rng);
    p.y = coord(rng);
  }
  return s;
}

LayoutState init_layout(std::size_t n, std::uint64_t seed) {
  std::vector<double> unit(n, 1.0);
  return init_layout(unit, seed);
}

void apply_gravity(LayoutState& state, const LayoutParams& params) {
  const auto n = static_cast<std::int64_t>(state.node_count());
#pragma omp parallel for schedule(static) num_threads(resolve_workers(params.workers))
  for (std::int64_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Vec2 p = state.pos[i];
    double scale = params.gravity * state.mass[i];
    if (params.gravity_form == GravityForm::kConstant) {
      const double d = p.norm();
      if (d == 0.0) continue;
      scale /= d;
    }
    state.force[i] -= scale * p;
  }
}

void apply_repulsion(LayoutState& state, const BarnesHutTree& tree, const LayoutParams& params) {
  const auto n = static_cast<std::int64_t>(state.node_count());
#pragma omp parallel for schedule(dynamic, 64) num_threads(resolve_workers(params.workers))
  for (std::int64_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    state.force[i] += tree.repulsion(i, params.repulsion, params.theta);
  }
}

namespace {

Vec2 attraction_on_src(Vec2 src, Vec2 dst, double weight, AttractionForm form) {
  const Vec2 delta = dst - src;
  if (form == AttractionForm::kLinear) return weight * delta;
  const double d = delta.norm();
  if (d == 0.0) return {};
  return (-weight / d) * delta;
}

void atomic_add(Vec2& target, Vec2 v) {
  std::atomic_ref<double>(target.x).fetch_add(v.x, std::memory_order_relaxed);
  std::atomic_ref<double>(target.y).fetch_add(v.y, std::memory_order_relaxed);
}

}  // namespace

void apply_attraction(LayoutState& state, std::span<const WeightedEdge> edges, const LayoutParams& params) {
  const int workers = resolve_workers(params.workers);
  if (workers == 1) {
    for (const WeightedEdge& e : edges) {
      const Vec2 f = attraction_on_src(state.pos[e.src], state.pos[e.dst], e.weight, params.attraction);
      state.force[e.src] += f;
      state.force[e.dst] -= f;
    }
    return;
  }
  const auto m = static_cast<std::int64_t>(edges.size());
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::int64_t k = 0; k < m; ++k) {
    const WeightedEdge& e = edges[static_cast<std::size_t>(k)];
    const Vec2 f = attraction_on_src(state.pos[e.src], state.pos[e.dst], e.weight, params.attraction);
    atomic_add(state.force[e.src], f);
    atomic_add(state.force[e.dst], -1.0 * f);
  }
}

double local_speed(const LayoutState& state, std::size_t i, SpeedFormula formula, bool mass_weighted) {
  double swing = (state.force[i] - state.prev_force[i]).norm();
  if (mass_weighted) swing *= state.mass[i];
  const double gs = state.global_speed;
  if (formula == SpeedFormula::kSum) return gs / (1.0 + std::sqrt(gs + swing));
  return gs / (1.0 + std::sqrt(gs * swing));
}

namespace {

// Adaptive global speed as in the reference ForceAtlas2 implementation:
// compare the mass-weighted swing against the effective traction and let
// the speed rise by at most 50% per pass.
void update_global_speed(LayoutState& s, double total_swing, double total_traction, double jitter_tolerance) {
  const auto n = static_cast<double>(s.node_count());
  const double estimated = 0.05 * std::sqrt(n);
  const double min_jt = std::sqrt(estimated);
  const double max_jt = 10.0;
  double jt = jitter_tolerance *
              std::max(min_jt, std::min(max_jt, estimated * total_traction / (n * n)));
  constexpr double kMinEfficiency = 0.05;

  if (total_traction > 0.0 && total_swing / total_traction > 2.0) {
    if (s.speed_efficiency > kMinEfficiency) s.speed_efficiency *= 0.5;
    jt = std::max(jt, jitter_tolerance);
  }
  double target = total_swing > 0.0 ? jt * s.speed_efficiency * total_traction / total_swing
                                     : 2.0 * s.global_speed;
  if (total_swing > jt * total_traction) {
    if (s.speed_efficiency > kMinEfficiency) s.speed_efficiency *= 0.7;
  } else if (s.global_speed < 1000.0) {
    s.speed_efficiency *= 1.3;
  }
  constexpr double kMaxRise = 0.5;
  s.global_speed += std::min(target - s.global_speed, kMaxRise * s.global_speed);
}

}  // namespace

IterationStats iterate(LayoutState& state, std::span<const WeightedEdge> edges, const LayoutParams& params) {
  const std::size_t n = state.node_count();
  const int workers = resolve_workers(params.workers);
  std::fill(state.force.begin(), state.force.end(), Vec2{});

  const BarnesHutTree tree(state.pos, state.mass);
  apply_gravity(state, params);
  apply_repulsion(state, tree, params);
  apply_attraction(state, edges, params);

  IterationStats stats;
  for (std::size_t i = 0; i < n; ++i) {
    if (!state.force[i].finite()) {
      throw LayoutError(fmt::format("non-finite force on node {} at iteration {}", i, state.iterations + 1));
    }
    stats.total_swing += state.mass[i] * (state.force[i] - state.prev_force[i]).norm();
    stats.total_traction += state.mass[i] * 0.5 * (state.force[i] + state.prev_force[i]).norm();
  }
  update_global_speed(state, stats.total_swing, stats.total_traction, params.jitter_tolerance);

  const auto count = static_cast<std::int64_t>(n);
  double max_step = 0.0;
#pragma omp parallel for schedule(static) num_threads(workers) reduction(max : max_step)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    Vec2 step = local_speed(state, i, params.speed_formula, params.mass_weighted_swing) * state.force[i];
    const double len = step.norm();
    if (len > params.max_displacement) step = (params.max_displacement / len) * step;
    state.pos[i] += step;
    max_step = std::max(max_step, std::min(len, params.max_displacement));
  }
  stats.max_displacement = max_step;

  std::swap(state.prev_force, state.force);
  std::fill(state.force.begin(), state.force.end(), Vec2{});
  ++state.iterations;
  return stats;
}

LayoutRun run_layout(const LayoutInput& input, int iterations, const LayoutParams& params, std::uint64_t seed) {
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  LayoutState state = init_layout(input.mass, seed);
  LayoutRun run;
  run.history.reserve(static_cast<std::size_t>(iterations));
  for (int it = 0; it < iterations; ++it) run.history.push_back(iterate(state, input.edges, params));
  run.positions = std::move(state.pos);
  return run;
}

double layout_diameter(std::span<const Vec2> positions) {
  if (positions.empty()) return 0.0;
  double min_x = positions[0].x, max_x = min_x, min_y = positions[0].y, max_y = min_y;
  for (Vec2 p : positions) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  return std::hypot(max_x - min_x, max_y - min_y);
}

}  // namespace streamviz
