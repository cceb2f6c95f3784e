#include "streamviz/quadtree.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace streamviz {

Vec2 pair_jitter(std::size_t i, std::size_t j) {
  std::uint64_t lo = std::min(i, j);
  std::uint64_t hi = std::max(i, j);
  std::uint64_t h = lo * 0x9e3779b97f4a7c15ULL ^ (hi + 0x632be59bd9b4e019ULL);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 29;
  double angle = static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;
  Vec2 u{std::cos(angle), std::sin(angle)};
  return i < j ? u : -1.0 * u;
}

Vec2 pair_repulsion(std::size_t i, Vec2 pi, double mi, std::size_t j, Vec2 pj, double mj, double k) {
  Vec2 delta = pi - pj;
  double d = delta.norm();
  Vec2 dir;
  if (d < kCoincidentEpsilon) {
    dir = pair_jitter(i, j);
    d = kCoincidentEpsilon;
  } else {
    dir = (1.0 / d) * delta;
  }
  return (k * mi * mj / d) * dir;
}

BarnesHutTree::BarnesHutTree(std::span<const Vec2> positions, std::span<const double> masses)
    : pos_(positions), mass_(masses), next_(positions.size(), -1) {
  if (positions.size() != masses.size()) throw std::invalid_argument("positions/masses size mismatch");
  if (positions.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw std::length_error("too many bodies");
  }
  if (positions.empty()) return;

  double min_x = positions[0].x, max_x = min_x, min_y = positions[0].y, max_y = min_y;
  for (Vec2 p : positions) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  Cell root;
  root.center = {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)};
  // Slightly enlarged so bodies on the max edge fall strictly inside.
  root.half = 0.5 * std::max({max_x - min_x, max_y - min_y, 1e-9}) * (1.0 + 1e-9) + 1e-12;
  cells_.reserve(2 * positions.size() + 1);
  cells_.push_back(root);

  for (std::size_t b = 0; b < positions.size(); ++b) insert(static_cast<std::int32_t>(b));

  // Children always have larger indices than their parent, so one reverse
  // sweep finalizes every cell before it is folded into its parent.
  std::vector<Vec2> moment(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    Cell& cell = cells_[c];
    if (!cell.leaf) continue;
    for (std::int32_t b = cell.first_body; b >= 0; b = next_[static_cast<std::size_t>(b)]) {
      const auto bi = static_cast<std::size_t>(b);
      cell.mass += mass_[bi];
      moment[c] += mass_[bi] * pos_[bi];
    }
  }
  for (std::size_t c = cells_.size(); c-- > 0;) {
    Cell& cell = cells_[c];
    cell.com = cell.mass > 0.0 ? (1.0 / cell.mass) * moment[c] : cell.center;
    if (cell.parent >= 0) {
      const auto p = static_cast<std::size_t>(cell.parent);
      cells_[p].mass += cell.mass;
      moment[p] += moment[c];
    }
  }
}

bool BarnesHutTree::contains(const Cell& c, Vec2 p) const {
  return std::abs(p.x - c.center.x) <= c.half && std::abs(p.y - c.center.y) <= c.half;
}

int BarnesHutTree::quadrant(const Cell& c, Vec2 p) const {
  return (p.x >= c.center.x ? 1 : 0) | (p.y >= c.center.y ? 2 : 0);
}

std::int32_t BarnesHutTree::make_child(std::int32_t parent, int q) {
  const Cell& p = cells_[static_cast<std::size_t>(parent)];
  Cell child;
  child.half = 0.5 * p.half;
  child.center = {p.center.x + ((q & 1) ? child.half : -child.half),
                  p.center.y + ((q & 2) ? child.half : -child.half)};
  child.parent = parent;
  child.depth = p.depth + 1;
  auto index = static_cast<std::int32_t>(cells_.size());
  cells_.push_back(child);
  cells_[static_cast<std::size_t>(parent)].child[q] = index;
  return index;
}

void BarnesHutTree::insert(std::int32_t body) {
  const Vec2 p = pos_[static_cast<std::size_t>(body)];
  std::int32_t current = 0;
  while (true) {
    Cell& cell = cells_[static_cast<std::size_t>(current)];
    if (!cell.leaf) {
      const int q = quadrant(cell, p);
      std::int32_t next = cell.child[q];
      if (next < 0) {
        next = make_child(current, q);
        cells_[static_cast<std::size_t>(next)].first_body = body;
        return;
      }
      current = next;
      continue;
    }
    if (cell.first_body < 0) {
      cell.first_body = body;
      return;
    }
    if (cell.depth >= kMaxDepth) {
      next_[static_cast<std::size_t>(body)] = cell.first_body;
      cell.first_body = body;
      return;
    }
    // Split: push the resident body one level down, then retry from here.
    const std::int32_t resident = cell.first_body;
    cell.first_body = -1;
    cell.leaf = false;
    const int q = quadrant(cell, pos_[static_cast<std::size_t>(resident)]);
    std::int32_t child = make_child(current, q);
    cells_[static_cast<std::size_t>(child)].first_body = resident;
  }
}

Vec2 BarnesHutTree::repulsion(std::size_t body, double k, double theta) const {
  Vec2 force;
  if (cells_.empty()) return force;
  const Vec2 p = pos_[body];
  const double m = mass_[body];

  std::int32_t stack[4 * kMaxDepth + 8];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Cell& cell = cells_[static_cast<std::size_t>(stack[--top])];
    if (cell.mass <= 0.0) continue;
    if (cell.leaf) {
      for (std::int32_t b = cell.first_body; b >= 0; b = next_[static_cast<std::size_t>(b)]) {
        const auto j = static_cast<std::size_t>(b);
        if (j == body) continue;
        force += pair_repulsion(body, p, m, j, pos_[j], mass_[j], k);
      }
      continue;
    }
    const Vec2 delta = p - cell.com;
    const double d = delta.norm();
    if (!contains(cell, p) && 2.0 * cell.half < theta * d) {
      force += (k * m * cell.mass / (d * d)) * delta;
      continue;
    }
    for (std::int32_t c : cell.child) {
      if (c >= 0) stack[top++] = c;
    }
  }
  return force;
}

bool BarnesHutTree::consistent(double tolerance) const {
  for (const Cell& cell : cells_) {
    if (cell.leaf) {
      int bodies = 0;
      for (std::int32_t b = cell.first_body; b >= 0; b = next_[static_cast<std::size_t>(b)]) ++bodies;
      if (bodies > 1 && cell.depth < kMaxDepth) return false;
      continue;
    }
    double sum = 0.0;
    for (std::int32_t c : cell.child) {
      if (c >= 0) sum += cells_[static_cast<std::size_t>(c)].mass;
    }
    if (std::abs(sum - cell.mass) > tolerance * std::max(1.0, cell.mass)) return false;
  }
  return true;
}

}  // namespace streamviz
