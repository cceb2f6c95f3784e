#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace streamviz {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

/// Distances below this are treated as coincident by the repulsion kernel.
inline constexpr double kCoincidentEpsilon = 1e-4;

/// Deterministic unit vector for the pair (i, j); swapping i and j negates it.
Vec2 pair_jitter(std::size_t i, std::size_t j);

/// Exact repulsion on body i from body j: k * m_i * m_j / d along (p_i - p_j).
Vec2 pair_repulsion(std::size_t i, Vec2 pi, double mi, std::size_t j, Vec2 pj, double mj, double k);

/// Quadtree over a snapshot of body positions with per-cell mass and center
/// of mass. Leaves hold one body, except at the depth limit where coincident
/// bodies share a leaf.
class BarnesHutTree {
 public:
  BarnesHutTree(std::span<const Vec2> positions, std::span<const double> masses);

  /// Approximate repulsion on `body` from all others. A cell of side s whose
  /// center of mass lies at distance d is treated as one body when
  /// s / d < theta and the cell does not contain `body`; theta = 0 is exact.
  Vec2 repulsion(std::size_t body, double k, double theta) const;

  std::size_t cell_count() const noexcept { return cells_.size(); }
  double total_mass() const { return cells_.empty() ? 0.0 : cells_[0].mass; }
  Vec2 center_of_mass() const { return cells_.empty() ? Vec2{} : cells_[0].com; }

  /// Checks the structural invariants (cell mass = sum of children, leaves
  /// hold one body above the depth limit). Used by tests.
  bool consistent(double tolerance = 1e-9) const;

  static constexpr int kMaxDepth = 40;

 private:
  struct Cell {
    Vec2 center;
    double half = 0.0;
    double mass = 0.0;
    Vec2 com;
    std::int32_t child[4] = {-1, -1, -1, -1};
    std::int32_t parent = -1;
    std::int32_t first_body = -1;  // leaves only; further bodies via next_
    std::int32_t depth = 0;
    bool leaf = true;
  };

  bool contains(const Cell& c, Vec2 p) const;
  int quadrant(const Cell& c, Vec2 p) const;
  std::int32_t make_child(std::int32_t parent, int q);
  void insert(std::int32_t body);

  std::span<const Vec2> pos_;
  std::span<const double> mass_;
  std::vector<Cell> cells_;
  std::vector<std::int32_t> next_;
};

}  // namespace streamviz
