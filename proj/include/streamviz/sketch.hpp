#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace streamviz {

/// Count-min sketch over 64-bit keys with weighted increments.
///
/// `add` may be called from any number of threads concurrently: each cell is
/// updated with an atomic saturating add, so the final matrix depends only on
/// the multiset of (key, amount) pairs. `estimate` must not race with `add`.
class CountMinSketch {
 public:
  /// Throws std::invalid_argument when rows or cols is zero.
  CountMinSketch(std::size_t rows, std::size_t cols, std::uint64_t seed);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t seed() const noexcept { return seed_; }

  void add(std::uint64_t key, std::uint64_t amount);

  /// Minimum over rows; never below the true total for `key`.
  std::uint64_t estimate(std::uint64_t key) const;

  /// Column that row `row` maps `key` to.
  std::size_t bucket(std::size_t row, std::uint64_t key) const;

  std::uint64_t counter(std::size_t row, std::size_t col) const { return cells_[row * cols_ + col]; }
  std::span<const std::uint64_t> cells() const noexcept { return cells_; }

  /// True once any counter has saturated at UINT64_MAX.
  bool saturated() const noexcept;

  /// Writes the matrix as tab-separated rows.
  void dump_tsv(std::ostream& out) const;

 private:
  // Carter-Wegman hash (a*x + b) mod (2^61 - 1), then reduced to [0, cols).
  struct RowHash {
    std::uint64_t a;
    std::uint64_t b;
  };

  std::size_t rows_;
  std::size_t cols_;
  std::uint64_t seed_;
  std::vector<RowHash> hashes_;
  std::vector<std::uint64_t> cells_;
  std::uint8_t saturated_ = 0;
};

/// Column count for a stream of `edge_count` edges: ceil(fraction * edges),
/// never below `minimum` (and never below 1).
std::size_t sketch_cols_for(std::uint64_t edge_count, double fraction, std::size_t minimum);

}  // namespace streamviz
