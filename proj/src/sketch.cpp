#include "streamviz/sketch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace streamviz {

namespace {

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mod_mersenne61(unsigned __int128 x) {
  std::uint64_t lo = static_cast<std::uint64_t>(x & kMersenne61);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  std::uint64_t r = lo + hi;  // < 2^62 for x < 2^122
  r = (r & kMersenne61) + (r >> 61);
  return r >= kMersenne61 ? r - kMersenne61 : r;
}

}  // namespace

CountMinSketch::CountMinSketch(std::size_t rows, std::size_t cols, std::uint64_t seed)
    : rows_(rows), cols_(cols), seed_(seed) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("count-min sketch needs rows >= 1 and cols >= 1");
  std::uint64_t state = seed;
  hashes_.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    std::uint64_t a = 1 + splitmix64(state) % (kMersenne61 - 1);
    std::uint64_t b = splitmix64(state) % kMersenne61;
    hashes_.push_back({a, b});
  }
  cells_.assign(rows * cols, 0);
}

std::size_t CountMinSketch::bucket(std::size_t row, std::uint64_t key) const {
  const RowHash& h = hashes_[row];
  std::uint64_t x = mod_mersenne61(key);
  std::uint64_t hashed = mod_mersenne61(static_cast<unsigned __int128>(h.a) * x + h.b);
  // Scale the 61-bit hash onto [0, cols) without a modulo bias.
  return static_cast<std::size_t>((static_cast<unsigned __int128>(hashed) * cols_) >> 61);
}

void CountMinSketch::add(std::uint64_t key, std::uint64_t amount) {
  if (amount == 0) return;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t row = 0; row < rows_; ++row) {
    std::atomic_ref<std::uint64_t> cell(cells_[row * cols_ + bucket(row, key)]);
    std::uint64_t current = cell.load(std::memory_order_relaxed);
    std::uint64_t next;
    do {
      next = current > kMax - amount ? kMax : current + amount;
    } while (!cell.compare_exchange_weak(current, next, std::memory_order_relaxed));
    if (next == kMax) std::atomic_ref<std::uint8_t>(saturated_).store(1, std::memory_order_relaxed);
  }
}

std::uint64_t CountMinSketch::estimate(std::uint64_t key) const {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t row = 0; row < rows_; ++row) {
    best = std::min(best, cells_[row * cols_ + bucket(row, key)]);
  }
  return best;
}

bool CountMinSketch::saturated() const noexcept { return saturated_ != 0; }

void CountMinSketch::dump_tsv(std::ostream& out) const {
  for (std::size_t row = 0; row < rows_; ++row) {
    for (std::size_t col = 0; col < cols_; ++col) {
      if (col) out << '\t';
      out << cells_[row * cols_ + col];
    }
    out << '\n';
  }
}

std::size_t sketch_cols_for(std::uint64_t edge_count, double fraction, std::size_t minimum) {
  auto scaled = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(edge_count)));
  return std::max<std::size_t>({scaled, minimum, 1});
}

}  // namespace streamviz
