#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "streamviz/sketch.hpp"

using namespace streamviz;

namespace {

std::vector<std::pair<std::uint64_t, std::uint64_t>> random_events(std::size_t count, std::uint64_t keys,
                                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> key(0, keys - 1);
  std::uniform_int_distribution<std::uint64_t> amount(0, 20);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> events(count);
  for (auto& e : events) e = {key(rng), amount(rng)};
  return events;
}

}  // namespace

TEST_CASE("sketch: construction") {
  CHECK_THROWS_AS(CountMinSketch(0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(CountMinSketch(4, 0, 1), std::invalid_argument);
  const CountMinSketch s(4, 10, 7);
  CHECK(s.rows() == 4);
  CHECK(s.cols() == 10);
  for (std::uint64_t key : {0ULL, 1ULL, 42ULL, ~0ULL}) CHECK(s.estimate(key) == 0);
}

TEST_CASE("sketch: single counter holds the total mass") {
  CountMinSketch s(1, 1, 99);
  s.add(1, 5);
  s.add(2, 7);
  s.add(123456789, 1);
  CHECK(s.estimate(1) == 13);
  CHECK(s.estimate(2) == 13);
  CHECK(s.estimate(77) == 13);
}

TEST_CASE("sketch: single key, zero increment") {
  CountMinSketch s(4, 1000, 3);
  s.add(0xa, 3);
  CHECK(s.estimate(0xa) == 3);
  const std::vector<std::uint64_t> before(s.cells().begin(), s.cells().end());
  s.add(0xb, 0);
  CHECK(std::vector<std::uint64_t>(s.cells().begin(), s.cells().end()) == before);
}

TEST_CASE("sketch: buckets stay in range and rows differ") {
  const CountMinSketch s(4, 37, 5);
  std::size_t same = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    for (std::size_t r = 0; r < 4; ++r) CHECK(s.bucket(r, k) < 37);
    if (s.bucket(0, k) == s.bucket(1, k)) ++same;
  }
  CHECK(same < 100);
  CHECK(CountMinSketch(4, 37, 5).bucket(2, 99) == s.bucket(2, 99));
}

TEST_CASE("sketch: parallel adds equal a sequential replay") {
  const auto events = random_events(100000, 5000, 21);
  CountMinSketch parallel(4, 2000, 8);
  const auto n = static_cast<std::int64_t>(events.size());
#pragma omp parallel for schedule(dynamic, 97) num_threads(4)
  for (std::int64_t i = 0; i < n; ++i) {
    parallel.add(events[static_cast<std::size_t>(i)].first, events[static_cast<std::size_t>(i)].second);
  }
  CountMinSketch sequential(4, 2000, 8);
  for (auto it = events.rbegin(); it != events.rend(); ++it) sequential.add(it->first, it->second);
  CHECK(std::equal(parallel.cells().begin(), parallel.cells().end(), sequential.cells().begin()));
}

TEST_CASE("sketch: one-sided error and monotone estimates") {
  const auto events = random_events(20000, 3000, 4);
  CountMinSketch s(3, 500, 2);
  std::vector<std::uint64_t> last(3000, 0);
  for (std::size_t i = 0; i < events.size(); ++i) {
    s.add(events[i].first, events[i].second);
    if (i % 2000 == 1999) {
      for (std::uint64_t k = 0; k < 3000; ++k) {
        const std::uint64_t e = s.estimate(k);
        CHECK(e >= last[k]);
        last[k] = e;
      }
    }
  }
  for (const auto& [key, count] : oracle::exact_counts(events)) CHECK(s.estimate(key) >= count);
}

TEST_CASE("sketch: most estimates are close") {
  const auto events = random_events(100000, 10000, 77);
  CountMinSketch s(4, 2000, 77);
  std::uint64_t total = 0;
  for (const auto& [k, a] : events) {
    s.add(k, a);
    total += a;
  }
  const double bound = std::numbers::e * static_cast<double>(total) / 2000.0;
  const auto exact = oracle::exact_counts(events);
  std::size_t close = 0;
  for (const auto& [key, count] : exact) {
    if (static_cast<double>(s.estimate(key) - count) <= bound) ++close;
  }
  CHECK(static_cast<double>(close) >= 0.99 * static_cast<double>(exact.size()));
}

TEST_CASE("sketch: more rows never raise the large-error rate") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto events = random_events(20000, 4000, 1000 + seed);
    const auto exact = oracle::exact_counts(events);
    std::uint64_t total = 0;
    for (const auto& [k, a] : events) total += a;
    const std::size_t cols = 200;
    const double bound = static_cast<double>(total) / static_cast<double>(cols);
    std::size_t previous = exact.size() + 1;
    for (std::size_t rows = 1; rows <= 4; ++rows) {
      CountMinSketch s(rows, cols, seed);
      for (const auto& [k, a] : events) s.add(k, a);
      std::size_t large = 0;
      for (const auto& [key, count] : exact) {
        if (static_cast<double>(s.estimate(key) - count) > bound) ++large;
      }
      CHECK(large <= previous);
      previous = large;
    }
  }
}

TEST_CASE("sketch: saturation") {
  CountMinSketch s(2, 4, 1);
  s.add(1, ~0ULL - 1);
  CHECK_FALSE(s.saturated());
  s.add(1, 5);
  CHECK(s.saturated());
  CHECK(s.estimate(1) == ~0ULL);
}

TEST_CASE("sketch: column sizing") {
  CHECK(sketch_cols_for(6649470, 1e-4, 6500) == 6500);
  CHECK(sketch_cols_for(6649470, 1e-4, 1) == 665);
  CHECK(sketch_cols_for(6649470, 1e-3, 1024) == 6650);
  CHECK(sketch_cols_for(0, 1e-3, 0) == 1);
}

TEST_CASE("sketch: tsv dump") {
  CountMinSketch s(2, 3, 1);
  s.add(9, 2);
  std::ostringstream out;
  s.dump_tsv(out);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(std::count(text.begin(), text.end(), '\t') == 4);
}
