#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "domkit/poset.hpp"

namespace domkit {

// Platform-independent pseudorandom source: std::mt19937_64 (whose output
// sequence is fixed by the standard) seeded through one splitmix64 round.
// Bounded draws use rejection on the raw 64-bit output, never the
// implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  // Independent stream for case `index` of a seeded run.
  static Rng for_case(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items.at(below(items.size()));
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// All posets on exactly `n` elements up to isomorphism, in a fixed order.
// Elements are named a, b, c, ... and numbered along a linear extension.
std::vector<PosetPtr> all_posets(std::size_t n);
// all_posets(0) ++ ... ++ all_posets(max_size).
std::vector<PosetPtr> all_posets_up_to(std::size_t max_size);

// Random naturally-labelled poset: each pair i < j is related with
// probability 1/2 before transitive closure.
PosetPtr random_poset(Rng& rng, std::size_t n, std::string name = "P");

}  // namespace domkit
