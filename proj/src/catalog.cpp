#include "domkit/catalog.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace domkit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::for_case(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Largest multiple of n that fits; reject draws above it.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % n;
}

namespace {

std::vector<std::string> letter_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i)
    ids.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i)) : "e" + std::to_string(i));
  return ids;
}

using Matrix = std::vector<std::uint8_t>;

bool transitive(const Matrix& m, std::size_t n) {
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (m[a * n + b])
        for (std::size_t c = 0; c < n; ++c)
          if (m[b * n + c] && !m[a * n + c]) return false;
  return true;
}

// Lexicographically least relation matrix over all relabellings that keep
// the labelling natural (a < b only if index(a) < index(b)).
Matrix canonical(const Matrix& m, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Matrix best;
  do {
    Matrix r(n * n, 0);
    bool natural = true;
    for (std::size_t a = 0; a < n && natural; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (m[a * n + b]) {
          if (perm[a] > perm[b]) {
            natural = false;
            break;
          }
          r[perm[a] * n + perm[b]] = 1;
        }
    if (natural && (best.empty() || r < best)) best = std::move(r);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<PosetPtr> all_posets(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  std::set<Matrix> seen;
  std::vector<PosetPtr> out;
  const std::uint64_t subsets = std::uint64_t{1} << pairs.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    Matrix m(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (mask >> k & 1) m[pairs[k].first * n + pairs[k].second] = 1;
    if (!transitive(m, n)) continue;
    auto canon = canonical(m, n);
    if (!seen.insert(canon).second) continue;
    auto name = "P" + std::to_string(n) + "_" + std::to_string(out.size());
    out.push_back(FinPoset::from_predicate(name, letter_ids(n), [&](Elem a, Elem b) {
      return canon[a * n + b] != 0;
    }));
  }
  return out;
}

std::vector<PosetPtr> all_posets_up_to(std::size_t max_size) {
  std::vector<PosetPtr> out;
  for (std::size_t n = 0; n <= max_size; ++n) {
    auto level = all_posets(n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

PosetPtr random_poset(Rng& rng, std::size_t n, std::string name) {
  FinPoset::Relation le;
  auto ids = letter_ids(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.chance(1, 2)) le.emplace_back(ids[a], ids[b]);
  return FinPoset::close(std::move(name), ids, le);
}

}  // namespace domkit
