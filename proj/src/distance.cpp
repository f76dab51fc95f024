#include "pcons/distance.hpp"

#include <algorithm>
#include <bit>
#include <vector>

namespace pcons {

namespace {

void check_same_ground_set(const Partition& a, const Partition& b) {
  if (a.n() != b.n())
    throw std::invalid_argument("distance between partitions of different ground sets (" +
                                std::to_string(a.n()) + " vs " + std::to_string(b.n()) + ")");
}

uint64_t choose2(uint64_t m) { return m * (m - 1) / 2; }

}  // namespace

std::string DistanceSpec::to_string() const {
  switch (kind) {
    case DistanceKind::UnCD:
      return "uncd";
    case DistanceKind::CD:
      return "cd";
    case DistanceKind::Power:
      return "uncd^" + std::to_string(exponent);
  }
  return "?";
}

uint64_t uncd_pairwise(const Partition& a, const Partition& b) {
  check_same_ground_set(a, b);
  uint64_t d = 0;
  for (int j = 2; j <= a.n(); ++j)
    for (int i = 1; i < j; ++i)
      if (a.same_cluster(i, j) != b.same_cluster(i, j)) ++d;
  return d;
}

uint64_t uncd_tabulated(const Partition& a, const Partition& b) {
  check_same_ground_set(a, b);
  const int ka = a.k(), kb = b.k();
  std::vector<uint32_t> cell(static_cast<size_t>(ka) * kb, 0);
  std::vector<uint32_t> row(ka, 0), col(kb, 0);
  for (int e = 1; e <= a.n(); ++e) {
    int la = a.label(e), lb = b.label(e);
    ++cell[static_cast<size_t>(la) * kb + lb];
    ++row[la];
    ++col[lb];
  }
  uint64_t same_a = 0, same_b = 0, same_both = 0;
  for (uint32_t c : row) same_a += choose2(c);
  for (uint32_t c : col) same_b += choose2(c);
  for (uint32_t c : cell) same_both += choose2(c);
  return same_a + same_b - 2 * same_both;
}

uint64_t uncd(const Partition& a, const Partition& b) { return uncd_tabulated(a, b); }

uint64_t uncd_signature(uint128 sa, uint128 sb) {
  uint128 x = sa ^ sb;
  return static_cast<uint64_t>(std::popcount(static_cast<uint64_t>(x))) +
         static_cast<uint64_t>(std::popcount(static_cast<uint64_t>(x >> 64)));
}

Rat cd(const Partition& a, const Partition& b) {
  check_same_ground_set(a, b);
  if (a.n() < 2) throw std::invalid_argument("cd undefined for n < 2 (no element pairs)");
  return Rat(static_cast<int128>(uncd(a, b)), pair_count(a.n()));
}

Rat distance(const Partition& a, const Partition& b, const DistanceSpec& spec) {
  switch (spec.kind) {
    case DistanceKind::UnCD:
      return Rat(static_cast<int128>(uncd(a, b)));
    case DistanceKind::CD:
      return cd(a, b);
    case DistanceKind::Power:
      return Rat(static_cast<int128>(ipow_u128(uncd(a, b), spec.exponent)));
  }
  throw std::logic_error("unknown distance kind");
}

uint128 ipow_u128(uint64_t base, int exponent) {
  if (exponent < 1) throw std::invalid_argument("exponent must be >= 1");
  uint128 r = 1;
  for (int i = 0; i < exponent; ++i) {
    uint128 next = r * base;
    if (base != 0 && next / base != r) throw std::overflow_error("u^e exceeds 128 bits");
    r = next;
  }
  return r;
}

uint128 scaled_distance_from_uncd(uint64_t u, const DistanceSpec& spec) {
  switch (spec.kind) {
    case DistanceKind::UnCD:
    case DistanceKind::CD:
      return u;
    case DistanceKind::Power:
      return ipow_u128(u, spec.exponent);
  }
  throw std::logic_error("unknown distance kind");
}

uint64_t extension_uncd(uint64_t base, std::span<const int> s1, std::span<const int> s2) {
  if (s1.empty() && s2.empty()) return base;
  if (s1.empty()) return base + s2.size();
  if (s2.empty()) return base + s1.size();
  // |s1 \ s2| + |s2 \ s1|; cluster element lists are ascending.
  size_t i = 0, j = 0, only1 = 0, only2 = 0;
  while (i < s1.size() && j < s2.size()) {
    if (s1[i] == s2[j]) {
      ++i;
      ++j;
    } else if (s1[i] < s2[j]) {
      ++only1;
      ++i;
    } else {
      ++only2;
      ++j;
    }
  }
  only1 += s1.size() - i;
  only2 += s2.size() - j;
  return base + only1 + only2;
}

}  // namespace pcons
