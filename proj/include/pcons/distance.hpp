#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "pcons/partition.hpp"
#include "pcons/rational.hpp"

namespace pcons {

enum class DistanceKind { UnCD, CD, Power };

// Which dissimilarity to use between two partitions of the same ground set:
//   UnCD   - number of element pairs the two partitions treat differently
//            (together in one, apart in the other),
//   CD     - UnCD divided by the number of pairs n(n-1)/2, in [0, 1],
//   Power  - UnCD raised to an integer exponent >= 1, which exaggerates
//            large disagreements relative to small ones.
struct DistanceSpec {
  DistanceKind kind = DistanceKind::UnCD;
  int exponent = 1;  // used by Power only

  static DistanceSpec uncd() { return {DistanceKind::UnCD, 1}; }
  static DistanceSpec cd() { return {DistanceKind::CD, 1}; }
  static DistanceSpec power(int exponent) {
    if (exponent < 1 || exponent > 16)
      throw std::invalid_argument("power exponent must be in 1..16");
    return {DistanceKind::Power, exponent};
  }

  std::string to_string() const;
};

// Pair-counting route: walks all n(n-1)/2 element pairs. The reference
// implementation; quadratic in n, kept simple on purpose.
uint64_t uncd_pairwise(const Partition& a, const Partition& b);

// Contingency-table route: cluster-size counts only, no pair loop.
// uncd = same(a) + same(b) - 2 * same(both), with same(.) a sum of
// binomial(count, 2) terms.
uint64_t uncd_tabulated(const Partition& a, const Partition& b);

// The production entry point (tabulated route).
uint64_t uncd(const Partition& a, const Partition& b);

// popcount(sa ^ sb) for two co-membership signatures; the innermost kernel.
uint64_t uncd_signature(uint128 sa, uint128 sb);

// Exact normalized distance, defined for n >= 2.
Rat cd(const Partition& a, const Partition& b);

Rat distance(const Partition& a, const Partition& b, const DistanceSpec& spec);

// Integer-scaled value used to accumulate totals without rounding:
// UnCD -> u, CD -> u (callers divide totals by pair_count(n) once),
// Power -> u^exponent. Throws std::overflow_error if u^exponent wraps.
uint128 scaled_distance_from_uncd(uint64_t u, const DistanceSpec& spec);

// Checked u^e in 128 bits.
uint128 ipow_u128(uint64_t base, int exponent);

// Distance between two extensions of partitions at distance `base`, without
// building the extensions: s1/s2 are the clusters (element lists) the new
// element joins, empty meaning a fresh singleton.
//   both new singletons         -> base
//   singleton vs cluster s2     -> base + |s2|
//   cluster s1 vs cluster s2    -> base + |s1 \ s2| + |s2 \ s1|
uint64_t extension_uncd(uint64_t base, std::span<const int> s1, std::span<const int> s2);

}  // namespace pcons
