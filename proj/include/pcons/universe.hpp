#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcons/partition.hpp"

namespace pcons {

enum class ConstraintKind { Full, KMax, Structured, StructuredPlusTotalSep };

// Which subset of all partitions of {1..n} a universe contains:
//   Full                   - every partition,
//   KMax                   - partitions with at most max_clusters clusters,
//   Structured             - partitions keeping elements pair_a and pair_b
//                            in the same cluster,
//   StructuredPlusTotalSep - the structured set plus the all-singletons
//                            partition (which breaks the pair).
struct Constraint {
  ConstraintKind kind = ConstraintKind::Full;
  int max_clusters = 0;
  int pair_a = 0, pair_b = 0;

  static Constraint full() { return {}; }
  static Constraint k_max(int max_clusters);
  static Constraint structured(int a, int b);
  static Constraint structured_plus_total_separation(int a, int b);

  bool admits(const Partition& g) const;
  std::string to_string() const;  // "full", "kmax:4", "structured:1,3", "structured-ts:1,3"
  static Constraint from_string(const std::string& text);
};

struct PartitionUniverse {
  int n = 0;
  Constraint constraint;
  std::vector<Partition> members;  // ascending in label-string order

  size_t size() const { return members.size(); }
  std::optional<size_t> index_of(const Partition& g) const;  // binary search
};

// Every admitted partition of {1..n} in ascending label-string order.
// Capped at n <= 14; beyond that the full list does not fit in memory.
PartitionUniverse enumerate_universe(int n, const Constraint& constraint);

// Text form: "# n=<n> constraint=<name> count=<count>" then one partition
// per line in the brace format, in universe order.
std::string export_universe(const PartitionUniverse& u);

// sample_size indices drawn uniformly from {0, ..., universe_size-1} with a
// private SplitMix64 generator seeded by `seed`; returned ascending.
// force_index, when set, is always part of the result (the remaining
// sample_size-1 draws come from the rest). Without replacement by default;
// with replacement the result may contain repeats.
std::vector<size_t> sample_indices(size_t universe_size, size_t sample_size, uint64_t seed,
                                   std::optional<size_t> force_index = std::nullopt,
                                   bool with_replacement = false);

struct SampleSpec {
  size_t size = 0;
  uint64_t seed = 0;
  std::optional<Partition> force_include;
  bool with_replacement = false;
};

std::vector<Partition> sample(const PartitionUniverse& u, const SampleSpec& spec);

// Half-to-even rounding of fraction * universe_size, clamped to
// [1, universe_size]. fraction must be in (0, 1].
size_t sample_size_for_fraction(double fraction, size_t universe_size);

}  // namespace pcons
