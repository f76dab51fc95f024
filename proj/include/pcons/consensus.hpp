#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcons/distance.hpp"
#include "pcons/partition.hpp"
#include "pcons/rational.hpp"
#include "pcons/universe.hpp"

namespace pcons {

// Outcome of a consensus scan: which candidates minimize the total distance
// to the references. Totals are integer-scaled (see scaled_distance_from_uncd)
// so ties are exact; scale_denominator restores the real value (1 except for
// the normalized distance, where it is pair_count(n)).
struct ConsensusResult {
  std::vector<size_t> minimizer_indices;  // into the candidate span, ascending
  std::vector<Partition> minimizers;      // the same partitions, sorted, deduplicated
  uint128 min_scaled_total = 0;
  int128 scale_denominator = 1;
  Rat min_total;
  std::vector<uint128> totals;  // scaled total per candidate
};

Rat total_distance(const Partition& candidate, std::span<const Partition> refs,
                   const DistanceSpec& spec);
uint128 scaled_total_distance(const Partition& candidate, std::span<const Partition> refs,
                              const DistanceSpec& spec);

// Scans every candidate. Parallelized over candidates; results are
// independent of the thread count because each candidate writes its own slot
// and the argmin scan is serial.
ConsensusResult consensus(std::span<const Partition> candidates, std::span<const Partition> refs,
                          const DistanceSpec& spec);

// Single-threaded reference implementation on the pair-counting route.
// Slower on purpose; exists so the fast path has something to be checked
// against.
ConsensusResult consensus_serial(std::span<const Partition> candidates,
                                 std::span<const Partition> refs, const DistanceSpec& spec);

// Does the all-singletons partition minimize the total pair-disagreement
// distance over the full universe, and is it the unique minimizer?
struct TheoremReport {
  int n = 0;
  bool holds = false;
  bool unique = false;
  size_t universe_size = 0;
  Rat ts_average;  // average distance to the other members
  std::vector<Partition> minimizers;
  std::string details;
};
TheoremReport verify_theorem1(int n);

// Cluster-count-capped variant. The all-singletons partition is outside the
// universe when max_clusters < n, so the comparison is between averages with
// different denominators: the outsider averages over all members, a member
// over the others.
struct KMaxTheoremReport {
  int n = 0;
  int max_clusters = 0;
  bool holds = false;   // outsider average <= best member average
  bool unique = false;  // strictly smaller
  size_t universe_size = 0;
  Rat ts_average;
  Rat best_member_average;
  std::vector<Partition> best_members;  // members attaining best_member_average
  std::string details;
};
KMaxTheoremReport verify_theorem2(int n, int max_clusters);

// Exhaustive check of the closed-form identities for sums of distances from
// one extension of a partition to all extensions of another (possibly the
// same) partition. Every identity is evaluated by actually constructing the
// extensions and measuring, then compared with the closed form.
struct LemmaReport {
  int n = 0;          // ground-set size of the partitions being extended
  int max_clusters = 0;  // 0 = unrestricted variant
  uint64_t checks = 0;
  uint64_t violations = 0;
  std::vector<std::string> examples;  // up to 10 violating cases
  bool clean() const { return violations == 0; }
};

// Unrestricted sums: for partitions A, B of {1..n} and each extension of A,
//   sum over all k(B)+1 extensions of B of uncd(ext(A), ext(B))
// equals n + (k(B)+1) * uncd(A,B) for the simple extension of A, and
// (k(B)+1) * uncd(A,B) + (k(B)-1) * |S_m| + n when A's new element joins
// cluster S_m. Taking A = B gives the same-partition identities.
LemmaReport check_extension_lemmas(int n);

// Cluster-capped variant: when k(B) == max_clusters the simple extension of
// B leaves the universe and drops out of the reference sum, changing the
// closed forms to n + k(B) * uncd(A,B) and
// k(B) * uncd(A,B) + (k(B)-2) * |S_m| + n. Below the cap the unrestricted
// forms apply unchanged.
LemmaReport check_kmax_lemmas(int n, int max_clusters);

// The shrinking candidate-set argument for the minimizer over the full
// universe: start from the simple extensions of all partitions of {1..n-1}
// and repeatedly map each candidate through
//   cyclic relabel -> reduct -> simple extension,
// deduplicating. The set shrinks to exactly { all-singletons } within n-2
// rounds; stages records every intermediate set.
struct NarrowTrace {
  int n = 0;
  std::vector<std::vector<Partition>> stages;
};
NarrowTrace narrow_candidates(int n);

}  // namespace pcons
