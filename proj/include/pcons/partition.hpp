#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pcons/rational.hpp"

namespace pcons {

// A partition of the ground set {1, ..., n} stored as a restricted growth
// string: rgs[e-1] is the cluster label of element e, labels are assigned by
// first appearance, so rgs[0] == 0 and rgs[i] <= 1 + max(rgs[0..i-1]).
// Every Partition in the program is canonical; the factories enforce it.
class Partition {
 public:
  Partition() = default;

  // Validates the restricted-growth property; throws std::invalid_argument.
  static Partition from_rgs(std::vector<uint8_t> rgs);

  // Arbitrary labels (one per element, any integers); relabels by first
  // appearance. labels must be non-empty.
  static Partition canonicalize(const std::vector<int>& labels);

  // Accepts the brace form "{ {1, 3} {2} }" or the label form "0,1,0".
  static Partition parse(std::string_view text);

  static Partition total_separation(int n);  // every element its own cluster
  static Partition all_in_one(int n);        // a single cluster

  int n() const { return static_cast<int>(rgs_.size()); }
  int k() const;  // number of clusters
  const std::vector<uint8_t>& rgs() const { return rgs_; }
  int label(int element) const { return rgs_[element - 1]; }  // element in 1..n
  bool same_cluster(int i, int j) const { return rgs_[i - 1] == rgs_[j - 1]; }

  // Clusters in label order (= order of first appearance); elements ascending.
  std::vector<std::vector<int>> clusters() const;
  std::vector<int> cluster_sizes() const;

  // Drops element n. Defined for n >= 2; the rest of the string is already
  // canonical because a prefix of a restricted growth string is one.
  Partition reduct() const;

  // p-fold reduct, 0 <= p <= n-1.
  Partition pth_reduct(int p) const;

  // Appends element n+1 as a new singleton cluster.
  Partition simple_extension() const;

  // Appends element n+1 to the existing cluster with this label (0-based).
  Partition complex_extension(int cluster_label) const;

  // All k+1 extensions. Index 0 is the simple extension, index 1+l extends
  // cluster l; the closed-form identities below are stated in this indexing.
  std::vector<Partition> extensions() const;

  // The cyclic element shift 1->2, 2->3, ..., n->1, re-canonicalized.
  // Distances between partitions are preserved because the shift is a
  // bijection of the ground set.
  Partition relabel() const;

  std::string to_brace_string() const;  // "{ {1, 3} {2} }"
  std::string to_rgs_string() const;    // "0,1,0"

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<uint8_t> rgs_;
};

// Flattened upper-triangle co-membership indicator of a partition:
// bits[pair_index(i, j)] == 1 iff i and j share a cluster. The coordinate
// for the pair (i, j) with 1 <= i < j <= n is (j-1)(j-2)/2 + (i-1); this is
// the zero-based shift of the usual 1-based convention (j-1)(j-2)/2 + i.
struct CoMembershipVector {
  int n = 0;
  std::vector<uint8_t> bits;  // length n(n-1)/2

  static int64_t pair_index(int i, int j) {
    return static_cast<int64_t>(j - 1) * (j - 2) / 2 + (i - 1);
  }
};

CoMembershipVector co_membership(const Partition& g);

// Inverse of co_membership. Throws std::invalid_argument if the bit vector is
// not transitively consistent (i.e. does not describe any partition).
Partition decode_co_membership(const CoMembershipVector& v);

// The co-membership vector packed into a 128-bit word, bit pair_index(i, j).
// Requires n <= 16 (at most 120 pairs). The workhorse of the fast kernels:
// the pair-disagreement count of two partitions is popcount(sig_a ^ sig_b).
uint128 co_signature(const Partition& g);

int128 pair_count(int n);  // n(n-1)/2

}  // namespace pcons
