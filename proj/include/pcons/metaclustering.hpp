#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcons/distance.hpp"
#include "pcons/partition.hpp"
#include "pcons/universe.hpp"

namespace pcons {

// Dense symmetric matrix of integer-scaled distances between a list of
// partitions. Entries are uncd (or uncd^exponent); the normalized variant
// shares the layout because scaling by a positive constant changes no
// clustering decision. Guarded against absurd memory use.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(size_t m) : m_(m), d_(m * m, 0) {}

  size_t size() const { return m_; }
  uint64_t at(size_t i, size_t j) const { return d_[i * m_ + j]; }
  void set(size_t i, size_t j, uint64_t v) { d_[i * m_ + j] = v; }

 private:
  size_t m_ = 0;
  std::vector<uint64_t> d_;
};

DistanceMatrix build_distance_matrix(std::span<const Partition> items, const DistanceSpec& spec);
DistanceMatrix build_distance_matrix_serial(std::span<const Partition> items,
                                            const DistanceSpec& spec);

struct MetaClusteringResult {
  int k = 0;
  std::vector<int> assignment;                 // item -> cluster id, 0..k-1
  std::vector<size_t> center_items;            // per cluster: medoid, or item closest to centroid
  std::vector<std::vector<double>> centroids;  // k-means only
  uint128 exact_objective = 0;                 // medoid route: total distance to assigned medoids
  double objective = 0.0;                      // k-means: within-cluster sum of squares
  double variance_explained = 0.0;             // k-means: 1 - WSS/TSS, in [0, 1]
  std::vector<double> objective_trace;         // k-means: objective after each update round
};

// Medoid clustering, greedy seeding plus steepest-descent single swaps.
// Fully deterministic: seeding starts from the item with the least total
// distance, every tie is broken toward the lower index, and swaps are taken
// only on strict improvement. The seed parameter is accepted for interface
// symmetry with kmeans and is unused.
MetaClusteringResult pam(const DistanceMatrix& dm, int k, uint64_t seed = 0);

// Same algorithm with distances computed on the fly from co-membership
// signatures (popcount of xor, optionally raised to a power), so clustering
// a few thousand partitions needs no quadratic matrix.
MetaClusteringResult pam_signatures(std::span<const uint128> sigs, int k, int exponent = 1);

// Lloyd iterations over the 0/1 co-membership embedding, squared Euclidean
// distance (which equals uncd between embedded partitions), k-means++
// seeding driven by `seed`. Empty clusters are re-seeded on the item
// farthest from its centroid. Assignment ties go to the lower cluster id.
MetaClusteringResult kmeans(std::span<const Partition> items, int k, uint64_t seed,
                            int max_iter = 100);

// The p-fold reduct (forgets the last p elements).
Partition pth_order_reduct(const Partition& g, int p);

// Members of a universe grouped by their p-th order reduct. The group key
// extended back by p simple extensions acts as the group's center.
struct ReductGrouping {
  int p = 0;
  std::vector<Partition> keys;              // distinct reducts, ascending
  std::vector<std::vector<size_t>> groups;  // member indices per key
  std::vector<Partition> centers;           // key + p simple extensions
};
ReductGrouping group_by_pth_reduct(const PartitionUniverse& u, int p);

// How many members fail to sit strictly closer (by uncd) to their own
// group's center than to every foreign center; a tie counts as a failure.
// Zero means the grouping is strictly stable.
uint64_t count_grouping_violations(const PartitionUniverse& u, const ReductGrouping& grouping);

}  // namespace pcons
