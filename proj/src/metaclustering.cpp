#include "pcons/metaclustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "pcons/rng.hpp"

namespace pcons {

namespace {

constexpr uint128 kU128Max = ~static_cast<uint128>(0);

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

// Entry scaling for the matrix and signature routes. 64-bit entries cap the
// usable exponent; the guard keeps failures loud instead of wrapping.
uint64_t scaled_entry(uint64_t u, const DistanceSpec& spec) {
  uint128 v = scaled_distance_from_uncd(u, spec);
  if (v > ~static_cast<uint64_t>(0))
    throw std::overflow_error("scaled distance exceeds 64 bits; lower the exponent");
  return static_cast<uint64_t>(v);
}

void check_items(std::span<const Partition> items) {
  if (items.empty()) bad("clustering over no items");
  for (const Partition& g : items)
    if (g.n() != items.front().n()) bad("items mix ground-set sizes");
}

// Kaufman-Rousseeuw style greedy build plus steepest-descent single swaps.
// Deterministic: ascending scans and strict comparisons break every tie
// toward the lowest index.
template <class Dist>
MetaClusteringResult pam_impl(size_t m, int k, Dist&& dist) {
  if (m == 0) bad("clustering over no items");
  if (k < 1 || static_cast<size_t>(k) > m) bad("k must be between 1 and the item count");

  std::vector<size_t> medoids;
  medoids.reserve(k);
  std::vector<uint8_t> is_medoid(m, 0);

  {
    uint128 best_total = kU128Max;
    size_t best = 0;
    for (size_t i = 0; i < m; ++i) {
      uint128 total = 0;
      for (size_t j = 0; j < m; ++j) total += dist(i, j);
      if (total < best_total) {
        best_total = total;
        best = i;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = 1;
  }

  std::vector<uint64_t> dnear(m);
  for (size_t j = 0; j < m; ++j) dnear[j] = dist(medoids[0], j);

  while (medoids.size() < static_cast<size_t>(k)) {
    uint128 best_gain = 0;
    size_t best = m;
    for (size_t i = 0; i < m; ++i) {
      if (is_medoid[i]) continue;
      uint128 gain = 0;
      for (size_t j = 0; j < m; ++j) {
        uint64_t d = dist(i, j);
        if (d < dnear[j]) gain += dnear[j] - d;
      }
      if (best == m || gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = 1;
    for (size_t j = 0; j < m; ++j) dnear[j] = std::min(dnear[j], dist(best, j));
  }
  std::sort(medoids.begin(), medoids.end());

  std::vector<int> nearest(m);
  std::vector<uint64_t> dsecond(m);
  auto recompute_nearest = [&] {
    for (size_t j = 0; j < m; ++j) {
      int best_pos = 0;
      uint64_t best_d = dist(medoids[0], j);
      for (size_t pos = 1; pos < medoids.size(); ++pos) {
        uint64_t d = dist(medoids[pos], j);
        if (d < best_d) {
          best_d = d;
          best_pos = static_cast<int>(pos);
        }
      }
      uint64_t second_d = ~static_cast<uint64_t>(0);
      for (size_t pos = 0; pos < medoids.size(); ++pos) {
        if (static_cast<int>(pos) == best_pos) continue;
        second_d = std::min(second_d, dist(medoids[pos], j));
      }
      nearest[j] = best_pos;
      dnear[j] = best_d;
      dsecond[j] = second_d;
    }
  };
  recompute_nearest();

  if (k > 1) {
    for (;;) {
      int128 best_delta = 0;
      size_t best_pos = m, best_h = m;
      for (size_t pos = 0; pos < medoids.size(); ++pos) {
        for (size_t h = 0; h < m; ++h) {
          if (is_medoid[h]) continue;
          int128 delta = 0;
          for (size_t j = 0; j < m; ++j) {
            uint64_t d_jh = dist(j, h);
            if (nearest[j] == static_cast<int>(pos)) {
              uint64_t repl = std::min(dsecond[j], d_jh);
              delta += static_cast<int128>(repl) - static_cast<int128>(dnear[j]);
            } else if (d_jh < dnear[j]) {
              delta += static_cast<int128>(d_jh) - static_cast<int128>(dnear[j]);
            }
          }
          if (delta < best_delta) {
            best_delta = delta;
            best_pos = pos;
            best_h = h;
          }
        }
      }
      if (best_pos == m) break;
      is_medoid[medoids[best_pos]] = 0;
      is_medoid[best_h] = 1;
      medoids[best_pos] = best_h;
      std::sort(medoids.begin(), medoids.end());
      recompute_nearest();
    }
  }

  MetaClusteringResult r;
  r.k = k;
  r.center_items = medoids;
  r.assignment.resize(m);
  for (size_t j = 0; j < m; ++j) {
    r.assignment[j] = nearest[j];
    r.exact_objective += dnear[j];
  }
  r.objective = static_cast<double>(r.exact_objective);
  return r;
}

}  // namespace

DistanceMatrix build_distance_matrix(std::span<const Partition> items, const DistanceSpec& spec) {
  check_items(items);
  const size_t m = items.size();
  if (m > 16384) bad("distance matrix over 16384 items would not fit in memory");
  DistanceMatrix dm(m);
  const int n = items.front().n();
  if (n <= 16) {
    std::vector<uint128> sigs(m);
    for (size_t i = 0; i < m; ++i) sigs[i] = co_signature(items[i]);
#pragma omp parallel for schedule(dynamic, 8)
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = i + 1; j < m; ++j) {
        uint64_t v = scaled_entry(uncd_signature(sigs[i], sigs[j]), spec);
        dm.set(i, j, v);
        dm.set(j, i, v);
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = i + 1; j < m; ++j) {
        uint64_t v = scaled_entry(uncd(items[i], items[j]), spec);
        dm.set(i, j, v);
        dm.set(j, i, v);
      }
    }
  }
  return dm;
}

DistanceMatrix build_distance_matrix_serial(std::span<const Partition> items,
                                            const DistanceSpec& spec) {
  check_items(items);
  const size_t m = items.size();
  if (m > 16384) bad("distance matrix over 16384 items would not fit in memory");
  DistanceMatrix dm(m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      uint64_t v = scaled_entry(uncd_pairwise(items[i], items[j]), spec);
      dm.set(i, j, v);
      dm.set(j, i, v);
    }
  return dm;
}

MetaClusteringResult pam(const DistanceMatrix& dm, int k, uint64_t /*seed*/) {
  return pam_impl(dm.size(), k, [&dm](size_t i, size_t j) { return dm.at(i, j); });
}

MetaClusteringResult pam_signatures(std::span<const uint128> sigs, int k, int exponent) {
  if (exponent < 1) bad("exponent must be >= 1");
  if (exponent == 1)
    return pam_impl(sigs.size(), k,
                    [&sigs](size_t i, size_t j) { return uncd_signature(sigs[i], sigs[j]); });
  std::vector<uint64_t> table(121);  // popcount of a 120-pair xor is at most 120
  for (size_t d = 0; d < table.size(); ++d)
    table[d] = scaled_entry(static_cast<uint64_t>(d), DistanceSpec::power(exponent));
  return pam_impl(sigs.size(), k, [&sigs, &table](size_t i, size_t j) {
    return table[uncd_signature(sigs[i], sigs[j])];
  });
}

MetaClusteringResult kmeans(std::span<const Partition> items, int k, uint64_t seed, int max_iter) {
  check_items(items);
  const size_t m = items.size();
  if (k < 1 || static_cast<size_t>(k) > m) bad("k must be between 1 and the item count");
  if (max_iter < 1) bad("max_iter must be >= 1");

  const int n = items.front().n();
  const size_t dim = static_cast<size_t>(pair_count(n));
  std::vector<double> emb(m * dim, 0.0);
  for (size_t i = 0; i < m; ++i) {
    CoMembershipVector v = co_membership(items[i]);
    for (size_t d = 0; d < dim; ++d) emb[i * dim + d] = v.bits[d];
  }
  auto sqdist = [&](const double* a, const double* b) {
    double s = 0;
    for (size_t d = 0; d < dim; ++d) {
      double diff = a[d] - b[d];
      s += diff * diff;
    }
    return s;
  };
  auto row = [&](size_t i) { return emb.data() + i * dim; };

  // Total sum of squares around the global mean, for variance explained.
  std::vector<double> mean(dim, 0.0);
  for (size_t i = 0; i < m; ++i)
    for (size_t d = 0; d < dim; ++d) mean[d] += emb[i * dim + d];
  for (size_t d = 0; d < dim; ++d) mean[d] /= static_cast<double>(m);
  double tss = 0;
  for (size_t i = 0; i < m; ++i) tss += sqdist(row(i), mean.data());

  // k-means++ seeding.
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  std::vector<uint8_t> chosen(m, 0);
  size_t first = static_cast<size_t>(rng.below(m));
  chosen[first] = 1;
  centroids.emplace_back(row(first), row(first) + dim);
  std::vector<double> d2(m);
  for (size_t i = 0; i < m; ++i) d2[i] = sqdist(row(i), centroids[0].data());
  while (centroids.size() < static_cast<size_t>(k)) {
    double total = 0;
    for (size_t i = 0; i < m; ++i) total += d2[i];
    size_t pick = m;
    if (total > 0) {
      double r = rng.next_double() * total;
      double cum = 0;
      for (size_t i = 0; i < m; ++i) {
        cum += d2[i];
        if (cum > r) {
          pick = i;
          break;
        }
      }
      if (pick == m) {  // floating round-off at the far end
        for (size_t i = m; i-- > 0;)
          if (d2[i] > 0) {
            pick = i;
            break;
          }
      }
    }
    if (pick == m) {  // all remaining items coincide with a centroid
      for (size_t i = 0; i < m; ++i)
        if (!chosen[i]) {
          pick = i;
          break;
        }
    }
    chosen[pick] = 1;
    centroids.emplace_back(row(pick), row(pick) + dim);
    for (size_t i = 0; i < m; ++i) d2[i] = std::min(d2[i], sqdist(row(i), centroids.back().data()));
  }

  MetaClusteringResult r;
  r.k = k;
  r.assignment.assign(m, -1);
  std::vector<int> prev(m, -1);
  std::vector<size_t> sizes(k, 0);

  for (int iter = 0; iter < max_iter; ++iter) {
    // Assign, lowest cluster id on ties.
    std::fill(sizes.begin(), sizes.end(), 0);
    for (size_t i = 0; i < m; ++i) {
      int best_c = 0;
      double best_d = sqdist(row(i), centroids[0].data());
      for (int c = 1; c < k; ++c) {
        double d = sqdist(row(i), centroids[c].data());
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      r.assignment[i] = best_c;
      ++sizes[best_c];
    }

    // Re-seed any empty cluster on the item farthest from its own centroid,
    // never stealing the last member of a cluster.
    bool repaired = false;
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      size_t far = m;
      double far_d = -1;
      for (size_t i = 0; i < m; ++i) {
        if (sizes[r.assignment[i]] < 2) continue;
        double d = sqdist(row(i), centroids[r.assignment[i]].data());
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == m) break;  // fewer distinct items than clusters
      --sizes[r.assignment[far]];
      r.assignment[far] = c;
      sizes[c] = 1;
      repaired = true;
    }

    // Update means.
    for (int c = 0; c < k; ++c) std::fill(centroids[c].begin(), centroids[c].end(), 0.0);
    for (size_t i = 0; i < m; ++i) {
      double* ctr = centroids[r.assignment[i]].data();
      for (size_t d = 0; d < dim; ++d) ctr[d] += emb[i * dim + d];
    }
    for (int c = 0; c < k; ++c)
      if (sizes[c] > 0)
        for (size_t d = 0; d < dim; ++d) centroids[c][d] /= static_cast<double>(sizes[c]);

    double wss = 0;
    for (size_t i = 0; i < m; ++i) wss += sqdist(row(i), centroids[r.assignment[i]].data());
    r.objective_trace.push_back(wss);

    if (!repaired && r.assignment == prev) break;
    prev = r.assignment;
  }

  r.objective = r.objective_trace.back();
  r.variance_explained = tss > 0 ? std::max(0.0, 1.0 - r.objective / tss) : 0.0;
  r.centroids = centroids;
  r.center_items.assign(k, 0);
  for (int c = 0; c < k; ++c) {
    size_t best = m;
    double best_d = 0;
    for (size_t i = 0; i < m; ++i) {
      if (r.assignment[i] != c) continue;
      double d = sqdist(row(i), centroids[c].data());
      if (best == m || d < best_d) {
        best_d = d;
        best = i;
      }
    }
    r.center_items[c] = best;  // m when the cluster ended up empty (k > distinct items)
  }
  return r;
}

Partition pth_order_reduct(const Partition& g, int p) { return g.pth_reduct(p); }

ReductGrouping group_by_pth_reduct(const PartitionUniverse& u, int p) {
  if (u.size() == 0) bad("grouping over an empty universe");
  if (p < 1 || p > u.n - 1) bad("reduct order must be between 1 and n-1");
  ReductGrouping out;
  out.p = p;
  std::map<Partition, std::vector<size_t>> by_key;
  for (size_t i = 0; i < u.size(); ++i) by_key[u.members[i].pth_reduct(p)].push_back(i);
  for (auto& [key, idxs] : by_key) {
    out.keys.push_back(key);
    out.groups.push_back(std::move(idxs));
    Partition center = key;
    for (int i = 0; i < p; ++i) center = center.simple_extension();
    out.centers.push_back(center);
  }
  return out;
}

uint64_t count_grouping_violations(const PartitionUniverse& u, const ReductGrouping& grouping) {
  uint64_t violations = 0;
  std::vector<uint128> center_sigs;
  center_sigs.reserve(grouping.centers.size());
  for (const Partition& c : grouping.centers) center_sigs.push_back(co_signature(c));
  for (size_t g = 0; g < grouping.groups.size(); ++g) {
    for (size_t idx : grouping.groups[g]) {
      uint128 sig = co_signature(u.members[idx]);
      uint64_t own = uncd_signature(sig, center_sigs[g]);
      for (size_t h = 0; h < center_sigs.size(); ++h) {
        if (h == g) continue;
        if (uncd_signature(sig, center_sigs[h]) <= own) {
          ++violations;
          break;
        }
      }
    }
  }
  return violations;
}

}  // namespace pcons
