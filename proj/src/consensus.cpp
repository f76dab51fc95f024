#include "pcons/consensus.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace pcons {

namespace {

constexpr uint128 kU128Max = ~static_cast<uint128>(0);

void check_inputs(std::span<const Partition> candidates, std::span<const Partition> refs,
                  const DistanceSpec& spec) {
  if (candidates.empty()) throw std::invalid_argument("consensus needs at least one candidate");
  if (refs.empty()) throw std::invalid_argument("consensus needs at least one reference");
  const int n = candidates.front().n();
  for (const Partition& g : candidates)
    if (g.n() != n) throw std::invalid_argument("candidates mix ground-set sizes");
  for (const Partition& g : refs)
    if (g.n() != n) throw std::invalid_argument("references mix ground-set sizes");
  if (spec.kind == DistanceKind::CD && n < 2)
    throw std::invalid_argument("cd undefined for n < 2 (no element pairs)");
  // Worst case per reference, used to rule out total overflow up front.
  uint128 per_ref = scaled_distance_from_uncd(static_cast<uint64_t>(pair_count(n)), spec);
  if (per_ref > 0 && kU128Max / per_ref < refs.size())
    throw std::overflow_error("distance totals may exceed 128 bits; lower the exponent");
}

int128 rat_num_from_u128(uint128 v) {
  if (v > (kU128Max >> 1)) throw std::overflow_error("total too large for exact rational");
  return static_cast<int128>(v);
}

// Scaled-distance table indexed by raw pair-disagreement count; collapses to
// the identity for exponent 1.
std::vector<uint128> scale_table(int n, const DistanceSpec& spec) {
  std::vector<uint128> t(static_cast<size_t>(pair_count(n)) + 1);
  for (size_t d = 0; d < t.size(); ++d)
    t[d] = scaled_distance_from_uncd(static_cast<uint64_t>(d), spec);
  return t;
}

void finish_result(ConsensusResult& r, std::span<const Partition> candidates, int n,
                   const DistanceSpec& spec) {
  uint128 best = kU128Max;
  for (uint128 t : r.totals) best = std::min(best, t);
  r.min_scaled_total = best;
  for (size_t i = 0; i < r.totals.size(); ++i)
    if (r.totals[i] == best) r.minimizer_indices.push_back(i);
  for (size_t i : r.minimizer_indices) r.minimizers.push_back(candidates[i]);
  std::sort(r.minimizers.begin(), r.minimizers.end());
  r.minimizers.erase(std::unique(r.minimizers.begin(), r.minimizers.end()), r.minimizers.end());
  r.scale_denominator = spec.kind == DistanceKind::CD ? pair_count(n) : 1;
  r.min_total = Rat(rat_num_from_u128(best), r.scale_denominator);
}

}  // namespace

uint128 scaled_total_distance(const Partition& candidate, std::span<const Partition> refs,
                              const DistanceSpec& spec) {
  uint128 total = 0;
  for (const Partition& r : refs) total += scaled_distance_from_uncd(uncd(candidate, r), spec);
  return total;
}

Rat total_distance(const Partition& candidate, std::span<const Partition> refs,
                   const DistanceSpec& spec) {
  if (refs.empty()) throw std::invalid_argument("total distance over no references");
  uint128 total = scaled_total_distance(candidate, refs, spec);
  int128 den = spec.kind == DistanceKind::CD ? pair_count(candidate.n()) : 1;
  return Rat(rat_num_from_u128(total), den);
}

ConsensusResult consensus(std::span<const Partition> candidates, std::span<const Partition> refs,
                          const DistanceSpec& spec) {
  check_inputs(candidates, refs, spec);
  const int n = candidates.front().n();
  ConsensusResult r;
  r.totals.assign(candidates.size(), 0);

  if (n <= 16) {
    std::vector<uint128> csig(candidates.size()), rsig(refs.size());
    for (size_t i = 0; i < candidates.size(); ++i) csig[i] = co_signature(candidates[i]);
    for (size_t j = 0; j < refs.size(); ++j) rsig[j] = co_signature(refs[j]);
    const std::vector<uint128> scale = scale_table(n, spec);
    const bool identity = spec.kind != DistanceKind::Power || spec.exponent == 1;
#pragma omp parallel for schedule(dynamic, 16)
    for (size_t i = 0; i < candidates.size(); ++i) {
      uint128 total = 0;
      const uint128 si = csig[i];
      if (identity) {
        for (size_t j = 0; j < rsig.size(); ++j) total += uncd_signature(si, rsig[j]);
      } else {
        for (size_t j = 0; j < rsig.size(); ++j) total += scale[uncd_signature(si, rsig[j])];
      }
      r.totals[i] = total;
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (size_t i = 0; i < candidates.size(); ++i) {
      uint128 total = 0;
      for (const Partition& ref : refs)
        total += scaled_distance_from_uncd(uncd(candidates[i], ref), spec);
      r.totals[i] = total;
    }
  }

  finish_result(r, candidates, n, spec);
  return r;
}

ConsensusResult consensus_serial(std::span<const Partition> candidates,
                                 std::span<const Partition> refs, const DistanceSpec& spec) {
  check_inputs(candidates, refs, spec);
  const int n = candidates.front().n();
  ConsensusResult r;
  r.totals.assign(candidates.size(), 0);
  for (size_t i = 0; i < candidates.size(); ++i) {
    uint128 total = 0;
    for (const Partition& ref : refs)
      total += scaled_distance_from_uncd(uncd_pairwise(candidates[i], ref), spec);
    r.totals[i] = total;
  }
  finish_result(r, candidates, n, spec);
  return r;
}

TheoremReport verify_theorem1(int n) {
  TheoremReport rep;
  rep.n = n;
  PartitionUniverse u = enumerate_universe(n, Constraint::full());
  rep.universe_size = u.size();
  ConsensusResult res = consensus(u.members, u.members, DistanceSpec::uncd());
  Partition ts = Partition::total_separation(n);
  rep.holds = std::binary_search(res.minimizers.begin(), res.minimizers.end(), ts);
  rep.unique = rep.holds && res.minimizers.size() == 1;
  rep.minimizers = res.minimizers;
  size_t ts_idx = *u.index_of(ts);
  rep.ts_average =
      u.size() > 1 ? Rat(static_cast<int128>(res.totals[ts_idx]), static_cast<int128>(u.size() - 1))
                   : Rat(0);
  rep.details = "universe=" + std::to_string(u.size()) +
                " min_total=" + to_string(res.min_scaled_total) +
                " minimizers=" + std::to_string(res.minimizers.size()) +
                " ts_avg=" + rep.ts_average.str();
  return rep;
}

KMaxTheoremReport verify_theorem2(int n, int max_clusters) {
  KMaxTheoremReport rep;
  rep.n = n;
  rep.max_clusters = max_clusters;
  PartitionUniverse u = enumerate_universe(n, Constraint::k_max(max_clusters));
  const size_t m = u.size();
  rep.universe_size = m;
  ConsensusResult res = consensus(u.members, u.members, DistanceSpec::uncd());
  Partition ts = Partition::total_separation(n);

  if (max_clusters >= n) {
    // The all-singletons partition is itself a member; this reduces to the
    // unrestricted statement with a common denominator.
    size_t ts_idx = *u.index_of(ts);
    rep.ts_average = m > 1 ? Rat(static_cast<int128>(res.totals[ts_idx]), int128(m - 1)) : Rat(0);
    rep.best_member_average =
        m > 1 ? Rat(static_cast<int128>(res.min_scaled_total), int128(m - 1)) : Rat(0);
    rep.best_members = res.minimizers;
    rep.holds = res.totals[ts_idx] == res.min_scaled_total;
    rep.unique = rep.holds && res.minimizers.size() == 1;
  } else {
    // Outsider averages over all m members; a member only over the other m-1.
    uint128 ts_total = scaled_total_distance(ts, u.members, DistanceSpec::uncd());
    rep.ts_average = Rat(static_cast<int128>(ts_total), int128(m));
    rep.best_member_average =
        m > 1 ? Rat(static_cast<int128>(res.min_scaled_total), int128(m - 1)) : Rat(0);
    rep.best_members = res.minimizers;
    rep.holds = rep.ts_average <= rep.best_member_average;
    rep.unique = rep.ts_average < rep.best_member_average;
  }
  rep.details = "universe=" + std::to_string(m) + " ts_avg=" + rep.ts_average.str() +
                " best_member_avg=" + rep.best_member_average.str() +
                " best_members=" + std::to_string(rep.best_members.size());
  return rep;
}

namespace {

void record_violation(LemmaReport& rep, const std::string& text) {
  ++rep.violations;
  if (rep.examples.size() < 10) rep.examples.push_back(text);
}

// Shared sweep for the unrestricted and cluster-capped identity families.
// For every ordered pair (A, B) and every extension of A, accumulates the
// measured sum of distances to B's admissible extensions and compares with
// the closed form. Extensions live on n+1 elements, so signatures need
// n+1 <= 16.
LemmaReport sweep_lemmas(const PartitionUniverse& u, int max_clusters) {
  LemmaReport rep;
  rep.n = u.n;
  rep.max_clusters = max_clusters;
  if (u.n + 1 > 16) throw std::invalid_argument("lemma sweep capped at n <= 15");

  const size_t m = u.size();
  std::vector<std::vector<uint128>> ext_sigs(m);
  std::vector<std::vector<int>> sizes(m);
  std::vector<int> ks(m);
  std::vector<uint128> sigs(m);
  for (size_t i = 0; i < m; ++i) {
    for (const Partition& e : u.members[i].extensions()) ext_sigs[i].push_back(co_signature(e));
    sizes[i] = u.members[i].cluster_sizes();
    ks[i] = u.members[i].k();
    sigs[i] = co_signature(u.members[i]);
  }

  const uint64_t n = static_cast<uint64_t>(u.n);
  for (size_t a = 0; a < m; ++a) {
    for (size_t b = 0; b < m; ++b) {
      const uint64_t base = uncd_signature(sigs[a], sigs[b]);
      const uint64_t kb = static_cast<uint64_t>(ks[b]);
      const bool capped = max_clusters > 0 && ks[b] == max_clusters;
      const size_t ref_begin = capped ? 1 : 0;  // skip B's simple extension at the cap
      for (size_t c = 0; c < ext_sigs[a].size(); ++c) {
        uint64_t sum = 0;
        for (size_t l = ref_begin; l < ext_sigs[b].size(); ++l)
          sum += uncd_signature(ext_sigs[a][c], ext_sigs[b][l]);
        uint64_t expected;
        if (capped) {
          expected = c == 0 ? n + kb * base
                            : kb * base + (kb - 2) * static_cast<uint64_t>(sizes[a][c - 1]) + n;
        } else {
          expected = c == 0
                         ? n + (kb + 1) * base
                         : (kb + 1) * base + (kb - 1) * static_cast<uint64_t>(sizes[a][c - 1]) + n;
        }
        ++rep.checks;
        if (sum != expected)
          record_violation(rep, "A=" + u.members[a].to_rgs_string() +
                                    " B=" + u.members[b].to_rgs_string() +
                                    " ext=" + std::to_string(c) + " sum=" + std::to_string(sum) +
                                    " expected=" + std::to_string(expected));
      }
    }
  }
  return rep;
}

}  // namespace

LemmaReport check_extension_lemmas(int n) {
  return sweep_lemmas(enumerate_universe(n, Constraint::full()), 0);
}

LemmaReport check_kmax_lemmas(int n, int max_clusters) {
  if (max_clusters < 2)
    throw std::invalid_argument("kmax lemma sweep needs max_clusters >= 2");
  return sweep_lemmas(enumerate_universe(n, Constraint::k_max(max_clusters)), max_clusters);
}

NarrowTrace narrow_candidates(int n) {
  if (n < 2) throw std::invalid_argument("narrowing needs n >= 2");
  NarrowTrace trace;
  trace.n = n;

  PartitionUniverse base = enumerate_universe(n - 1, Constraint::full());
  std::vector<Partition> current;
  current.reserve(base.size());
  for (const Partition& g : base.members) current.push_back(g.simple_extension());
  trace.stages.push_back(current);

  for (int round = 0; round <= n; ++round) {
    std::vector<Partition> next;
    next.reserve(current.size());
    for (const Partition& g : current) next.push_back(g.relabel().reduct().simple_extension());
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next == current) {
      if (current.size() != 1 || !(current[0] == Partition::total_separation(n)))
        throw std::logic_error("narrowing stabilized away from the all-singletons partition");
      return trace;
    }
    trace.stages.push_back(next);
    current = std::move(next);
  }
  throw std::logic_error("narrowing did not converge");
}

}  // namespace pcons
