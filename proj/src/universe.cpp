#include "pcons/universe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "pcons/counting.hpp"
#include "pcons/rng.hpp"

namespace pcons {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

Constraint Constraint::k_max(int max_clusters) {
  if (max_clusters < 1) bad("kmax constraint needs max_clusters >= 1");
  Constraint c;
  c.kind = ConstraintKind::KMax;
  c.max_clusters = max_clusters;
  return c;
}

Constraint Constraint::structured(int a, int b) {
  if (a == b || a < 1 || b < 1) bad("structured constraint needs two distinct elements >= 1");
  Constraint c;
  c.kind = ConstraintKind::Structured;
  c.pair_a = std::min(a, b);
  c.pair_b = std::max(a, b);
  return c;
}

Constraint Constraint::structured_plus_total_separation(int a, int b) {
  Constraint c = structured(a, b);
  c.kind = ConstraintKind::StructuredPlusTotalSep;
  return c;
}

bool Constraint::admits(const Partition& g) const {
  switch (kind) {
    case ConstraintKind::Full:
      return true;
    case ConstraintKind::KMax:
      return g.k() <= max_clusters;
    case ConstraintKind::Structured:
      return g.same_cluster(pair_a, pair_b);
    case ConstraintKind::StructuredPlusTotalSep:
      return g.same_cluster(pair_a, pair_b) || g == Partition::total_separation(g.n());
  }
  return false;
}

std::string Constraint::to_string() const {
  switch (kind) {
    case ConstraintKind::Full:
      return "full";
    case ConstraintKind::KMax:
      return "kmax:" + std::to_string(max_clusters);
    case ConstraintKind::Structured:
      return "structured:" + std::to_string(pair_a) + "," + std::to_string(pair_b);
    case ConstraintKind::StructuredPlusTotalSep:
      return "structured-ts:" + std::to_string(pair_a) + "," + std::to_string(pair_b);
  }
  return "?";
}

Constraint Constraint::from_string(const std::string& text) {
  if (text == "full") return full();
  auto parse_pair = [&](size_t at) {
    size_t comma = text.find(',', at);
    if (comma == std::string::npos) bad("constraint pair must be 'a,b': " + text);
    return std::pair<int, int>{std::stoi(text.substr(at, comma - at)),
                               std::stoi(text.substr(comma + 1))};
  };
  if (text.rfind("kmax:", 0) == 0) return k_max(std::stoi(text.substr(5)));
  if (text.rfind("structured-ts:", 0) == 0) {
    auto [a, b] = parse_pair(14);
    return structured_plus_total_separation(a, b);
  }
  if (text.rfind("structured:", 0) == 0) {
    auto [a, b] = parse_pair(11);
    return structured(a, b);
  }
  bad("unknown constraint '" + text + "'");
}

std::optional<size_t> PartitionUniverse::index_of(const Partition& g) const {
  auto it = std::lower_bound(members.begin(), members.end(), g);
  if (it == members.end() || !(*it == g)) return std::nullopt;
  return static_cast<size_t>(it - members.begin());
}

PartitionUniverse enumerate_universe(int n, const Constraint& constraint) {
  if (n < 1) bad("universe needs n >= 1");
  if (n > 14) bad("universe enumeration capped at n <= 14");
  if (constraint.kind == ConstraintKind::Structured ||
      constraint.kind == ConstraintKind::StructuredPlusTotalSep) {
    if (constraint.pair_b > n) bad("structured pair element exceeds n");
  }

  PartitionUniverse u;
  u.n = n;
  u.constraint = constraint;

  const bool kmax = constraint.kind == ConstraintKind::KMax;
  const bool pair = constraint.kind == ConstraintKind::Structured ||
                    constraint.kind == ConstraintKind::StructuredPlusTotalSep;
  std::vector<uint8_t> rgs(n, 0);

  // Depth-first over label strings, labels tried in ascending order, which
  // yields the members already sorted. The pair constraint is applied as a
  // prune at the later element's position; the lone extra member of the
  // "+ts" variant (all singletons) is the very last string, appended after.
  auto gen = [&](auto&& self, int pos, int max_label) -> void {
    if (pos == n) {
      u.members.push_back(Partition::from_rgs(rgs));
      return;
    }
    int limit = max_label + 1;
    if (kmax) limit = std::min(limit, constraint.max_clusters - 1);
    for (int lab = 0; lab <= limit; ++lab) {
      if (pair && pos == constraint.pair_b - 1 && lab != rgs[constraint.pair_a - 1]) continue;
      rgs[pos] = static_cast<uint8_t>(lab);
      self(self, pos + 1, std::max(max_label, lab));
    }
  };
  gen(gen, 1, 0);  // rgs[0] is always 0

  if (constraint.kind == ConstraintKind::StructuredPlusTotalSep && n >= 2) {
    Partition ts = Partition::total_separation(n);
    if (!(u.members.back() == ts)) u.members.push_back(ts);
  }
  return u;
}

std::string export_universe(const PartitionUniverse& u) {
  std::string out = "# n=" + std::to_string(u.n) + " constraint=" + u.constraint.to_string() +
                    " count=" + std::to_string(u.size()) + "\n";
  for (const Partition& g : u.members) out += g.to_brace_string() + "\n";
  return out;
}

namespace {

// Partial Fisher-Yates over a virtual identity array: only touched slots are
// materialized, so drawing s out of N costs O(s) time and memory.
std::vector<size_t> draw_without_replacement(size_t universe_size, size_t count, SplitMix64& rng) {
  std::unordered_map<size_t, size_t> moved;
  auto slot = [&](size_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  std::vector<size_t> out;
  out.reserve(count);
  for (size_t t = 0; t < count; ++t) {
    size_t j = t + static_cast<size_t>(rng.below(universe_size - t));
    out.push_back(slot(j));
    moved[j] = slot(t);
  }
  return out;
}

}  // namespace

std::vector<size_t> sample_indices(size_t universe_size, size_t sample_size, uint64_t seed,
                                   std::optional<size_t> force_index, bool with_replacement) {
  if (universe_size == 0) bad("sample from an empty universe");
  if (sample_size == 0) bad("sample size must be >= 1");
  if (!with_replacement && sample_size > universe_size)
    bad("sample size " + std::to_string(sample_size) + " exceeds universe size " +
        std::to_string(universe_size));
  if (force_index && *force_index >= universe_size) bad("forced index outside universe");

  SplitMix64 rng(seed);
  std::vector<size_t> out;
  if (with_replacement) {
    out.reserve(sample_size);
    if (force_index) out.push_back(*force_index);
    while (out.size() < sample_size) out.push_back(static_cast<size_t>(rng.below(universe_size)));
  } else if (force_index) {
    // Draw the rest from the universe minus the forced member, then shift
    // around the hole so indices refer to the original universe.
    out = draw_without_replacement(universe_size - 1, sample_size - 1, rng);
    for (size_t& v : out)
      if (v >= *force_index) ++v;
    out.push_back(*force_index);
  } else {
    out = draw_without_replacement(universe_size, sample_size, rng);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Partition> sample(const PartitionUniverse& u, const SampleSpec& spec) {
  std::optional<size_t> force;
  if (spec.force_include) {
    force = u.index_of(*spec.force_include);
    if (!force) bad("forced partition is not a member of the universe");
  }
  std::vector<size_t> idx =
      sample_indices(u.size(), spec.size, spec.seed, force, spec.with_replacement);
  std::vector<Partition> out;
  out.reserve(idx.size());
  for (size_t i : idx) out.push_back(u.members[i]);
  return out;
}

size_t sample_size_for_fraction(double fraction, size_t universe_size) {
  if (!(fraction > 0.0) || fraction > 1.0) bad("fraction must be in (0, 1]");
  if (universe_size == 0) bad("fraction of an empty universe");
  // Round half to even, like R's round(); exact .5 products occur in the
  // report grids and the half-even choice is the one the published sample
  // sizes are consistent with.
  auto s = static_cast<size_t>(std::nearbyint(fraction * static_cast<double>(universe_size)));
  return std::clamp<size_t>(s, 1, universe_size);
}

}  // namespace pcons
