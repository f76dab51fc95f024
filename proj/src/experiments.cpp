#include "pcons/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pcons/metaclustering.hpp"
#include "pcons/rng.hpp"

namespace pcons {

namespace {

constexpr uint128 kU128Max = ~static_cast<uint128>(0);

struct RowParams {
  int n;
  double fraction;
};

// The (n, fraction) grid each table is reported over. Fractions follow the
// published rows; sample sizes come out of sample_size_for_fraction.
const std::vector<RowParams>& grid(TableId table) {
  static const std::vector<RowParams> t1 = {
      {4, 1.0}, {4, 0.5},
      {5, 1.0}, {5, 0.5}, {5, 0.4}, {5, 0.2}, {5, 0.1},
      {6, 1.0}, {6, 0.5}, {6, 0.4}, {6, 0.2}, {6, 0.1},
      {7, 0.1}, {7, 0.05}, {7, 0.04}, {7, 0.02}, {7, 0.01},
      {8, 0.01}, {8, 0.005}, {8, 0.004}, {8, 0.002}, {8, 0.001}};
  static const std::vector<RowParams> t2 = {
      {4, 1.0}, {4, 0.5},
      {5, 1.0}, {5, 0.5}, {5, 0.4}, {5, 0.2}, {5, 0.1},
      {6, 1.0}, {6, 0.5}, {6, 0.4}, {6, 0.2}, {6, 0.1},
      {7, 0.1}, {7, 0.05}, {7, 0.04}, {7, 0.02}, {7, 0.01}};
  static const std::vector<RowParams> t3 = {
      {4, 1.0}, {4, 0.5},
      {5, 1.0}, {5, 0.5}, {5, 0.4}, {5, 0.2}, {5, 0.1},
      {6, 1.0}, {6, 0.5}, {6, 0.4}, {6, 0.2}, {6, 0.1},
      {7, 0.2}, {7, 0.1}, {7, 0.08}, {7, 0.04}, {7, 0.02}};
  static const std::vector<RowParams> t4 = {
      {6, 1.0}, {6, 0.5}, {6, 0.4}, {6, 0.2}, {6, 0.1},
      {7, 0.2}, {7, 0.1}, {7, 0.08}, {7, 0.04}, {7, 0.02}};
  static const std::vector<RowParams> t5 = {
      {4, 1.0}, {4, 0.5},
      {5, 1.0}, {5, 0.5}, {5, 0.4}, {5, 0.2}, {5, 0.1},
      {6, 1.0}, {6, 0.5}, {6, 0.4}, {6, 0.2}, {6, 0.1},
      {7, 0.1}, {7, 0.05}, {7, 0.04}, {7, 0.02}, {7, 0.01},
      {8, 0.02}, {8, 0.01}, {8, 0.008}, {8, 0.004}, {8, 0.002}};
  static const std::vector<RowParams> t6 = {
      {4, 1.0}, {4, 0.5},
      {5, 1.0}, {5, 0.5}, {5, 0.4}, {5, 0.2}, {5, 0.1},
      {6, 1.0}, {6, 0.5}, {6, 0.4}, {6, 0.2}, {6, 0.1},
      {7, 0.2}, {7, 0.1}, {7, 0.08}, {7, 0.04}, {7, 0.02},
      {8, 0.08}, {8, 0.04}, {8, 0.032}, {8, 0.016}, {8, 0.008}};
  switch (table) {
    case TableId::T1: return t1;
    case TableId::T2: return t2;
    case TableId::T3: return t3;
    case TableId::T4: return t4;
    case TableId::T5: return t5;
    case TableId::T6: return t6;
  }
  throw std::logic_error("unknown table");
}

bool is_pam_table(TableId table) {
  return table == TableId::T5 || table == TableId::T6;
}

// All elements singletons except pair {a, b}.
Partition structure_centre(int n, int a, int b) {
  std::vector<int> labels(static_cast<size_t>(n));
  for (int e = 1; e <= n; ++e) labels[static_cast<size_t>(e) - 1] = e;
  labels[static_cast<size_t>(b) - 1] = labels[static_cast<size_t>(a) - 1];
  return Partition::canonicalize(labels);
}

std::vector<uint128> signatures_of(const std::vector<Partition>& items) {
  std::vector<uint128> sigs;
  sigs.reserve(items.size());
  for (const auto& g : items) sigs.push_back(co_signature(g));
  return sigs;
}

void validate_common(const ExperimentSpec& spec, int n) {
  if (n < 2 || n > 14) throw std::invalid_argument("experiment n must be in 2..14");
  if (spec.trials == 0) throw std::invalid_argument("trials must be positive");
  if (spec.fraction && (*spec.fraction <= 0.0 || *spec.fraction > 1.0))
    throw std::invalid_argument("fraction must be in (0, 1]");
}

// Expands spec.n == 0 / unset fraction to the default grid.
std::vector<RowParams> resolve_rows(const ExperimentSpec& spec) {
  std::vector<RowParams> rows;
  if (spec.n == 0) {
    if (spec.fraction || spec.sample_size)
      throw std::invalid_argument("fraction/sample_size need an explicit n");
    return grid(spec.table);
  }
  if (spec.fraction || spec.sample_size) {
    rows.push_back({spec.n, spec.fraction ? *spec.fraction : 0.0});
    return rows;
  }
  for (const auto& rp : grid(spec.table))
    if (rp.n == spec.n) rows.push_back(rp);
  if (rows.empty())
    throw std::invalid_argument("no default rows for this table at n=" + std::to_string(spec.n) +
                                "; pass a fraction or sample size");
  return rows;
}

// Sample size for one row; explicit size wins over fraction.
size_t resolve_sample_size(const ExperimentSpec& spec, const RowParams& rp, size_t universe_size,
                           double* fraction_out) {
  if (spec.sample_size) {
    if (*spec.sample_size == 0 || *spec.sample_size > universe_size)
      throw std::invalid_argument("sample_size must be in 1..universe size");
    *fraction_out = static_cast<double>(*spec.sample_size) / static_cast<double>(universe_size);
    return *spec.sample_size;
  }
  *fraction_out = rp.fraction;
  return sample_size_for_fraction(rp.fraction, universe_size);
}

// Everything a consensus trial needs, built once per row.
struct ConsensusSetup {
  std::vector<uint128> ref_sigs;    // the universe samples are drawn from
  std::vector<uint128> cand_sigs;   // the pool minimized over
  std::optional<size_t> ts_cand;    // candidate index of total separation
  std::optional<size_t> centre_cand;
  std::vector<uint128> scale;       // scaled distance per unCD value
};

struct TrialOutcome {
  bool ts = false;
  bool centre = false;
  bool unique = false;
};

TrialOutcome consensus_trial(const ConsensusSetup& s, const std::vector<size_t>& ref_idx) {
  TrialOutcome out;
  uint128 best = kU128Max;
  size_t ties = 0;
  for (size_t c = 0; c < s.cand_sigs.size(); ++c) {
    const uint128 sc = s.cand_sigs[c];
    uint128 total = 0;
    for (size_t r : ref_idx) total += s.scale[uncd_signature(sc, s.ref_sigs[r])];
    if (total < best) {
      best = total;
      ties = 1;
      out.ts = s.ts_cand && c == *s.ts_cand;
      out.centre = s.centre_cand && c == *s.centre_cand;
    } else if (total == best) {
      ++ties;
      out.ts = out.ts || (s.ts_cand && c == *s.ts_cand);
      out.centre = out.centre || (s.centre_cand && c == *s.centre_cand);
    }
  }
  out.unique = out.ts && ties == 1;
  return out;
}

ExperimentRow run_consensus_row(const ExperimentSpec& spec, const RowParams& rp) {
  const int n = rp.n;
  validate_common(spec, n);

  DistanceSpec dspec = spec.table == TableId::T2 ? DistanceSpec::power(static_cast<int>(spec.exponent))
                                                 : DistanceSpec::uncd();

  Constraint ref_constraint = Constraint::full();
  if (spec.table == TableId::T3) ref_constraint = Constraint::structured(spec.pair_a, spec.pair_b);
  if (spec.table == TableId::T4) ref_constraint = Constraint::k_max(spec.k_max);
  PartitionUniverse refs = enumerate_universe(n, ref_constraint);

  ConsensusSetup setup;
  setup.ref_sigs = signatures_of(refs.members);
  const Partition ts = Partition::total_separation(n);
  if (spec.table == TableId::T4) {
    // References are k-bounded but the minimum is sought over all partitions;
    // total separation itself is outside the reference universe.
    PartitionUniverse cands = enumerate_universe(n, Constraint::full());
    setup.cand_sigs = signatures_of(cands.members);
    setup.ts_cand = cands.index_of(ts);
  } else {
    setup.cand_sigs = setup.ref_sigs;
    setup.ts_cand = refs.index_of(ts);
    if (spec.table == TableId::T3)
      setup.centre_cand = refs.index_of(structure_centre(n, spec.pair_a, spec.pair_b));
  }

  const auto max_uncd = static_cast<uint64_t>(n) * (static_cast<uint64_t>(n) - 1) / 2;
  setup.scale.resize(max_uncd + 1);
  for (uint64_t u = 0; u <= max_uncd; ++u) setup.scale[u] = scaled_distance_from_uncd(u, dspec);

  ExperimentRow row;
  row.table = spec.table;
  row.n = n;
  row.universe_size = refs.size();
  row.sample_size = resolve_sample_size(spec, rp, refs.size(), &row.fraction);
  row.trials = spec.trials;
  row.seed = spec.seed;
  if (spec.table == TableId::T3) row.hits_structure_centre = 0;

  if (row.sample_size == refs.size()) {
    // Sampling is the identity; one deterministic trial decides the row.
    std::vector<size_t> all(refs.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    TrialOutcome out = consensus_trial(setup, all);
    row.hits_total_separation = out.ts ? row.trials : 0;
    row.hits_unique = out.unique ? row.trials : 0;
    if (row.hits_structure_centre) *row.hits_structure_centre = out.centre ? row.trials : 0;
    return row;
  }

  size_t ts_hits = 0, centre_hits = 0, unique_hits = 0;
  const auto trials = static_cast<long long>(row.trials);
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : ts_hits, centre_hits, unique_hits)
  for (long long t = 0; t < trials; ++t) {
    auto idx = sample_indices(refs.size(), row.sample_size,
                              stream_seed(spec.seed, static_cast<uint64_t>(t)));
    TrialOutcome out = consensus_trial(setup, idx);
    ts_hits += out.ts ? 1 : 0;
    centre_hits += out.centre ? 1 : 0;
    unique_hits += out.unique ? 1 : 0;
  }
  row.hits_total_separation = ts_hits;
  row.hits_unique = unique_hits;
  if (row.hits_structure_centre) *row.hits_structure_centre = centre_hits;
  return row;
}

// One PAM trial: does total separation end up a medoid of the sample?
bool pam_trial(const std::vector<uint128>& sigs, const std::vector<size_t>& idx, size_t ts_index,
               int k) {
  std::vector<uint128> sub;
  sub.reserve(idx.size());
  for (size_t i : idx) sub.push_back(sigs[i]);
  MetaClusteringResult res = pam_signatures(sub, k, 1);
  const size_t ts_pos =
      static_cast<size_t>(std::lower_bound(idx.begin(), idx.end(), ts_index) - idx.begin());
  for (size_t c : res.center_items)
    if (c == ts_pos) return true;
  return false;
}

ExperimentRow run_pam_row(const ExperimentSpec& spec, const RowParams& rp) {
  const int n = rp.n;
  validate_common(spec, n);
  if (spec.pam_k < 2) throw std::invalid_argument("pam_k must be at least 2");

  Constraint constraint = spec.table == TableId::T5
                              ? Constraint::full()
                              : Constraint::structured_plus_total_separation(spec.pair_a, spec.pair_b);
  PartitionUniverse universe = enumerate_universe(n, constraint);
  std::vector<uint128> sigs = signatures_of(universe.members);
  std::optional<size_t> ts_index = universe.index_of(Partition::total_separation(n));
  if (!ts_index) throw std::logic_error("total separation missing from PAM universe");

  ExperimentRow row;
  row.table = spec.table;
  row.n = n;
  row.universe_size = universe.size();
  row.sample_size = resolve_sample_size(spec, rp, universe.size(), &row.fraction);
  if (row.sample_size < spec.pam_k)
    throw std::invalid_argument("sample size is below the meta-cluster count");
  row.trials = spec.trials;
  row.seed = spec.seed;
  const int k = static_cast<int>(spec.pam_k);

  if (row.sample_size == universe.size()) {
    std::vector<size_t> all(universe.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    row.hits_total_separation = pam_trial(sigs, all, *ts_index, k) ? row.trials : 0;
    return row;
  }

  size_t ts_hits = 0;
  const auto trials = static_cast<long long>(row.trials);
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : ts_hits)
  for (long long t = 0; t < trials; ++t) {
    auto idx = sample_indices(universe.size(), row.sample_size,
                              stream_seed(spec.seed, static_cast<uint64_t>(t)), ts_index);
    ts_hits += pam_trial(sigs, idx, *ts_index, k) ? 1 : 0;
  }
  row.hits_total_separation = ts_hits;
  return row;
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fmt_pct(size_t hits, size_t trials) {
  return fmt_g(100.0 * static_cast<double>(hits) / static_cast<double>(trials));
}

}  // namespace

std::string to_string(TableId table) {
  switch (table) {
    case TableId::T1: return "T1";
    case TableId::T2: return "T2";
    case TableId::T3: return "T3";
    case TableId::T4: return "T4";
    case TableId::T5: return "T5";
    case TableId::T6: return "T6";
  }
  throw std::logic_error("unknown table");
}

TableId table_from_string(const std::string& text) {
  for (TableId t : {TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5, TableId::T6})
    if (text == to_string(t)) return t;
  throw std::invalid_argument("unknown table id: " + text);
}

double ExperimentRow::pct_total_separation() const {
  return 100.0 * static_cast<double>(hits_total_separation) / static_cast<double>(trials);
}

double ExperimentRow::pct_unique() const {
  return 100.0 * static_cast<double>(hits_unique) / static_cast<double>(trials);
}

std::optional<double> ExperimentRow::pct_structure_centre() const {
  if (!hits_structure_centre) return std::nullopt;
  return 100.0 * static_cast<double>(*hits_structure_centre) / static_cast<double>(trials);
}

std::vector<std::pair<int, double>> default_table_rows(TableId table) {
  std::vector<std::pair<int, double>> rows;
  for (const auto& rp : grid(table)) rows.emplace_back(rp.n, rp.fraction);
  return rows;
}

std::vector<ExperimentRow> run_consensus_experiment(const ExperimentSpec& spec) {
  if (is_pam_table(spec.table))
    throw std::invalid_argument(to_string(spec.table) + " is a PAM table; use run_pam_experiment");
  std::vector<ExperimentRow> rows;
  for (const auto& rp : resolve_rows(spec)) rows.push_back(run_consensus_row(spec, rp));
  return rows;
}

std::vector<ExperimentRow> run_pam_experiment(const ExperimentSpec& spec) {
  if (!is_pam_table(spec.table))
    throw std::invalid_argument(to_string(spec.table) +
                                " is a consensus table; use run_consensus_experiment");
  std::vector<ExperimentRow> rows;
  for (const auto& rp : resolve_rows(spec)) rows.push_back(run_pam_row(spec, rp));
  return rows;
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  return is_pam_table(spec.table) ? run_pam_experiment(spec) : run_consensus_experiment(spec);
}

std::string emit_report(const std::vector<ExperimentRow>& rows, const std::string& format) {
  if (rows.empty()) throw std::invalid_argument("emit_report needs at least one row");
  const bool markdown = format == "markdown";
  if (!markdown && format != "csv") throw std::invalid_argument("format must be csv or markdown");

  std::ostringstream out;
  bool first_group = true;
  for (TableId table : {TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5, TableId::T6}) {
    std::vector<const ExperimentRow*> group;
    for (const auto& r : rows)
      if (r.table == table) group.push_back(&r);
    if (group.empty()) continue;
    if (!first_group) out << "\n";
    first_group = false;

    const bool centre_col = table == TableId::T3;
    const bool consensus = !is_pam_table(table);
    if (markdown) {
      out << "| n | universe size | sample size | sample % | total separation %";
      if (centre_col) out << " | structure centre %";
      out << " |\n| ---: | ---: | ---: | ---: | ---:";
      if (centre_col) out << " | ---:";
      out << " |\n";
    } else {
      out << "n,universe_size,sample_size,sample_pct,pct_total_separation";
      if (centre_col) out << ",pct_structure_centre";
      out << "\n";
    }

    for (const ExperimentRow* r : group) {
      std::vector<std::string> cells = {
          std::to_string(r->n), std::to_string(r->universe_size), std::to_string(r->sample_size),
          fmt_g(100.0 * r->fraction), fmt_pct(r->hits_total_separation, r->trials)};
      if (centre_col)
        cells.push_back(r->hits_structure_centre ? fmt_pct(*r->hits_structure_centre, r->trials)
                                                 : std::string());
      if (markdown) {
        out << "|";
        for (const auto& c : cells) out << " " << c << " |";
        out << "\n";
      } else {
        for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
      }
    }

    // Footer comments: configuration the columns do not carry.
    const char* lead = markdown ? "> " : "# ";
    if (markdown) out << "\n";
    std::vector<std::pair<size_t, uint64_t>> configs;
    for (const ExperimentRow* r : group) {
      std::pair<size_t, uint64_t> c{r->trials, r->seed};
      if (std::find(configs.begin(), configs.end(), c) == configs.end()) configs.push_back(c);
    }
    for (const auto& [trials, seed] : configs)
      out << lead << "table=" << to_string(table) << " trials=" << trials << " seed=" << seed
          << "\n";
    if (consensus) {
      out << lead << "pct_unique=";
      for (size_t i = 0; i < group.size(); ++i)
        out << (i ? "," : "") << fmt_pct(group[i]->hits_unique, group[i]->trials);
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace pcons
