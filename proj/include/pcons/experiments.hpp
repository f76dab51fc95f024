#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcons/distance.hpp"
#include "pcons/universe.hpp"

namespace pcons {

// The six report tables. T1-T4 are consensus experiments, T5/T6 PAM
// meta-clustering experiments.
enum class TableId { T1, T2, T3, T4, T5, T6 };

std::string to_string(TableId table);
TableId table_from_string(const std::string& text);

// Parameters for one experiment run. Leaving n at 0 expands to every default
// row of the table; leaving fraction/sample_size unset expands to the default
// fractions for that n.
struct ExperimentSpec {
  TableId table = TableId::T1;
  int n = 0;
  std::optional<double> fraction;          // in (0,1]
  std::optional<std::size_t> sample_size;  // overrides fraction when set
  std::size_t trials = 1000;
  std::uint64_t seed = 42;

  int k_max = 4;           // reference constraint for T4
  int pair_a = 1;          // co-clustered pair for T3/T6
  int pair_b = 3;
  unsigned exponent = 10;  // distance power for T2
  std::size_t pam_k = 2;   // meta-cluster count for T5/T6
};

// One table row: aggregated hit counts over `trials` independent trials.
struct ExperimentRow {
  TableId table = TableId::T1;
  int n = 0;
  std::size_t universe_size = 0;
  std::size_t sample_size = 0;
  double fraction = 1.0;  // requested fraction of the universe
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  // Trials where total separation is in the minimizer set (T1-T4) or is a
  // medoid (T5/T6).
  std::size_t hits_total_separation = 0;
  // Trials with a unique minimizer equal to total separation (T1-T4 only).
  std::size_t hits_unique = 0;
  // Trials where the structure centre is in the minimizer set (T3 only).
  std::optional<std::size_t> hits_structure_centre;

  double pct_total_separation() const;
  double pct_unique() const;
  std::optional<double> pct_structure_centre() const;
};

// The (n, fraction) grid each table is reported over by default.
std::vector<std::pair<int, double>> default_table_rows(TableId table);

// Consensus experiments (T1-T4). Per trial: draw a reference sample from the
// table's universe and minimize the total distance over the candidate pool
// (the full candidate universe, not just the sample; sub-sampled rows are
// meaningless otherwise because an unsampled partition could never win).
std::vector<ExperimentRow> run_consensus_experiment(const ExperimentSpec& spec);

// PAM experiments (T5/T6). Per trial: draw a sample with total separation
// force-included, run PAM with pam_k clusters, count trials where total
// separation is one of the medoids.
std::vector<ExperimentRow> run_pam_experiment(const ExperimentSpec& spec);

// Dispatches to the matching runner for spec.table.
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec);

// Renders rows grouped by table, columns in report order (n, universe size,
// sample size, sample percentage, result percentages), with a footer comment
// recording configuration, seed and trials. format is "csv" or "markdown".
std::string emit_report(const std::vector<ExperimentRow>& rows,
                        const std::string& format);

}  // namespace pcons
