// pcons: consensus and meta-clustering over set-partition universes.
// Every subcommand is a thin adapter over the library; no domain logic here.
// Exit codes: 0 success, 1 usage or input error, 2 a verification check failed.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pcons/consensus.hpp"
#include "pcons/counting.hpp"
#include "pcons/distance.hpp"
#include "pcons/experiments.hpp"
#include "pcons/metaclustering.hpp"
#include "pcons/partition.hpp"
#include "pcons/universe.hpp"

using namespace pcons;

namespace {

// "uncd", "cd", or "power:<exponent>".
DistanceSpec parse_distance(const std::string& text) {
  if (text == "uncd") return DistanceSpec::uncd();
  if (text == "cd") return DistanceSpec::cd();
  if (text.rfind("power:", 0) == 0) return DistanceSpec::power(std::stoi(text.substr(6)));
  throw std::invalid_argument("unknown distance '" + text + "' (uncd, cd, power:<e>)");
}

std::string describe(const Partition& g) {
  if (g == Partition::total_separation(g.n())) return "total-separation " + g.to_brace_string();
  if (g == Partition::all_in_one(g.n())) return "all-in-one " + g.to_brace_string();
  return g.to_brace_string();
}

void apply_jobs(int jobs) {
  if (jobs > 0) omp_set_num_threads(jobs);
}

// Plain key=value lines; '#' starts a comment. Values feed the experiment
// subcommand as defaults, with command-line flags winning.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      size_t x = s.find_first_not_of(" \t");
      size_t y = s.find_last_not_of(" \t");
      return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[key] = value;
  }
  return kv;
}

struct EnumerateArgs {
  int n = 0;
  std::string universe = "full";
};

int run_enumerate(const EnumerateArgs& a) {
  std::cerr << "# enumerate n=" << a.n << " universe=" << a.universe << "\n";
  auto u = enumerate_universe(a.n, Constraint::from_string(a.universe));
  std::cout << export_universe(u);
  return 0;
}

struct DistanceArgs {
  std::string a, b;
};

int run_distance(const DistanceArgs& d) {
  std::cerr << "# distance a='" << d.a << "' b='" << d.b << "'\n";
  Partition a = Partition::parse(d.a);
  Partition b = Partition::parse(d.b);
  std::cout << "unCD " << uncd(a, b) << "\n";
  std::cout << "CD " << cd(a, b).str() << "\n";
  return 0;
}

struct ConsensusArgs {
  int n = 0;
  std::string universe = "full";
  std::string distance = "uncd";
  std::optional<double> fraction;
  std::optional<size_t> sample_size;
  uint64_t seed = 42;
};

int run_consensus(const ConsensusArgs& a) {
  std::cerr << "# consensus n=" << a.n << " universe=" << a.universe
            << " distance=" << a.distance << " seed=" << a.seed;
  if (a.fraction) std::cerr << " fraction=" << *a.fraction;
  if (a.sample_size) std::cerr << " sample_size=" << *a.sample_size;
  std::cerr << "\n";

  auto u = enumerate_universe(a.n, Constraint::from_string(a.universe));
  DistanceSpec spec = parse_distance(a.distance);

  std::vector<Partition> refs;
  if (a.fraction || a.sample_size) {
    size_t size =
        a.sample_size ? *a.sample_size : sample_size_for_fraction(*a.fraction, u.size());
    SampleSpec sspec;
    sspec.size = size;
    sspec.seed = a.seed;
    refs = sample(u, sspec);
    std::cout << "references: " << refs.size() << " of " << u.size() << " sampled with seed "
              << a.seed << "\n";
  } else {
    refs = u.members;
    std::cout << "references: whole universe, " << u.size() << " members\n";
  }

  ConsensusResult res = consensus(u.members, refs, spec);
  std::cout << "minimizers: " << res.minimizers.size() << "\n";
  for (const auto& g : res.minimizers) std::cout << "  " << describe(g) << "\n";
  std::cout << "minimum total distance: " << res.min_total.str() << "\n";
  // Whole-universe runs quote the average over the other members (the
  // minimizer's distance to itself is zero and drops out); sampled runs
  // average over the references as given.
  const bool whole = !a.fraction && !a.sample_size;
  Rat avg = res.min_total / Rat(static_cast<int128>(refs.size()) - (whole ? 1 : 0));
  std::cout << "average distance to the " << (whole ? "other members" : "references") << ": "
            << avg.str() << " = " << avg.to_double() << "\n";
  return 0;
}

struct VerifyArgs {
  int n = 0;
  int kmax = 4;
  bool theorem1 = false, theorem2 = false, lemmas = false, kmax_lemmas = false, narrow = false;
};

int run_verify(const VerifyArgs& a) {
  std::cerr << "# verify n=" << a.n << " kmax=" << a.kmax << (a.theorem1 ? " theorem1" : "")
            << (a.theorem2 ? " theorem2" : "") << (a.lemmas ? " lemmas" : "")
            << (a.kmax_lemmas ? " kmax-lemmas" : "") << (a.narrow ? " narrow" : "") << "\n";
  bool any_fail = false;

  if (a.theorem1) {
    TheoremReport rep = verify_theorem1(a.n);
    bool ok = rep.holds && (a.n < 3 || rep.unique);
    any_fail |= !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " theorem1 n=" << a.n
              << " universe=" << rep.universe_size << " holds=" << (rep.holds ? "yes" : "no")
              << " unique=" << (rep.unique ? "yes" : "no") << " avg=" << rep.ts_average.str()
              << "\n";
    if (!ok && !rep.details.empty()) std::cout << "  " << rep.details << "\n";
  }
  if (a.theorem2) {
    KMaxTheoremReport rep = verify_theorem2(a.n, a.kmax);
    any_fail |= !rep.holds;
    std::cout << (rep.holds ? "PASS" : "FAIL") << " theorem2 n=" << a.n << " kmax=" << a.kmax
              << " universe=" << rep.universe_size << " outsider-avg=" << rep.ts_average.str()
              << " best-member-avg=" << rep.best_member_average.str()
              << " unique=" << (rep.unique ? "yes" : "no") << "\n";
  }
  if (a.lemmas) {
    LemmaReport rep = check_extension_lemmas(a.n);
    any_fail |= !rep.clean();
    std::cout << (rep.clean() ? "PASS" : "FAIL") << " lemmas n=" << a.n
              << " checks=" << rep.checks << " violations=" << rep.violations << "\n";
    for (const auto& e : rep.examples) std::cout << "  " << e << "\n";
  }
  if (a.kmax_lemmas) {
    LemmaReport rep = check_kmax_lemmas(a.n, a.kmax);
    any_fail |= !rep.clean();
    std::cout << (rep.clean() ? "PASS" : "FAIL") << " kmax-lemmas n=" << a.n << " kmax=" << a.kmax
              << " checks=" << rep.checks << " violations=" << rep.violations << "\n";
    for (const auto& e : rep.examples) std::cout << "  " << e << "\n";
  }
  if (a.narrow) {
    NarrowTrace tr = narrow_candidates(a.n);
    bool ok = !tr.stages.empty() &&
              tr.stages.back() == std::vector<Partition>{Partition::total_separation(a.n)};
    any_fail |= !ok;
    std::string sizes;
    for (const auto& s : tr.stages)
      sizes += (sizes.empty() ? "" : ",") + std::to_string(s.size());
    std::cout << (ok ? "PASS" : "FAIL") << " narrow n=" << a.n << " stages=" << sizes << "\n";
  }
  return any_fail ? 2 : 0;
}

struct NarrowArgs {
  int n = 0;
};

int run_narrow(const NarrowArgs& a) {
  std::cerr << "# narrow n=" << a.n << "\n";
  NarrowTrace tr = narrow_candidates(a.n);
  for (size_t s = 0; s < tr.stages.size(); ++s) {
    std::cout << "stage " << s << ": " << tr.stages[s].size() << " candidates\n";
    if (tr.stages[s].size() <= 24)
      for (const auto& g : tr.stages[s]) std::cout << "  " << describe(g) << "\n";
  }
  return 0;
}

struct MetaclusterArgs {
  int n = 0;
  int k = 2;
  std::string universe = "full";
  std::string method = "pam";
  std::string distance = "uncd";
  uint64_t seed = 42;
};

int run_metacluster(const MetaclusterArgs& a) {
  std::cerr << "# metacluster n=" << a.n << " universe=" << a.universe << " k=" << a.k
            << " method=" << a.method << " distance=" << a.distance << " seed=" << a.seed << "\n";
  auto u = enumerate_universe(a.n, Constraint::from_string(a.universe));

  MetaClusteringResult res;
  if (a.method == "pam") {
    res = pam(build_distance_matrix(u.members, parse_distance(a.distance)), a.k, a.seed);
  } else if (a.method == "kmeans") {
    res = kmeans(u.members, a.k, a.seed);
  } else {
    throw std::invalid_argument("unknown method '" + a.method + "' (pam, kmeans)");
  }

  std::vector<size_t> cards(static_cast<size_t>(res.k), 0);
  for (int c : res.assignment) ++cards[static_cast<size_t>(c)];
  for (size_t c = 0; c < cards.size(); ++c) {
    std::cout << "cluster " << c << ": " << cards[c] << " members, "
              << (a.method == "pam" ? "medoid " : "representative ")
              << describe(u.members[res.center_items[c]]) << "\n";
  }
  if (a.method == "pam") {
    std::cout << "total distance to medoids: " << to_string(res.exact_objective) << "\n";
  } else {
    std::cout << "within-cluster sum of squares: " << res.objective << "\n";
    std::cout << "variance explained: " << res.variance_explained << "\n";
  }
  return 0;
}

struct ExperimentArgs {
  std::string table = "T1";
  std::string format = "csv";
  std::string out;
  std::string config;
  ExperimentSpec spec;
  int jobs = 0;
};

int run_one_experiment_set(const ExperimentArgs& a) {
  std::vector<TableId> tables;
  if (a.table == "all") {
    if (a.spec.n != 0 || a.spec.fraction || a.spec.sample_size)
      throw std::invalid_argument("--table all runs the default grids; drop n/fraction/size");
    tables = {TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5, TableId::T6};
  } else {
    tables = {table_from_string(a.table)};
  }

  std::vector<ExperimentRow> rows;
  for (TableId t : tables) {
    ExperimentSpec spec = a.spec;
    spec.table = t;
    auto part = run_experiment(spec);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::string report = emit_report(rows, a.format);
  if (a.out.empty()) {
    std::cout << report;
  } else {
    std::ofstream f(a.out);
    if (!f) throw std::invalid_argument("cannot write: " + a.out);
    f << report;
    std::cerr << "# wrote " << a.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consensus clustering and meta-clustering over set-partition universes"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 0;
  app.add_option("--jobs", jobs, "worker thread count (default: all cores)");

  EnumerateArgs en;
  auto* c_en = app.add_subcommand("enumerate", "list every partition of a universe");
  c_en->add_option("--n", en.n, "ground-set size")->required();
  c_en->add_option("--universe", en.universe,
                   "full | kmax:<k> | structured:<a>,<b> | structured-ts:<a>,<b>");

  DistanceArgs di;
  auto* c_di = app.add_subcommand("distance", "distance between two partitions");
  c_di->add_option("--a", di.a, "first partition, brace or label form")->required();
  c_di->add_option("--b", di.b, "second partition")->required();

  ConsensusArgs co;
  auto* c_co = app.add_subcommand("consensus", "minimize total distance over a universe");
  c_co->add_option("--n", co.n, "ground-set size")->required();
  c_co->add_option("--universe", co.universe, "universe constraint");
  c_co->add_option("--distance", co.distance, "uncd | cd | power:<e>");
  c_co->add_option("--fraction", co.fraction, "sample this fraction of the universe as references");
  c_co->add_option("--sample-size", co.sample_size, "sample exactly this many references");
  c_co->add_option("--seed", co.seed, "sampling seed (default 42)");

  VerifyArgs ve;
  auto* c_ve = app.add_subcommand("verify", "run exhaustive checks; exit 2 on FAIL");
  c_ve->add_option("--n", ve.n, "ground-set size")->required();
  c_ve->add_option("--kmax", ve.kmax, "cluster cap for theorem2/kmax-lemmas (default 4)");
  c_ve->add_flag("--theorem1", ve.theorem1, "total separation minimizes total distance");
  c_ve->add_flag("--theorem2", ve.theorem2, "capped-universe variant");
  c_ve->add_flag("--lemmas", ve.lemmas, "extension sum identities");
  c_ve->add_flag("--kmax-lemmas", ve.kmax_lemmas, "capped extension sum identities");
  c_ve->add_flag("--narrow", ve.narrow, "candidate narrowing reaches total separation");

  NarrowArgs na;
  auto* c_na = app.add_subcommand("narrow", "print the candidate narrowing stages");
  c_na->add_option("--n", na.n, "ground-set size")->required();

  MetaclusterArgs me;
  auto* c_me = app.add_subcommand("metacluster", "cluster the partitions of a universe");
  c_me->add_option("--n", me.n, "ground-set size")->required();
  c_me->add_option("--k", me.k, "number of meta-clusters (default 2)");
  c_me->add_option("--universe", me.universe, "universe constraint");
  c_me->add_option("--method", me.method, "pam | kmeans (default pam)");
  c_me->add_option("--distance", me.distance, "pam distance: uncd | cd | power:<e>");
  c_me->add_option("--seed", me.seed, "kmeans seeding (default 42; pam is deterministic)");

  ExperimentArgs ex;
  auto* c_ex = app.add_subcommand("experiment", "regenerate report tables");
  auto* o_table = c_ex->add_option("--table", ex.table, "T1..T6 or all (default T1)");
  auto* o_n = c_ex->add_option("--n", ex.spec.n, "restrict to one ground-set size");
  auto* o_fraction = c_ex->add_option("--fraction", ex.spec.fraction, "sample fraction (0,1]");
  auto* o_size = c_ex->add_option("--sample-size", ex.spec.sample_size, "absolute sample size");
  auto* o_trials = c_ex->add_option("--trials", ex.spec.trials, "trials per row (default 1000)");
  auto* o_seed = c_ex->add_option("--seed", ex.spec.seed, "base seed (default 42)");
  auto* o_kmax = c_ex->add_option("--kmax", ex.spec.k_max, "reference cluster cap for T4");
  auto* o_pair_a = c_ex->add_option("--pair-a", ex.spec.pair_a, "co-clustered element for T3/T6");
  auto* o_pair_b = c_ex->add_option("--pair-b", ex.spec.pair_b, "co-clustered element for T3/T6");
  auto* o_exponent = c_ex->add_option("--exponent", ex.spec.exponent, "distance power for T2");
  auto* o_pam_k = c_ex->add_option("--pam-k", ex.spec.pam_k, "meta-cluster count for T5/T6");
  auto* o_format = c_ex->add_option("--format", ex.format, "csv | markdown (default csv)");
  auto* o_out = c_ex->add_option("--out", ex.out, "write the report here instead of stdout");
  c_ex->add_option("--config", ex.config, "key=value file with defaults for any of the above");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    apply_jobs(jobs);
    if (app.got_subcommand(c_en)) return run_enumerate(en);
    if (app.got_subcommand(c_di)) return run_distance(di);
    if (app.got_subcommand(c_co)) return run_consensus(co);
    if (app.got_subcommand(c_ve)) {
      if (!(ve.theorem1 || ve.theorem2 || ve.lemmas || ve.kmax_lemmas || ve.narrow)) {
        std::cerr << "verify: pick at least one of --theorem1 --theorem2 --lemmas "
                     "--kmax-lemmas --narrow\n";
        return 1;
      }
      return run_verify(ve);
    }
    if (app.got_subcommand(c_na)) return run_narrow(na);
    if (app.got_subcommand(c_me)) return run_metacluster(me);
    if (app.got_subcommand(c_ex)) {
      if (!ex.config.empty()) {
        // Config values are defaults: a key applies only when the matching
        // flag was not given on the command line.
        for (const auto& [key, value] : read_config(ex.config)) {
          if (key == "table" && o_table->count() == 0) ex.table = value;
          else if (key == "n" && o_n->count() == 0) ex.spec.n = std::stoi(value);
          else if (key == "fraction" && o_fraction->count() == 0)
            ex.spec.fraction = std::stod(value);
          else if (key == "sample_size" && o_size->count() == 0)
            ex.spec.sample_size = std::stoull(value);
          else if (key == "trials" && o_trials->count() == 0) ex.spec.trials = std::stoull(value);
          else if (key == "seed" && o_seed->count() == 0) ex.spec.seed = std::stoull(value);
          else if (key == "kmax" && o_kmax->count() == 0) ex.spec.k_max = std::stoi(value);
          else if (key == "pair_a" && o_pair_a->count() == 0) ex.spec.pair_a = std::stoi(value);
          else if (key == "pair_b" && o_pair_b->count() == 0) ex.spec.pair_b = std::stoi(value);
          else if (key == "exponent" && o_exponent->count() == 0)
            ex.spec.exponent = static_cast<unsigned>(std::stoul(value));
          else if (key == "pam_k" && o_pam_k->count() == 0) ex.spec.pam_k = std::stoull(value);
          else if (key == "format" && o_format->count() == 0) ex.format = value;
          else if (key == "out" && o_out->count() == 0) ex.out = value;
          else if (key == "jobs") apply_jobs(std::stoi(value));
          else if (key == "table" || key == "n" || key == "fraction" || key == "sample_size" ||
                   key == "trials" || key == "seed" || key == "kmax" || key == "pair_a" ||
                   key == "pair_b" || key == "exponent" || key == "pam_k" || key == "format" ||
                   key == "out") {
            ;  // overridden on the command line
          } else {
            throw std::invalid_argument("unknown config key: " + key);
          }
        }
      }
      std::cerr << "# experiment table=" << ex.table << " n=" << ex.spec.n << " fraction="
                << (ex.spec.fraction ? std::to_string(*ex.spec.fraction) : std::string("-"))
                << " sample_size="
                << (ex.spec.sample_size ? std::to_string(*ex.spec.sample_size) : std::string("-"))
                << " trials=" << ex.spec.trials << " seed=" << ex.spec.seed
                << " kmax=" << ex.spec.k_max << " pair=" << ex.spec.pair_a << ","
                << ex.spec.pair_b << " exponent=" << ex.spec.exponent
                << " pam_k=" << ex.spec.pam_k << " format=" << ex.format
                << " out=" << (ex.out.empty() ? "-" : ex.out) << "\n";
      return run_one_experiment_set(ex);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
