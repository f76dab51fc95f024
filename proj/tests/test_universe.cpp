#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pcons/rng.hpp"
#include "pcons/universe.hpp"

using namespace pcons;

TEST_CASE("constraint round-trips through text") {
  for (const char* text : {"full", "kmax:4", "structured:1,3", "structured-ts:2,5"}) {
    CHECK(Constraint::from_string(text).to_string() == text);
  }
  CHECK(Constraint::structured(3, 1).to_string() == "structured:1,3");  // normalized
  CHECK_THROWS(Constraint::from_string("bogus"));
  CHECK_THROWS(Constraint::from_string("kmax:0"));
  CHECK_THROWS(Constraint::structured(2, 2));
}

TEST_CASE("enumeration is sorted, unique, and constraint-consistent") {
  auto full7 = enumerate_universe(7, Constraint::full());
  for (const Constraint& c : {Constraint::full(), Constraint::k_max(3), Constraint::structured(1, 3),
                              Constraint::structured_plus_total_separation(1, 3)}) {
    auto u = enumerate_universe(7, c);
    CHECK(u.n == 7);
    for (size_t i = 0; i + 1 < u.size(); ++i) CHECK(u.members[i] < u.members[i + 1]);
    for (const auto& g : u.members) CHECK(c.admits(g));
    // Cross-filter: the constrained universe is exactly the admitted subset.
    size_t admitted = 0;
    for (const auto& g : full7.members) admitted += c.admits(g) ? 1 : 0;
    CHECK(admitted == u.size());
  }
}

TEST_CASE("constraint semantics on specific partitions") {
  Constraint k2 = Constraint::k_max(2);
  CHECK(k2.admits(Partition::all_in_one(5)));
  CHECK(k2.admits(Partition::parse("0,0,1,0,1")));
  CHECK_FALSE(k2.admits(Partition::total_separation(5)));

  Constraint s = Constraint::structured(1, 3);
  CHECK(s.admits(Partition::parse("0,1,0,2")));
  CHECK_FALSE(s.admits(Partition::total_separation(4)));

  Constraint sts = Constraint::structured_plus_total_separation(1, 3);
  CHECK(sts.admits(Partition::parse("0,1,0,2")));
  CHECK(sts.admits(Partition::total_separation(4)));
  CHECK_FALSE(sts.admits(Partition::parse("0,1,1,0")));  // breaks the pair, not total separation
}

TEST_CASE("index_of finds members and rejects outsiders") {
  auto u = enumerate_universe(5, Constraint::structured(1, 3));
  for (size_t i = 0; i < u.size(); ++i) {
    auto idx = u.index_of(u.members[i]);
    REQUIRE(idx.has_value());
    CHECK(*idx == i);
  }
  CHECK_FALSE(u.index_of(Partition::total_separation(5)).has_value());
}

TEST_CASE("enumeration validates its inputs") {
  CHECK_THROWS(enumerate_universe(0, Constraint::full()));
  CHECK_THROWS(enumerate_universe(15, Constraint::full()));  // memory cap
  CHECK_THROWS(enumerate_universe(4, Constraint::k_max(0)));
  CHECK_THROWS(enumerate_universe(3, Constraint::structured(1, 5)));  // pair outside 1..n
}

TEST_CASE("export emits a header and one brace line per member") {
  auto u = enumerate_universe(3, Constraint::full());
  std::istringstream in(export_universe(u));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "# n=3 constraint=full count=5");
  size_t i = 0;
  while (std::getline(in, line)) {
    REQUIRE(i < u.size());
    CHECK(Partition::parse(line) == u.members[i]);
    ++i;
  }
  CHECK(i == u.size());
}

TEST_CASE("sample of the whole universe is the universe") {
  auto u = enumerate_universe(4, Constraint::full());
  for (uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    SampleSpec spec;
    spec.size = u.size();
    spec.seed = seed;
    CHECK(sample(u, spec) == u.members);
  }
}

TEST_CASE("sampling is deterministic and without replacement") {
  auto u = enumerate_universe(6, Constraint::full());
  SampleSpec spec;
  spec.size = 20;
  spec.seed = 777;
  auto s1 = sample(u, spec);
  auto s2 = sample(u, spec);
  CHECK(s1 == s2);
  REQUIRE(s1.size() == 20);
  std::set<Partition> distinct(s1.begin(), s1.end());
  CHECK(distinct.size() == 20);
  CHECK(std::is_sorted(s1.begin(), s1.end()));

  spec.seed = 778;
  CHECK(sample(u, spec) != s1);
}

TEST_CASE("sample size bounds are enforced") {
  auto u = enumerate_universe(4, Constraint::full());
  SampleSpec spec;
  spec.size = u.size() + 1;
  CHECK_THROWS(sample(u, spec));
  spec.size = 0;
  CHECK_THROWS(sample(u, spec));
}

TEST_CASE("force_include is always present") {
  auto u = enumerate_universe(5, Constraint::full());
  Partition ts = Partition::total_separation(5);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    SampleSpec spec;
    spec.size = 3;
    spec.seed = seed;
    spec.force_include = ts;
    auto s = sample(u, spec);
    CHECK(std::count(s.begin(), s.end(), ts) == 1);
    std::set<Partition> distinct(s.begin(), s.end());
    CHECK(distinct.size() == s.size());
  }
  SampleSpec spec;
  spec.size = 1;
  spec.force_include = Partition::parse("0,1,2,3,4");
  CHECK(sample(u, spec) == std::vector<Partition>{Partition::total_separation(5)});
  spec.force_include = Partition::total_separation(4);  // wrong ground set
  CHECK_THROWS(sample(u, spec));
}

TEST_CASE("single draws are uniform within five sigma") {
  const size_t universe_size = 15;
  const size_t draws = 10000;
  std::vector<size_t> counts(universe_size, 0);
  for (uint64_t seed = 0; seed < draws; ++seed) {
    auto idx = sample_indices(universe_size, 1, seed);
    REQUIRE(idx.size() == 1);
    counts[idx[0]]++;
  }
  const double p = 1.0 / static_cast<double>(universe_size);
  const double mean = static_cast<double>(draws) * p;
  const double sigma = std::sqrt(static_cast<double>(draws) * p * (1.0 - p));
  for (size_t c : counts) CHECK(std::abs(static_cast<double>(c) - mean) <= 5.0 * sigma);
}

TEST_CASE("draws alongside a forced index are uniform over the rest") {
  const size_t universe_size = 15;
  const size_t forced = 14;
  const size_t draws = 10000;
  std::vector<size_t> counts(universe_size, 0);
  for (uint64_t seed = 0; seed < draws; ++seed) {
    auto idx = sample_indices(universe_size, 2, seed, forced);
    REQUIRE(idx.size() == 2);
    CHECK(std::count(idx.begin(), idx.end(), forced) == 1);
    counts[idx[0] == forced ? idx[1] : idx[0]]++;
  }
  CHECK(counts[forced] == 0);
  const double p = 1.0 / static_cast<double>(universe_size - 1);
  const double mean = static_cast<double>(draws) * p;
  const double sigma = std::sqrt(static_cast<double>(draws) * p * (1.0 - p));
  for (size_t i = 0; i < universe_size; ++i) {
    if (i == forced) continue;
    CHECK(std::abs(static_cast<double>(counts[i]) - mean) <= 5.0 * sigma);
  }
}

TEST_CASE("replacement sampling may repeat, plain sampling may not") {
  bool saw_repeat = false;
  for (uint64_t seed = 0; seed < 100 && !saw_repeat; ++seed) {
    auto idx = sample_indices(5, 5, seed, std::nullopt, true);
    std::set<size_t> distinct(idx.begin(), idx.end());
    saw_repeat = distinct.size() < idx.size();
  }
  CHECK(saw_repeat);
}

TEST_CASE("fractional sample sizes round half to even") {
  CHECK(sample_size_for_fraction(0.5, 15) == 8);    // 7.5 -> 8
  CHECK(sample_size_for_fraction(0.5, 5) == 2);     // 2.5 -> 2
  CHECK(sample_size_for_fraction(0.1, 15) == 2);    // 1.5 -> 2
  CHECK(sample_size_for_fraction(0.5, 203) == 102); // 101.5 -> 102
  CHECK(sample_size_for_fraction(0.5, 187) == 94);  // 93.5 -> 94
  CHECK(sample_size_for_fraction(0.1, 715) == 72);  // 71.5 -> 72
  CHECK(sample_size_for_fraction(0.002, 4140) == 8);
  CHECK(sample_size_for_fraction(0.4, 52) == 21);
  CHECK(sample_size_for_fraction(1.0, 877) == 877);
  CHECK(sample_size_for_fraction(1e-9, 1000) == 1);  // clamped up
  CHECK_THROWS(sample_size_for_fraction(0.0, 10));
  CHECK_THROWS(sample_size_for_fraction(1.5, 10));
}

TEST_CASE("per-stream seeds decorrelate trials") {
  CHECK(stream_seed(42, 0) != stream_seed(42, 1));
  CHECK(stream_seed(42, 0) != stream_seed(43, 0));
  // A few thousand streams collide nowhere (64-bit mixing).
  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < 5000; ++i) seen.insert(stream_seed(42, i));
  CHECK(seen.size() == 5000);
}
