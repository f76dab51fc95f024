#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "pcons/partition.hpp"
#include "pcons/rng.hpp"
#include "pcons/universe.hpp"

using namespace pcons;

namespace {

// Random canonical partition: labels grow by at most one, so the result is
// already in restricted growth form.
Partition random_partition(SplitMix64& rng, int n) {
  std::vector<uint8_t> rgs(static_cast<size_t>(n));
  uint8_t max_label = 0;
  for (int i = 1; i < n; ++i) {
    rgs[static_cast<size_t>(i)] =
        static_cast<uint8_t>(rng.below(static_cast<uint64_t>(max_label) + 2));
    max_label = std::max(max_label, rgs[static_cast<size_t>(i)]);
  }
  return Partition::from_rgs(rgs);
}

}  // namespace

TEST_CASE("from_rgs validates restricted growth") {
  CHECK_NOTHROW(Partition::from_rgs({0}));
  CHECK_NOTHROW(Partition::from_rgs({0, 1, 0, 2}));
  CHECK_THROWS(Partition::from_rgs({}));
  CHECK_THROWS(Partition::from_rgs({1}));
  CHECK_THROWS(Partition::from_rgs({0, 2}));        // skips label 1
  CHECK_THROWS(Partition::from_rgs({0, 1, 3}));     // skips label 2
}

TEST_CASE("canonicalize relabels by first appearance") {
  Partition g = Partition::canonicalize({7, 3, 7, 9});
  CHECK(g.to_rgs_string() == "0,1,0,2");
  CHECK(Partition::canonicalize({2, 2, 2}) == Partition::all_in_one(3));
  CHECK(Partition::canonicalize({5, 4, 3, 2, 1}) == Partition::total_separation(5));
  CHECK_THROWS(Partition::canonicalize({}));
}

TEST_CASE("canonicalize is invariant under label permutation") {
  SplitMix64 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.below(10));
    Partition g = random_partition(rng, n);
    // Remap every label through a random injection into a larger label space.
    std::vector<int> remap(static_cast<size_t>(g.k()));
    std::set<int> used;
    for (auto& m : remap) {
      int v;
      do {
        v = static_cast<int>(rng.below(1000));
      } while (used.count(v));
      used.insert(v);
      m = v;
    }
    std::vector<int> labels(static_cast<size_t>(n));
    for (int e = 1; e <= n; ++e)
      labels[static_cast<size_t>(e) - 1] = remap[static_cast<size_t>(g.label(e))];
    CHECK(Partition::canonicalize(labels) == g);
  }
}

TEST_CASE("parse handles brace and label forms") {
  Partition g = Partition::parse("{ {1, 3} {2} }");
  CHECK(g.to_rgs_string() == "0,1,0");
  CHECK(Partition::parse("{{2}{1,3}}") == g);
  CHECK(Partition::parse("0,1,0") == g);
  CHECK(Partition::parse(" 0 , 1 , 0 ") == g);
  CHECK(Partition::parse("3,7,3") == g);  // arbitrary labels are canonicalized

  CHECK_THROWS(Partition::parse(""));
  CHECK_THROWS(Partition::parse("{ {1, 3} }"));        // element 2 missing
  CHECK_THROWS(Partition::parse("{ {1} {1, 2} }"));    // duplicate element
  CHECK_THROWS(Partition::parse("{ {0, 1} }"));        // elements start at 1
  CHECK_THROWS(Partition::parse("{ {1} {} {2} }"));    // empty cluster
  CHECK_THROWS(Partition::parse("{ {1, 4} {2} }"));    // gap in ground set
  CHECK_THROWS(Partition::parse("{ {1, x} }"));
}

TEST_CASE("parse round-trips both text forms over whole universes") {
  for (int n = 1; n <= 6; ++n) {
    auto u = enumerate_universe(n, Constraint::full());
    for (const Partition& g : u.members) {
      CHECK(Partition::parse(g.to_brace_string()) == g);
      CHECK(Partition::parse(g.to_rgs_string()) == g);
    }
  }
}

TEST_CASE("factories and accessors") {
  Partition ts = Partition::total_separation(4);
  CHECK(ts.n() == 4);
  CHECK(ts.k() == 4);
  CHECK(ts.to_rgs_string() == "0,1,2,3");
  Partition aio = Partition::all_in_one(4);
  CHECK(aio.k() == 1);
  CHECK(aio.to_brace_string() == "{ {1, 2, 3, 4} }");

  Partition g = Partition::parse("{ {1, 3} {2, 4} }");
  CHECK(g.same_cluster(1, 3));
  CHECK(g.same_cluster(2, 4));
  CHECK_FALSE(g.same_cluster(1, 2));
  auto cl = g.clusters();
  REQUIRE(cl.size() == 2);
  CHECK(cl[0] == std::vector<int>{1, 3});
  CHECK(cl[1] == std::vector<int>{2, 4});
  CHECK(g.cluster_sizes() == std::vector<int>{2, 2});
}

TEST_CASE("reduct drops the last element and keeps canonical form") {
  CHECK(Partition::parse("0,1,0,2").reduct().to_rgs_string() == "0,1,0");
  CHECK_THROWS(Partition::all_in_one(1).reduct());
  SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.below(12));
    Partition g = random_partition(rng, n);
    Partition r = g.reduct();
    CHECK(r.n() == n - 1);
    for (int e = 1; e < n; ++e) CHECK(r.label(e) == g.label(e));
  }
}

TEST_CASE("extensions enumerate simple first, then per existing cluster") {
  Partition g = Partition::parse("0,1,0");
  auto exts = g.extensions();
  REQUIRE(exts.size() == 3);  // one simple + one per cluster
  CHECK(exts[0] == Partition::parse("0,1,0,2"));  // new singleton
  CHECK(exts[1] == Partition::parse("0,1,0,0"));  // joins cluster 0
  CHECK(exts[2] == Partition::parse("0,1,0,1"));  // joins cluster 1
  CHECK(exts[0] == g.simple_extension());
  CHECK(exts[1] == g.complex_extension(0));
  CHECK(exts[2] == g.complex_extension(1));
  CHECK_THROWS(g.complex_extension(2));
}

TEST_CASE("every extension reduces back to its base") {
  for (int n = 1; n <= 6; ++n) {
    auto u = enumerate_universe(n, Constraint::full());
    for (const Partition& g : u.members) {
      auto exts = g.extensions();
      REQUIRE(exts.size() == static_cast<size_t>(g.k()) + 1);
      std::set<Partition> distinct(exts.begin(), exts.end());
      CHECK(distinct.size() == exts.size());
      CHECK(exts[0].k() == g.k() + 1);
      for (size_t i = 0; i < exts.size(); ++i) {
        CHECK(exts[i].n() == n + 1);
        CHECK(exts[i].reduct() == g);
        if (i > 0) CHECK(exts[i].k() == g.k());
      }
    }
  }
}

TEST_CASE("extensions of a universe cover the next universe exactly") {
  for (int n = 1; n <= 6; ++n) {
    auto u = enumerate_universe(n, Constraint::full());
    std::set<Partition> exts;
    for (const Partition& g : u.members)
      for (const Partition& e : g.extensions()) exts.insert(e);
    auto u1 = enumerate_universe(n + 1, Constraint::full());
    CHECK(exts == std::set<Partition>(u1.members.begin(), u1.members.end()));
  }
}

TEST_CASE("pth_reduct iterates reduct") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 3 + static_cast<int>(rng.below(10));
    Partition g = random_partition(rng, n);
    CHECK(g.pth_reduct(0) == g);
    Partition it = g;
    for (int p = 1; p < n; ++p) {
      it = it.reduct();
      CHECK(g.pth_reduct(p) == it);
    }
    CHECK_THROWS(g.pth_reduct(n));
    CHECK_THROWS(g.pth_reduct(-1));
  }
}

TEST_CASE("relabel shifts elements cyclically") {
  CHECK(Partition::parse("0,0,0,1").relabel() == Partition::parse("0,1,1,1"));
  CHECK(Partition::parse("0,1,1,2").relabel() == Partition::parse("0,1,2,2"));
  CHECK(Partition::total_separation(5).relabel() == Partition::total_separation(5));
  CHECK(Partition::all_in_one(5).relabel() == Partition::all_in_one(5));
}

TEST_CASE("relabel preserves cluster sizes and has order dividing n") {
  for (int n = 1; n <= 6; ++n) {
    auto u = enumerate_universe(n, Constraint::full());
    for (const Partition& g : u.members) {
      Partition r = g.relabel();
      auto a = g.cluster_sizes();
      auto b = r.cluster_sizes();
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);
      Partition it = g;
      for (int i = 0; i < n; ++i) it = it.relabel();
      CHECK(it == g);
    }
  }
}

TEST_CASE("co-membership bit layout") {
  // Pair (i, j) with i < j sits at bit (j-1)(j-2)/2 + (i-1).
  CHECK(CoMembershipVector::pair_index(1, 2) == 0);
  CHECK(CoMembershipVector::pair_index(1, 3) == 1);
  CHECK(CoMembershipVector::pair_index(2, 3) == 2);
  CHECK(CoMembershipVector::pair_index(1, 4) == 3);
  CHECK(CoMembershipVector::pair_index(3, 4) == 5);

  Partition g = Partition::parse("{ {1, 3} {2} }");
  CoMembershipVector v = co_membership(g);
  CHECK(v.n == 3);
  REQUIRE(v.bits.size() == 3);
  CHECK(v.bits[0] == 0);  // (1,2)
  CHECK(v.bits[1] == 1);  // (1,3)
  CHECK(v.bits[2] == 0);  // (2,3)
}

TEST_CASE("co-membership decodes back to the partition") {
  for (int n = 1; n <= 6; ++n) {
    auto u = enumerate_universe(n, Constraint::full());
    for (const Partition& g : u.members) CHECK(decode_co_membership(co_membership(g)) == g);
  }
}

TEST_CASE("decode rejects intransitive co-membership") {
  CoMembershipVector v;
  v.n = 3;
  v.bits = {1, 0, 1};  // 1~2 and 2~3 but not 1~3
  CHECK_THROWS(decode_co_membership(v));
}

TEST_CASE("signature packs the same bits") {
  SplitMix64 rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.below(15));
    Partition g = random_partition(rng, n);
    CoMembershipVector v = co_membership(g);
    uint128 sig = co_signature(g);
    for (size_t i = 0; i < v.bits.size(); ++i)
      CHECK(((sig >> i) & 1) == static_cast<uint128>(v.bits[i]));
    CHECK((sig >> v.bits.size()) == 0);
  }
}

TEST_CASE("pair_count is n choose 2") {
  CHECK(pair_count(2) == 1);
  CHECK(pair_count(8) == 28);
  CHECK(pair_count(100) == 4950);
}

TEST_CASE("universe order is strictly increasing") {
  for (int n = 1; n <= 6; ++n) {
    auto u = enumerate_universe(n, Constraint::full());
    for (size_t i = 0; i + 1 < u.size(); ++i) CHECK(u.members[i] < u.members[i + 1]);
  }
}
