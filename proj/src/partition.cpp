#include "pcons/partition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <unordered_map>

namespace pcons {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

Partition Partition::from_rgs(std::vector<uint8_t> rgs) {
  if (rgs.empty()) bad("partition over an empty ground set");
  if (rgs[0] != 0) bad("restricted growth string must start with label 0");
  int max_label = 0;
  for (size_t i = 1; i < rgs.size(); ++i) {
    if (rgs[i] > max_label + 1)
      bad("label " + std::to_string(rgs[i]) + " at position " + std::to_string(i + 1) +
          " skips a label; not a restricted growth string");
    max_label = std::max(max_label, static_cast<int>(rgs[i]));
  }
  Partition g;
  g.rgs_ = std::move(rgs);
  return g;
}

Partition Partition::canonicalize(const std::vector<int>& labels) {
  if (labels.empty()) bad("partition over an empty ground set");
  if (labels.size() > 255) bad("ground set too large (max 255 elements)");
  std::unordered_map<int, uint8_t> remap;
  std::vector<uint8_t> rgs;
  rgs.reserve(labels.size());
  for (int lab : labels) {
    auto it = remap.find(lab);
    if (it == remap.end()) it = remap.emplace(lab, static_cast<uint8_t>(remap.size())).first;
    rgs.push_back(it->second);
  }
  Partition g;
  g.rgs_ = std::move(rgs);
  return g;
}

int Partition::k() const {
  int max_label = 0;
  for (uint8_t l : rgs_) max_label = std::max(max_label, static_cast<int>(l));
  return max_label + 1;
}

std::vector<std::vector<int>> Partition::clusters() const {
  std::vector<std::vector<int>> out(k());
  for (int e = 1; e <= n(); ++e) out[rgs_[e - 1]].push_back(e);
  return out;
}

std::vector<int> Partition::cluster_sizes() const {
  std::vector<int> out(k(), 0);
  for (uint8_t l : rgs_) ++out[l];
  return out;
}

Partition Partition::reduct() const {
  if (n() < 2) bad("reduct undefined for a single-element ground set");
  Partition g;
  g.rgs_.assign(rgs_.begin(), rgs_.end() - 1);
  return g;
}

Partition Partition::pth_reduct(int p) const {
  if (p < 0 || p > n() - 1)
    bad("pth_reduct order must be between 0 and n-1, got " + std::to_string(p));
  Partition g = *this;
  for (int i = 0; i < p; ++i) g = g.reduct();
  return g;
}

Partition Partition::simple_extension() const {
  Partition g = *this;
  g.rgs_.push_back(static_cast<uint8_t>(k()));
  return g;
}

Partition Partition::complex_extension(int cluster_label) const {
  if (cluster_label < 0 || cluster_label >= k())
    bad("complex_extension cluster label out of range: " + std::to_string(cluster_label));
  Partition g = *this;
  g.rgs_.push_back(static_cast<uint8_t>(cluster_label));
  return g;
}

std::vector<Partition> Partition::extensions() const {
  std::vector<Partition> out;
  out.reserve(k() + 1);
  out.push_back(simple_extension());
  for (int l = 0; l < k(); ++l) out.push_back(complex_extension(l));
  return out;
}

Partition Partition::relabel() const {
  std::vector<int> labels(n());
  for (int e = 1; e <= n(); ++e) {
    int shifted = e % n() + 1;  // 1 -> 2, ..., n -> 1
    labels[shifted - 1] = rgs_[e - 1];
  }
  return canonicalize(labels);
}

Partition Partition::total_separation(int n) {
  if (n < 1) bad("partition over an empty ground set");
  if (n > 255) bad("ground set too large (max 255 elements)");
  std::vector<uint8_t> rgs(n);
  for (int i = 0; i < n; ++i) rgs[i] = static_cast<uint8_t>(i);
  return from_rgs(std::move(rgs));
}

Partition Partition::all_in_one(int n) {
  if (n < 1) bad("partition over an empty ground set");
  if (n > 255) bad("ground set too large (max 255 elements)");
  return from_rgs(std::vector<uint8_t>(n, 0));
}

namespace {

// Brace form: "{ {1, 3} {2} }". Elements are 1-based and must cover 1..n.
Partition parse_braces(std::string_view text) {
  std::vector<std::vector<int>> groups;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
      ++i;
  };
  skip_ws();
  if (i >= text.size() || text[i] != '{') bad("expected '{' at start of partition");
  ++i;
  skip_ws();
  while (i < text.size() && text[i] == '{') {
    ++i;
    std::vector<int> group;
    skip_ws();
    while (i < text.size() && text[i] != '}') {
      int value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
      if (ec != std::errc()) bad("expected an element number in cluster");
      i = static_cast<size_t>(ptr - text.data());
      group.push_back(value);
      skip_ws();
    }
    if (i >= text.size()) bad("unterminated cluster, missing '}'");
    ++i;  // consume '}'
    if (group.empty()) bad("empty cluster in partition");
    groups.push_back(std::move(group));
    skip_ws();
  }
  if (i >= text.size() || text[i] != '}') bad("expected closing '}' of partition");
  ++i;
  skip_ws();
  if (i != text.size()) bad("trailing characters after partition");
  if (groups.empty()) bad("partition over an empty ground set");

  size_t n = 0;
  for (const auto& g : groups) n += g.size();
  if (n > 255) bad("ground set too large (max 255 elements)");
  std::vector<int> labels(n, -1);
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    for (int e : groups[gi]) {
      if (e < 1 || static_cast<size_t>(e) > n)
        bad("element " + std::to_string(e) + " outside 1.." + std::to_string(n));
      if (labels[e - 1] != -1) bad("element " + std::to_string(e) + " listed twice");
      labels[e - 1] = static_cast<int>(gi);
    }
  }
  return Partition::canonicalize(labels);
}

// Label form: "0,1,0". Arbitrary integer labels are accepted and
// canonicalized by first appearance, so "1,0,1" names the same partition.
Partition parse_labels(std::string_view text) {
  std::vector<int> labels;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc()) bad("expected a cluster label at position " + std::to_string(i));
    i = static_cast<size_t>(ptr - text.data());
    labels.push_back(value);
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size()) {
      if (text[i] != ',') bad("expected ',' between labels");
      ++i;
    }
  }
  if (labels.empty()) bad("partition over an empty ground set");
  return Partition::canonicalize(labels);
}

}  // namespace

Partition Partition::parse(std::string_view text) {
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) bad("empty partition text");
  if (text[first] == '{') return parse_braces(text);
  return parse_labels(text);
}

std::string Partition::to_brace_string() const {
  std::string out = "{ ";
  for (const auto& cluster : clusters()) {
    out += "{";
    for (size_t i = 0; i < cluster.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(cluster[i]);
    }
    out += "} ";
  }
  out += "}";
  return out;
}

std::string Partition::to_rgs_string() const {
  std::string out;
  for (size_t i = 0; i < rgs_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(rgs_[i]);
  }
  return out;
}

CoMembershipVector co_membership(const Partition& g) {
  CoMembershipVector v;
  v.n = g.n();
  v.bits.assign(static_cast<size_t>(pair_count(v.n)), 0);
  for (int j = 2; j <= v.n; ++j)
    for (int i = 1; i < j; ++i)
      if (g.same_cluster(i, j)) v.bits[CoMembershipVector::pair_index(i, j)] = 1;
  return v;
}

Partition decode_co_membership(const CoMembershipVector& v) {
  if (v.n < 1) bad("co-membership vector over an empty ground set");
  if (v.bits.size() != static_cast<size_t>(pair_count(v.n)))
    bad("co-membership vector has wrong length");
  std::vector<int> labels(v.n, -1);
  int next_label = 0;
  for (int j = 1; j <= v.n; ++j) {
    for (int i = 1; i < j; ++i) {
      if (v.bits[CoMembershipVector::pair_index(i, j)]) {
        labels[j - 1] = labels[i - 1];
        break;
      }
    }
    if (labels[j - 1] == -1) labels[j - 1] = next_label++;
  }
  for (int j = 2; j <= v.n; ++j)
    for (int i = 1; i < j; ++i) {
      bool want = v.bits[CoMembershipVector::pair_index(i, j)] != 0;
      if (want != (labels[i - 1] == labels[j - 1]))
        bad("co-membership vector is not transitively consistent");
    }
  return Partition::canonicalize(labels);
}

uint128 co_signature(const Partition& g) {
  if (g.n() > 16) bad("co_signature requires n <= 16");
  uint128 sig = 0;
  for (int j = 2; j <= g.n(); ++j)
    for (int i = 1; i < j; ++i)
      if (g.same_cluster(i, j))
        sig |= static_cast<uint128>(1) << CoMembershipVector::pair_index(i, j);
  return sig;
}

int128 pair_count(int n) { return static_cast<int128>(n) * (n - 1) / 2; }

}  // namespace pcons
