#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "onerel/lattice.hpp"

using namespace onerel;

namespace {

// The two rank-3 words from the worked repair example: a bad relator and
// the same relator with a commutator inserted after letter 12.
const char* kBadWord = "cBacaCBcacABaaBc";
const char* kFixedWord = "cBacaCBcacABBcbCaaBc";

// Oracle: exponent vector by direct letter counting.
std::vector<long long> exponent_vector(const CyclicWord& w) {
  std::vector<long long> m(w.rank(), 0);
  for (const Letter& l : w.letters()) m[l.gen - 1] += l.sign;
  return m;
}

// Enumerate cyclically reduced rank-2 words of exact length.
void enum_cyclic(int len, std::vector<Letter>& cur, const auto& visit) {
  if (static_cast<int>(cur.size()) == len) {
    if (len < 2 || !(cur.front() == cur.back().inverse())) visit(cur);
    return;
  }
  for (int c = 0; c < 4; ++c) {
    Letter l = Letter::from_code(c);
    if (!cur.empty() && cur.back() == l.inverse()) continue;
    cur.push_back(l);
    enum_cyclic(len, cur, visit);
    cur.pop_back();
  }
}

}  // namespace

TEST_CASE("walks") {
  LatticeWalk w = walk_of(CyclicWord::parse("ab", 2));
  REQUIRE(w.points.size() == 3);
  CHECK(w.points[0] == std::vector<long long>{0, 0});
  CHECK(w.points[1] == std::vector<long long>{1, 0});
  CHECK(w.points[2] == std::vector<long long>{1, 1});

  const CyclicWord bad = CyclicWord::parse(kBadWord, 3);
  LatticeWalk bw = walk_of(bad);
  CHECK(bw.points.size() == 17);  // 16 steps
  CHECK(bw.endpoint() == exponent_vector(bad));
  // frozen from the letter-count oracle; the walk has c-sum +4
  CHECK(bw.endpoint() == std::vector<long long>{4, -4, 4});
}

TEST_CASE("magnus index streams") {
  using P = std::pair<int, long>;
  auto idx = magnus_indices(Word::parse("abABabABABa", 2), 1, 2);
  CHECK(idx == std::vector<P>{{1, 1}, {-1, 0}, {1, 1}, {-1, 0}, {-1, -1}});

  idx = magnus_indices(Word::parse("baBAA", 2), 2, 1);
  CHECK(idx == std::vector<P>{{1, 1}, {-1, 0}, {-1, 0}});

  idx = magnus_indices(Word::parse("b", 2), 1, 2);
  CHECK(idx == std::vector<P>{{1, 0}});

  CHECK_THROWS_AS(magnus_indices(Word::parse("ab", 2), 1, 1), usage_error);
}

TEST_CASE("brown on rank 2") {
  SUBCASE("worked relator is ascending on the min side via an edge") {
    BrownVerdict v = brown_k2(CyclicWord::parse("abABabABABa", 2));
    CHECK(v.status == BrownStatus::AscendingHNN);
    CHECK(v.min_side);
    CHECK(v.witness_edge);
  }
  SUBCASE("solvable Baumslag-Solitar relator is ascending") {
    BrownVerdict v = brown_k2(CyclicWord::parse("baBAA", 2));
    CHECK(v.status == BrownStatus::AscendingHNN);
  }
  SUBCASE("BS(2,3) relator is not ascending") {
    BrownVerdict v = brown_k2(CyclicWord::parse("baaBAAA", 2));
    CHECK(v.status == BrownStatus::NotAscending);
  }
  SUBCASE("zero exponent vector is inapplicable") {
    CHECK(brown_k2(CyclicWord::parse("abAB", 2)).status == BrownStatus::Inapplicable);
    CHECK(brown_k2(CyclicWord::parse("1", 2)).status == BrownStatus::Inapplicable);
  }
  SUBCASE("single letters and proper powers") {
    CHECK(brown_k2(CyclicWord::parse("a", 2)).status == BrownStatus::AscendingHNN);
    CHECK(brown_k2(CyclicWord::parse("aa", 2)).status == BrownStatus::NotAscending);
    CHECK(brown_k2(CyclicWord::parse("aaa", 2)).status == BrownStatus::NotAscending);
  }
}

TEST_CASE("brown verdict dispatch by rank") {
  CHECK(brown_verdict(CyclicWord::parse("a", 1)).status == BrownStatus::Inapplicable);
  CHECK(brown_verdict(CyclicWord::parse("abc", 3)).status == BrownStatus::NeverByRank);
  CHECK(brown_verdict(CyclicWord::parse("baBAA", 2)).status == BrownStatus::AscendingHNN);
}

TEST_CASE("zero-t-sum words: vertex-or-edge criterion equals the unique-extreme-index test") {
  // Exhaustive over cyclically reduced rank-2 words of length <= 8 with zero
  // a-sum and nonzero b-sum. Also record how the collapsed-visit reading
  // differs: it can only be more permissive, and only when an extreme level
  // carries a run of three or more walk vertices.
  long checked = 0, divergent = 0;
  for (int len = 1; len <= 8; ++len) {
    std::vector<Letter> cur;
    enum_cyclic(len, cur, [&](const std::vector<Letter>& ls) {
      Word w(2, ls);
      if (w.size() != ls.size()) return;  // not freely reduced
      if (exponent_sum(w, 1) != 0 || exponent_sum(w, 2) == 0) return;
      const CyclicWord r(w);
      ++checked;

      auto idx = magnus_indices(r.word(), 1, 2);
      REQUIRE(!idx.empty());
      long mn = idx[0].second, mx = idx[0].second;
      for (auto& [s, i] : idx) {
        mn = std::min(mn, i);
        mx = std::max(mx, i);
      }
      int at_min = 0, at_max = 0;
      for (auto& [s, i] : idx) {
        at_min += i == mn;
        at_max += i == mx;
      }
      const bool magnus_ok = at_min == 1 || at_max == 1;
      const bool brown_ok = brown_k2(r).status == BrownStatus::AscendingHNN;
      CAPTURE(r.str());
      CHECK(brown_ok == magnus_ok);

      const BridgeVisits bv = bridge_visits(r);
      const bool bridge_ok = bv.min_visits == 1 || bv.max_visits == 1;
      if (brown_ok) CHECK(bridge_ok);  // collapsing can only relax the test
      if (bridge_ok != brown_ok) ++divergent;
    });
  }
  CHECK(checked > 500);
  MESSAGE("zero-sum words checked: ", checked, ", collapsed-visit divergences: ", divergent);
  CHECK(divergent > 0);  // the two readings genuinely differ on runs
}

TEST_CASE("hull analysis on the worked bad/repaired pair") {
  const CyclicWord bad = CyclicWord::parse(kBadWord, 3);
  HullAnalysis h = hull_analysis(bad);
  CHECK(h.m == Vec3{4, -4, 4});
  CHECK(h.hull.size() == 5);
  // Hand-checked: projection kills the direction (1,-1,1), so walk vertices
  // 1,4,11 coincide at one hull vertex and 6,9,14 at another; the visit
  // multiset is {2,2,2,3,3} and in particular nothing is visited once.
  std::multiset<int> mult(h.multiplicities.begin(), h.multiplicities.end());
  CHECK(mult == std::multiset<int>{2, 2, 2, 3, 3});
  for (int m : h.multiplicities) CHECK(m >= 2);
  CHECK(!h.good);
  CHECK(h.single_visit_index == -1);
  CHECK_FALSE(is_good(bad));

  const CyclicWord fixed = CyclicWord::parse(kFixedWord, 3);
  CHECK(fixed.size() == 20);
  CHECK(is_good(fixed));
}

TEST_CASE("hull analysis degenerate shapes") {
  // all projections coincide: single hull vertex, one collapsed visit
  HullAnalysis h = hull_analysis(CyclicWord::parse("aaa", 3));
  CHECK(h.hull.size() == 1);
  CHECK(h.multiplicities == std::vector<int>{1});
  CHECK(h.good);

  CHECK_THROWS_AS(hull_analysis(CyclicWord::parse("abcABC", 3)), domain_error);
  CHECK_THROWS_AS(hull_analysis(CyclicWord::parse("ab", 2)), usage_error);

  HullAnalysis tri = hull_analysis(CyclicWord::parse("abc", 3));
  CHECK(tri.hull.size() == tri.multiplicities.size());
  CHECK(is_good(CyclicWord::parse("abc", 3)));
}

TEST_CASE("make_good repairs the worked bad word") {
  const CyclicWord bad = CyclicWord::parse(kBadWord, 3);
  const CyclicWord fixed = make_good(bad);
  CHECK(fixed.size() == 20);
  CHECK(is_good(fixed));
  CHECK(exponent_vector(fixed) == exponent_vector(bad));  // net-zero insertion
}

TEST_CASE("make_good on sampled bad words: +4 letters, good, injective") {
  Sampler s(3, 30);
  Rng rng(2718281828);
  std::set<std::string> inputs, outputs;
  int found = 0;
  while (found < 200) {
    CyclicWord r = s.cyclic_exact(30, rng);
    std::vector<long long> m = exponent_vector(r);
    if (m == std::vector<long long>{0, 0, 0}) continue;
    if (is_good(r)) continue;
    if (!inputs.insert(r.str()).second) continue;
    ++found;
    const CyclicWord g = make_good(r);
    CHECK(g.size() == 34);
    CHECK(is_good(g));
    outputs.insert(g.str());
  }
  CHECK(outputs.size() == inputs.size());
}

TEST_CASE("goodness rank guard") {
  CHECK_THROWS_AS(is_good(CyclicWord::parse("a", 1)), usage_error);
  CHECK_THROWS_AS(is_good(CyclicWord::parse("abAB", 2)), domain_error);
}
