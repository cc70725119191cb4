#include "onerel/lattice.hpp"

#include <algorithm>
#include <map>

namespace onerel {

namespace {

long long dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

using Plane = std::pair<long long, long long>;

__int128 cross(const Plane& o, const Plane& a, const Plane& b) {
  return static_cast<__int128>(a.first - o.first) * (b.second - o.second) -
         static_cast<__int128>(a.second - o.second) * (b.first - o.first);
}

// Strict convex hull (no collinear vertices), counterclockwise, via the
// monotone chain. Input need not be deduplicated.
std::vector<Plane> convex_hull(std::vector<Plane> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Plane> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Maximal cyclic runs of equal values as (start, length) pairs, enumerated
// in walk order beginning at the first run boundary at or after time 0.
// A single pair covering everything means all values are equal.
template <class T>
std::vector<std::pair<long, long>> cyclic_runs(const std::vector<T>& q) {
  const long L = static_cast<long>(q.size());
  long first = -1;
  for (long t = 0; t < L; ++t)
    if (q[t] != q[(t + L - 1) % L]) {
      first = t;
      break;
    }
  if (first < 0) return {{0, L}};
  std::vector<std::pair<long, long>> runs;
  long s = first;
  long len = 1;
  for (long i = 1; i < L; ++i) {
    const long t = (first + i) % L;
    if (q[t] == q[s]) {
      ++len;
    } else {
      runs.emplace_back(s, len);
      s = t;
      len = 1;
    }
  }
  runs.emplace_back(s, len);
  return runs;
}

template <class T>
int collapsed_visits(const std::vector<T>& q, const T& value) {
  int n = 0;
  for (const auto& [s, len] : cyclic_runs(q))
    if (q[s] == value) ++n;
  return n;
}

}  // namespace

LatticeWalk walk_of(const CyclicWord& r) {
  LatticeWalk w;
  w.rank = r.rank();
  std::vector<long long> cur(w.rank, 0);
  w.points.reserve(r.size() + 1);
  w.points.push_back(cur);
  for (const Letter& l : r.letters()) {
    cur[l.gen - 1] += l.sign;
    w.points.push_back(cur);
  }
  return w;
}

std::vector<std::pair<int, long>> magnus_indices(const Word& w, int t_gen, int x_gen) {
  if (t_gen == x_gen) throw usage_error("magnus_indices: t and x must differ");
  std::vector<std::pair<int, long>> out;
  long prefix = 0;
  for (const Letter& l : w.letters()) {
    if (l.gen == x_gen) out.emplace_back(l.sign, prefix);
    if (l.gen == t_gen) prefix += l.sign;
  }
  return out;
}

std::string to_string(BrownStatus s) {
  switch (s) {
    case BrownStatus::AscendingHNN: return "AscendingHNN";
    case BrownStatus::NotAscending: return "NotAscending";
    case BrownStatus::NeverByRank: return "NeverByRank";
    case BrownStatus::Inapplicable: return "Inapplicable";
  }
  return "?";
}

namespace {

// projections v_t = n . P_t with n = (-M_y, M_x), times 0..L-1
std::vector<long long> k2_projections(const CyclicWord& r, long long& mx, long long& my) {
  mx = exponent_sum(r, 1);
  my = exponent_sum(r, 2);
  std::vector<long long> v;
  v.reserve(r.size());
  long long x = 0, y = 0;
  for (const Letter& l : r.letters()) {
    v.push_back(-my * x + mx * y);
    if (l.gen == 1) x += l.sign;
    else y += l.sign;
  }
  return v;
}

}  // namespace

BrownVerdict brown_k2(const CyclicWord& r) {
  if (r.rank() != 2) throw usage_error("brown_k2: rank-2 relator required");
  BrownVerdict verdict;
  long long mx, my;
  const std::vector<long long> v = k2_projections(r, mx, my);
  const long L = static_cast<long>(v.size());
  if (mx == 0 && my == 0) {
    verdict.status = BrownStatus::Inapplicable;
    verdict.reason = L == 0 ? "empty relator" : "zero exponent vector";
    return verdict;
  }

  auto extremal = [&](bool min_side) {
    long long best = v[0];
    for (long t = 1; t < L; ++t)
      if (min_side ? v[t] < best : v[t] > best) best = v[t];
    std::vector<long> idx;
    for (long t = 0; t < L; ++t)
      if (v[t] == best) idx.push_back(t);
    return idx;
  };

  auto try_side = [&](bool min_side) -> bool {
    const std::vector<long> idx = extremal(min_side);
    if (idx.size() == 1) {
      verdict.status = BrownStatus::AscendingHNN;
      verdict.min_side = min_side;
      verdict.witness = idx[0];
      verdict.witness_edge = false;
      return true;
    }
    if (idx.size() == 2 && L >= 3) {
      const long i = idx[0], j = idx[1];
      if (j == i + 1) {
        verdict.status = BrownStatus::AscendingHNN;
        verdict.min_side = min_side;
        verdict.witness = i;
        verdict.witness_edge = true;
        return true;
      }
      if (i == 0 && j == L - 1) {
        verdict.status = BrownStatus::AscendingHNN;
        verdict.min_side = min_side;
        verdict.witness = L - 1;  // the wrapping edge
        verdict.witness_edge = true;
        return true;
      }
    }
    return false;
  };

  if (try_side(true) || try_side(false)) return verdict;
  verdict.status = BrownStatus::NotAscending;
  verdict.reason = "both support lines meet the walk in more than a vertex or an edge";
  return verdict;
}

BrownVerdict brown_verdict(const CyclicWord& r) {
  if (r.rank() == 2) return brown_k2(r);
  BrownVerdict v;
  if (r.rank() <= 1) {
    v.status = BrownStatus::Inapplicable;
    v.reason = "criterion needs two generators";
  } else {
    v.status = BrownStatus::NeverByRank;
    v.reason = "relators on three or more generators never give ascending extensions";
  }
  return v;
}

BridgeVisits bridge_visits(const CyclicWord& r) {
  if (r.rank() != 2) throw usage_error("bridge_visits: rank-2 relator required");
  long long mx, my;
  const std::vector<long long> v = k2_projections(r, mx, my);
  if (v.empty() || (mx == 0 && my == 0))
    throw domain_error("bridge_visits: zero exponent vector");
  const long long mn = *std::min_element(v.begin(), v.end());
  const long long mx_val = *std::max_element(v.begin(), v.end());
  BridgeVisits b;
  b.min_visits = collapsed_visits(v, mn);
  b.max_visits = collapsed_visits(v, mx_val);
  return b;
}

namespace {

constexpr long kHullLengthLimit = 10000;  // keeps plane coords within int64

struct Projected {
  Vec3 m;
  std::vector<Vec3> q;        // scaled projections per time 0..L-1
  std::vector<Plane> plane;   // the same points in basis coordinates
};

Projected project3(const CyclicWord& r) {
  if (r.rank() != 3) throw usage_error("hull analysis: rank-3 relator required");
  const long L = static_cast<long>(r.size());
  if (L > kHullLengthLimit)
    throw usage_error("hull analysis: relator longer than the exact-arithmetic limit");
  Projected pr;
  pr.m = {exponent_sum(r, 1), exponent_sum(r, 2), exponent_sum(r, 3)};
  const Vec3& m = pr.m;
  if (m[0] == 0 && m[1] == 0 && m[2] == 0)
    throw domain_error("hull analysis: zero exponent vector");
  const long long m2 = dot3(m, m);

  // two independent integer vectors spanning the plane orthogonal to m
  Vec3 u{}, v{};
  const Vec3 c1{-m[1], m[0], 0}, c2{-m[2], 0, m[0]}, c3{0, -m[2], m[1]};
  if (m[0] != 0) {
    u = c1;
    v = c2;
  } else if (m[1] != 0) {
    u = c1;
    v = c3;
  } else {
    u = c2;
    v = c3;
  }

  Vec3 p{0, 0, 0};
  pr.q.reserve(L);
  pr.plane.reserve(L);
  for (const Letter& l : r.letters()) {
    const long long pm = dot3(p, m);
    const Vec3 proj{m2 * p[0] - pm * m[0], m2 * p[1] - pm * m[1], m2 * p[2] - pm * m[2]};
    pr.q.push_back(proj);
    pr.plane.emplace_back(dot3(proj, u), dot3(proj, v));
    p[l.gen - 1] += l.sign;
  }
  return pr;
}

}  // namespace

HullAnalysis hull_analysis(const CyclicWord& r) {
  const Projected pr = project3(r);
  HullAnalysis h;
  h.m = pr.m;

  const std::vector<Plane> hull = convex_hull(pr.plane);
  std::map<Plane, Vec3> back;
  for (std::size_t t = 0; t < pr.plane.size(); ++t) back.emplace(pr.plane[t], pr.q[t]);
  std::map<Plane, int> visits;
  for (const auto& [s, len] : cyclic_runs(pr.plane)) visits[pr.plane[s]] += 1;

  for (std::size_t i = 0; i < hull.size(); ++i) {
    h.hull.push_back(back.at(hull[i]));
    const int mult = visits.at(hull[i]);
    h.multiplicities.push_back(mult);
    if (mult == 1 && h.single_visit_index < 0) h.single_visit_index = static_cast<long long>(i);
  }
  h.good = h.single_visit_index >= 0;
  return h;
}

bool is_good(const CyclicWord& r) {
  if (r.rank() == 2) {
    const BrownVerdict v = brown_k2(r);
    if (v.status == BrownStatus::Inapplicable)
      throw domain_error("goodness undefined: " + v.reason);
    return v.status == BrownStatus::AscendingHNN;
  }
  if (r.rank() == 3) return hull_analysis(r).good;
  throw usage_error("goodness is defined for rank 2 and 3 only");
}

CyclicWord make_good(const CyclicWord& r, const Vec3& hull_vertex) {
  const Projected pr = project3(r);
  const long L = static_cast<long>(r.size());

  std::vector<std::pair<long, long>> visit_runs;
  for (const auto& [s, len] : cyclic_runs(pr.q))
    if (pr.q[s] == hull_vertex) visit_runs.emplace_back(s, len);
  if (visit_runs.empty()) throw domain_error("make_good: not a vertex of this walk");
  if (visit_runs.size() < 2)
    throw domain_error("make_good: vertex is visited only once, nothing to repair");

  // insert right after the second visit, i.e. before the letter that leaves it
  const auto [s2, len2] = visit_runs[1];
  const long pos = (s2 + len2 - 1 + 1) % L;  // end time + 1 == letter index
  const std::vector<Letter>& ls = r.letters();
  const Letter prev = ls[(pos - 1 + L) % L];
  const Letter next = ls[pos];

  for (int uc = 0; uc < 2 * r.rank(); ++uc) {
    const Letter u = Letter::from_code(uc);
    for (int wc = 0; wc < 2 * r.rank(); ++wc) {
      const Letter w = Letter::from_code(wc);
      if (w == u || w == u.inverse()) continue;
      if (u == prev.inverse()) continue;   // would cancel at the left seam
      if (next == w) continue;             // w^-1 then w would cancel at the right seam
      std::vector<Letter> cand(ls.begin(), ls.begin() + pos);
      cand.insert(cand.end(), {u, w, u.inverse(), w.inverse()});
      cand.insert(cand.end(), ls.begin() + pos, ls.end());
      const CyclicWord fixed(Word(r.rank(), std::move(cand)));
      if (fixed.size() != r.size() + 4) continue;  // unexpected cancellation
      try {
        if (is_good(fixed)) return fixed;
      } catch (const domain_error&) {
      }
    }
  }
  throw domain_error("make_good: no commutator insertion makes this word good");
}

CyclicWord make_good(const CyclicWord& r) {
  const HullAnalysis h = hull_analysis(r);
  for (std::size_t i = 0; i < h.hull.size(); ++i)
    if (h.multiplicities[i] >= 2) return make_good(r, h.hull[i]);
  throw domain_error("make_good: every hull vertex is already visited once");
}

}  // namespace onerel
