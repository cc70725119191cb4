#include "onerel/matdyn.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>
#include <utility>

namespace onerel {

namespace {

using u128 = unsigned __int128;

std::uint64_t addm(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
  return (u128(x) + y) % m;
}

std::uint64_t mulm(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
  return (u128(x) * y) % m;
}

// x^-1 mod m via extended Euclid; 0 when gcd(x, m) != 1.
std::uint64_t invm(std::uint64_t x, std::uint64_t m) {
  __int128 r0 = m, r1 = x % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    s0 -= q * s1;
    std::swap(s0, s1);
  }
  if (r0 != 1) return 0;
  s0 %= static_cast<__int128>(m);
  if (s0 < 0) s0 += m;
  return static_cast<std::uint64_t>(s0);
}

void check_modulus(std::uint64_t m) {
  if (m < 2) throw usage_error("modulus must be at least 2");
}

std::uint64_t residue_of(const BigInt& v, std::uint64_t m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return r.convert_to<std::uint64_t>();
}

}  // namespace

IntMat2 IntMat2::operator*(const IntMat2& rhs) const {
  return IntMat2{a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                 c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
}

IntMat2 IntMat2::inverse() const {
  const BigInt dd = det();
  if (dd == 1) return adjugate();
  if (dd == -1) {
    IntMat2 adj = adjugate();
    return IntMat2{-adj.a, -adj.b, -adj.c, -adj.d};
  }
  throw domain_error("integer matrix inverse needs determinant +1 or -1, got " + dd.str());
}

std::string IntMat2::str() const {
  return "[[" + a.str() + "," + b.str() + "],[" + c.str() + "," + d.str() + "]]";
}

ResidueMatrix ResidueMatrix::identity(std::uint64_t m) {
  check_modulus(m);
  return ResidueMatrix{m, {1 % m, 0, 0, 1 % m}};
}

ResidueMatrix ResidueMatrix::reduce(const IntMat2& a, std::uint64_t m) {
  check_modulus(m);
  return ResidueMatrix{
      m, {residue_of(a.a, m), residue_of(a.b, m), residue_of(a.c, m), residue_of(a.d, m)}};
}

ResidueMatrix ResidueMatrix::operator*(const ResidueMatrix& rhs) const {
  if (m != rhs.m) throw usage_error("matrix product across different moduli");
  const auto& f = rhs.e;
  return ResidueMatrix{m,
                       {addm(mulm(e[0], f[0], m), mulm(e[1], f[2], m), m),
                        addm(mulm(e[0], f[1], m), mulm(e[1], f[3], m), m),
                        addm(mulm(e[2], f[0], m), mulm(e[3], f[2], m), m),
                        addm(mulm(e[2], f[1], m), mulm(e[3], f[3], m), m)}};
}

std::uint64_t ResidueMatrix::det() const {
  const std::uint64_t ad = mulm(e[0], e[3], m), bc = mulm(e[1], e[2], m);
  return (ad + m - bc) % m;
}

ResidueMatrix ResidueMatrix::adjugate() const {
  return ResidueMatrix{m, {e[3], (m - e[1]) % m, (m - e[2]) % m, e[0]}};
}

ResidueMatrix ResidueMatrix::inverse() const {
  const std::uint64_t di = invm(det(), m);
  if (di == 0)
    throw domain_error("determinant " + std::to_string(det()) + " is not a unit mod " +
                       std::to_string(m));
  ResidueMatrix adj = adjugate();
  for (auto& x : adj.e) x = mulm(x, di, m);
  return adj;
}

bool ResidueMatrix::is_identity() const { return *this == identity(m); }

std::string ResidueMatrix::str() const {
  return "[[" + std::to_string(e[0]) + "," + std::to_string(e[1]) + "],[" +
         std::to_string(e[2]) + "," + std::to_string(e[3]) + "]]";
}

std::string MatTuple::str() const {
  std::string out = "mod " + std::to_string(m) + ": ";
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (i) out += ", ";
    out += mats[i].str();
  }
  return out;
}

std::size_t MatTupleHash::operator()(const MatTuple& t) const {
  // splitmix64-style mixing over the modulus and all entries
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ULL;
    return h ^ (h >> 27);
  };
  std::uint64_t h = mix(0x243f6a8885a308d3ULL, t.m);
  for (const ResidueMatrix& x : t.mats)
    for (std::uint64_t v : x.e) h = mix(h, v);
  return static_cast<std::size_t>(h);
}

MatTuple reduce_tuple(const std::vector<IntMat2>& mats, std::uint64_t m) {
  check_modulus(m);
  MatTuple t{m, {}};
  t.mats.reserve(mats.size());
  for (const IntMat2& a : mats) t.mats.push_back(ResidueMatrix::reduce(a, m));
  return t;
}

ResidueMatrix eval_word(const Word& w, const MatTuple& t, bool adjoint) {
  check_modulus(t.m);
  if (w.rank() != static_cast<int>(t.mats.size()))
    throw usage_error("word rank " + std::to_string(w.rank()) + " does not match tuple size " +
                      std::to_string(t.mats.size()));
  ResidueMatrix acc = ResidueMatrix::identity(t.m);
  for (const Letter& l : w.letters()) {
    const ResidueMatrix& g = t.mats[l.gen - 1];
    acc = acc * (l.sign > 0 ? g : adjoint ? g.adjugate() : g.inverse());
  }
  return acc;
}

IntMat2 eval_word_int(const Word& w, const std::vector<IntMat2>& mats) {
  if (w.rank() != static_cast<int>(mats.size()))
    throw usage_error("word rank " + std::to_string(w.rank()) + " does not match tuple size " +
                      std::to_string(mats.size()));
  IntMat2 acc = IntMat2::identity();
  for (const Letter& l : w.letters()) {
    const IntMat2& g = mats[l.gen - 1];
    acc = acc * (l.sign > 0 ? g : g.inverse());
  }
  return acc;
}

MatTuple apply_endo(const HnnData& h, const MatTuple& t, bool adjoint) {
  if (h.base_rank != static_cast<int>(t.mats.size()))
    throw usage_error("endomorphism rank " + std::to_string(h.base_rank) +
                      " does not match tuple size " + std::to_string(t.mats.size()));
  MatTuple out{t.m, {}};
  out.mats.reserve(t.mats.size());
  for (const Word& w : h.phi) out.mats.push_back(eval_word(w, t, adjoint));
  return out;
}

std::vector<IntMat2> sanov_seed(int k) {
  if (k < 1) throw usage_error("seed count must be positive");
  const IntMat2 u{1, 2, 0, 1}, v{1, 0, 2, 1};
  if (k == 2) return {u * v, v * u};
  const IntMat2 uinv = u.inverse();
  std::vector<IntMat2> out;
  IntMat2 left = IntMat2::identity(), right = IntMat2::identity();
  for (int i = 1; i <= k; ++i) {
    left = left * u;
    right = uinv * right;
    out.push_back(left * v * right);
  }
  return out;
}

CycleRecord find_cycle(const HnnData& h, const MatTuple& start, bool adjoint) {
  constexpr std::size_t kStateBudget = 10'000'000;
  std::unordered_map<MatTuple, long, MatTupleHash> seen;
  std::vector<MatTuple> states;
  MatTuple cur = start;
  for (;;) {
    auto it = seen.find(cur);
    if (it != seen.end()) {
      CycleRecord rec;
      rec.tail = it->second;
      rec.period = static_cast<long>(states.size()) - it->second;
      rec.on_cycle = states[static_cast<std::size_t>(it->second)];
      return rec;
    }
    if (states.size() >= kStateBudget) throw domain_error("cycle search exceeded 10^7 states");
    seen.emplace(cur, static_cast<long>(states.size()));
    states.push_back(cur);
    cur = apply_endo(h, cur, adjoint);
  }
}

HenselReport hensel_check(const HnnData& h, const std::vector<IntMat2>& start, long p, int depth,
                          bool adjoint) {
  if (p < 2) throw usage_error("p must be a prime");
  for (long f = 2; f * f <= p; ++f)
    if (p % f == 0) throw usage_error(std::to_string(p) + " is not prime");
  if (depth < 1) throw usage_error("depth must be positive");

  HenselReport rep;
  rep.p = p;
  rep.depth = depth;
  std::uint64_t mod = 1;
  std::uint64_t scale = 1;  // p^(e-1)
  for (int e = 1; e <= depth; ++e) {
    if (mod > UINT64_MAX / static_cast<std::uint64_t>(p))
      throw usage_error("p^depth overflows the modulus range");
    mod *= static_cast<std::uint64_t>(p);
    const CycleRecord rec = find_cycle(h, reduce_tuple(start, mod), adjoint);
    if (e == 1) {
      if (rec.tail != 0)
        throw domain_error("start is not on its cycle modulo " + std::to_string(p));
      rep.base_period = rec.period;
    } else {
      scale *= static_cast<std::uint64_t>(p);
    }
    const bool ok =
        rec.tail == 0 && rec.period == static_cast<long>(scale) * rep.base_period;
    rep.levels.push_back(HenselLevel{mod, rec.tail, rec.period, ok});
  }
  rep.law_holds = std::all_of(rep.levels.begin(), rep.levels.end(),
                              [](const HenselLevel& l) { return l.law_ok; });
  return rep;
}

namespace {

struct FieldSpec {
  int q, m;
  std::vector<int> poly;  // low to high, monic
};

// Fixed primitive polynomials (Conway-style table), one per supported field.
const std::vector<FieldSpec>& field_table() {
  static const std::vector<FieldSpec> table = {
      {2, 1, {1, 1}},          // x + 1
      {2, 2, {1, 1, 1}},       // x^2 + x + 1
      {2, 3, {1, 1, 0, 1}},    // x^3 + x + 1
      {2, 4, {1, 1, 0, 0, 1}}, // x^4 + x + 1
      {3, 1, {1, 1}},          // x + 1
      {3, 2, {2, 2, 1}},       // x^2 + 2x + 2
      {3, 3, {1, 2, 0, 1}},    // x^3 + 2x + 1
      {5, 1, {3, 1}},          // x + 3
      {5, 2, {2, 4, 1}},       // x^2 + 4x + 2
      {5, 3, {3, 3, 0, 1}},    // x^3 + 3x + 3
      {7, 1, {4, 1}},          // x + 4
      {7, 2, {3, 6, 1}},       // x^2 + 6x + 3
      {7, 3, {4, 0, 6, 1}},    // x^3 + 6x^2 + 4
  };
  return table;
}

}  // namespace

Fq::Fq(int q, int m) : q_(q), m_(m) {
  const std::vector<FieldSpec>& table = field_table();
  auto it = std::find_if(table.begin(), table.end(),
                         [&](const FieldSpec& s) { return s.q == q && s.m == m; });
  if (it == table.end())
    throw usage_error("unsupported field F_" + std::to_string(q) + "^" + std::to_string(m) +
                      " (q in {2,3,5,7}, m <= 3, plus q = 2, m = 4)");
  poly_ = it->poly;
  size_ = 1;
  for (int i = 0; i < m_; ++i) size_ *= q_;

  // element index <-> coefficient vector
  auto digits = [&](int x) {
    std::vector<int> c(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      c[static_cast<std::size_t>(i)] = x % q_;
      x /= q_;
    }
    return c;
  };
  auto index = [&](const std::vector<int>& c) {
    int x = 0;
    for (int i = m_; i-- > 0;) x = x * q_ + c[static_cast<std::size_t>(i)];
    return x;
  };

  mul_.assign(static_cast<std::size_t>(size_) * size_, 0);
  for (int x = 0; x < size_; ++x) {
    const std::vector<int> cx = digits(x);
    for (int y = 0; y <= x; ++y) {
      const std::vector<int> cy = digits(y);
      // convolve, then reduce by the monic modulus polynomial
      std::vector<int> prod(static_cast<std::size_t>(2 * m_ - 1), 0);
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
          prod[static_cast<std::size_t>(i + j)] =
              (prod[static_cast<std::size_t>(i + j)] + cx[static_cast<std::size_t>(i)] * cy[static_cast<std::size_t>(j)]) % q_;
      for (int dg = 2 * m_ - 2; dg >= m_; --dg) {
        const int c = prod[static_cast<std::size_t>(dg)];
        if (c == 0) continue;
        prod[static_cast<std::size_t>(dg)] = 0;
        for (int i = 0; i < m_; ++i) {
          int& slot = prod[static_cast<std::size_t>(dg - m_ + i)];
          slot = ((slot - c * poly_[static_cast<std::size_t>(i)]) % q_ + q_) % q_;
        }
      }
      prod.resize(static_cast<std::size_t>(m_));
      const int v = index(prod);
      mul_[static_cast<std::size_t>(x) * size_ + y] = v;
      mul_[static_cast<std::size_t>(y) * size_ + x] = v;
    }
  }

  inv_.assign(static_cast<std::size_t>(size_), 0);
  for (int x = 1; x < size_; ++x) {
    int found = 0;
    for (int y = 1; y < size_; ++y)
      if (mul(x, y) == 1) {
        found = y;
        break;
      }
    if (found == 0) throw domain_error("modulus polynomial is not irreducible");
    inv_[static_cast<std::size_t>(x)] = found;
  }
}

int Fq::add(int x, int y) const {
  int out = 0, pw = 1;
  for (int i = 0; i < m_; ++i) {
    out += ((x % q_ + y % q_) % q_) * pw;
    x /= q_;
    y /= q_;
    pw *= q_;
  }
  return out;
}

int Fq::neg(int x) const {
  int out = 0, pw = 1;
  for (int i = 0; i < m_; ++i) {
    out += ((q_ - x % q_) % q_) * pw;
    x /= q_;
    pw *= q_;
  }
  return out;
}

int Fq::sub(int x, int y) const { return add(x, neg(y)); }

int Fq::inv(int x) const {
  if (x == 0) throw domain_error("field inverse of zero");
  return inv_[static_cast<std::size_t>(x)];
}

int Fq::pow(int x, long e) const {
  if (e < 0) throw usage_error("negative exponent");
  int acc = 1, base = x;
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

int Fq::frob(int x, int s) const {
  if (s < 0) throw usage_error("negative Frobenius power");
  s %= m_;  // Frobenius has order m
  int out = x;
  for (int i = 0; i < s; ++i) out = pow(out, q_);
  return out;
}

std::string Fq::elem_str(int x) const {
  if (x == 0) return "0";
  std::string out;
  int pw = 0;
  while (x > 0) {
    const int c = x % q_;
    x /= q_;
    if (c != 0) {
      std::string term;
      if (pw == 0) term = std::to_string(c);
      else {
        if (c != 1) term = std::to_string(c);
        term += "x";
        if (pw > 1) term += "^" + std::to_string(pw);
      }
      out = out.empty() ? term : term + "+" + out;
    }
    ++pw;
  }
  return out;
}

FqMat2 fq_identity() { return FqMat2{{1, 0, 0, 1}}; }

FqMat2 fq_mul(const Fq& f, const FqMat2& x, const FqMat2& y) {
  return FqMat2{{f.add(f.mul(x.e[0], y.e[0]), f.mul(x.e[1], y.e[2])),
                 f.add(f.mul(x.e[0], y.e[1]), f.mul(x.e[1], y.e[3])),
                 f.add(f.mul(x.e[2], y.e[0]), f.mul(x.e[3], y.e[2])),
                 f.add(f.mul(x.e[2], y.e[1]), f.mul(x.e[3], y.e[3]))}};
}

int fq_det(const Fq& f, const FqMat2& x) {
  return f.sub(f.mul(x.e[0], x.e[3]), f.mul(x.e[1], x.e[2]));
}

FqMat2 fq_adjugate(const Fq& f, const FqMat2& x) {
  return FqMat2{{x.e[3], f.neg(x.e[1]), f.neg(x.e[2]), x.e[0]}};
}

FqMat2 fq_frob(const Fq& f, const FqMat2& x, int s) {
  FqMat2 out = x;
  for (int& v : out.e) v = f.frob(v, s);
  return out;
}

FqMat2 fq_eval_word(const Fq& f, const Word& w, const std::vector<FqMat2>& mats) {
  if (w.rank() != static_cast<int>(mats.size()))
    throw usage_error("word rank " + std::to_string(w.rank()) + " does not match tuple size " +
                      std::to_string(mats.size()));
  FqMat2 acc = fq_identity();
  for (const Letter& l : w.letters()) {
    const FqMat2& g = mats[l.gen - 1];
    acc = fq_mul(f, acc, l.sign > 0 ? g : fq_adjugate(f, g));
  }
  return acc;
}

std::vector<FqMat2> sl2_elements(const Fq& f) {
  const int n = f.size();
  std::vector<FqMat2> out;
  out.reserve(static_cast<std::size_t>(n) * n * n);
  // a != 0: b, c free, d = (1 + bc) / a; a = 0: bc = -1, d free
  for (int a = 1; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        out.push_back(FqMat2{{a, b, c, f.mul(f.add(1, f.mul(b, c)), f.inv(a))}});
  for (int b = 1; b < n; ++b) {
    const int c = f.neg(f.inv(b));
    for (int d = 0; d < n; ++d) out.push_back(FqMat2{{0, b, c, d}});
  }
  std::sort(out.begin(), out.end());
  return out;
}

QuasiFixedResult quasi_fixed_search(const QuasiFixedQuery& query, int k) {
  if (k < 1) throw usage_error("tuple size must be positive");
  if (query.phi.base_rank != k)
    throw usage_error("endomorphism rank " + std::to_string(query.phi.base_rank) +
                      " does not match tuple size " + std::to_string(k));
  if (query.s < 1) throw usage_error("Frobenius power must be positive");
  const Fq field(query.q, query.m);

  std::vector<FqMat2> base;
  if (query.sl2_only) {
    base = sl2_elements(field);
  } else {
    const int n = field.size();
    base.reserve(static_cast<std::size_t>(n) * n * n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) base.push_back(FqMat2{{a, b, c, d}});
  }

  double space = 1.0;
  for (int i = 0; i < k; ++i) space *= static_cast<double>(base.size());
  if (space > 1e8)
    throw usage_error("search space of " + std::to_string(space) + " tuples exceeds the 10^8 guard");

  // Walk all k-tuples with a fixed outer shard per worker; concatenating the
  // shard outputs in order reproduces the single-worker enumeration order.
  auto scan_outer = [&](std::size_t lo, std::size_t hi, std::vector<std::vector<FqMat2>>& found) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    std::vector<FqMat2> tuple(static_cast<std::size_t>(k));
    for (std::size_t outer = lo; outer < hi; ++outer) {
      idx.assign(static_cast<std::size_t>(k), 0);
      idx[0] = outer;
      for (;;) {
        for (int i = 0; i < k; ++i) tuple[static_cast<std::size_t>(i)] = base[idx[static_cast<std::size_t>(i)]];
        bool ok = true;
        for (int j = 0; ok && j < k; ++j) {
          const FqMat2 image = fq_eval_word(field, query.phi.phi[static_cast<std::size_t>(j)], tuple);
          ok = image == fq_frob(field, tuple[static_cast<std::size_t>(j)], query.s);
        }
        if (ok) found.push_back(tuple);
        // advance the inner odometer (positions 1..k-1)
        int pos = k - 1;
        while (pos >= 1) {
          std::size_t& slot = idx[static_cast<std::size_t>(pos)];
          if (++slot < base.size()) break;
          slot = 0;
          --pos;
        }
        if (pos < 1) break;
      }
    }
  };

  const int workers =
      std::max(1, std::min(query.workers, static_cast<int>(base.size())));
  std::vector<std::vector<std::vector<FqMat2>>> shard(static_cast<std::size_t>(workers));
  if (workers == 1) {
    scan_outer(0, base.size(), shard[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (base.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t lo = std::min(base.size(), w * chunk);
      const std::size_t hi = std::min(base.size(), lo + chunk);
      pool.emplace_back(scan_outer, lo, hi, std::ref(shard[static_cast<std::size_t>(w)]));
    }
    for (std::thread& t : pool) t.join();
  }

  QuasiFixedResult out;
  out.q = query.q;
  out.m = query.m;
  out.s = query.s;
  out.sl2_only = query.sl2_only;
  for (auto& part : shard)
    out.tuples.insert(out.tuples.end(), part.begin(), part.end());
  return out;
}

long order_of(const ResidueMatrix& x) {
  check_modulus(x.m);
  if (invm(x.det(), x.m) == 0)
    throw domain_error("determinant " + std::to_string(x.det()) + " is not a unit mod " +
                       std::to_string(x.m));
  constexpr long kBudget = 10'000'000;
  ResidueMatrix acc = x;
  for (long n = 1; n <= kBudget; ++n) {
    if (acc.is_identity()) return n;
    acc = acc * x;
  }
  throw domain_error("order exceeds the iteration budget");
}

}  // namespace onerel
