#include "onerel/certify.hpp"

#include <limits>
#include <optional>
#include <sstream>
#include <thread>

namespace onerel {

namespace {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long mod_ell(long i, long ell) {
  long r = i % ell;
  return r < 0 ? r + ell : r;
}

void check_shape(const WreathElement& a) {
  if (a.ell < 1) throw usage_error("wreath element needs a positive block count");
  if (a.entries.size() != static_cast<std::size_t>(a.ell))
    throw usage_error("wreath element has " + std::to_string(a.entries.size()) +
                      " entries for block count " + std::to_string(a.ell));
  if (a.shift < 0 || a.shift >= a.ell) throw usage_error("wreath shift out of range");
  for (const ResidueMatrix& m : a.entries)
    if (m.m != a.entries[0].m) throw usage_error("wreath element mixes moduli");
}

}  // namespace

WreathElement WreathElement::identity(long ell, std::uint64_t m) {
  if (ell < 1) throw usage_error("wreath element needs a positive block count");
  WreathElement e;
  e.ell = ell;
  e.shift = 0;
  e.entries.assign(static_cast<std::size_t>(ell), ResidueMatrix::identity(m));
  return e;
}

WreathElement WreathElement::operator*(const WreathElement& rhs) const {
  check_shape(*this);
  check_shape(rhs);
  if (ell != rhs.ell || entries[0].m != rhs.entries[0].m)
    throw usage_error("wreath product needs matching block count and modulus");
  WreathElement out;
  out.ell = ell;
  out.shift = mod_ell(shift + rhs.shift, ell);
  out.entries.resize(entries.size());
  for (long i = 0; i < ell; ++i)
    out.entries[static_cast<std::size_t>(i)] =
        entries[static_cast<std::size_t>(i)] *
        rhs.entries[static_cast<std::size_t>(mod_ell(i + shift, ell))];
  return out;
}

WreathElement WreathElement::inverse() const {
  check_shape(*this);
  WreathElement out;
  out.ell = ell;
  out.shift = mod_ell(-shift, ell);
  out.entries.resize(entries.size());
  for (long j = 0; j < ell; ++j)
    out.entries[static_cast<std::size_t>(j)] =
        entries[static_cast<std::size_t>(mod_ell(j - shift, ell))].inverse();
  return out;
}

bool WreathElement::is_identity() const {
  check_shape(*this);
  if (shift != 0) return false;
  for (const ResidueMatrix& m : entries)
    if (!m.is_identity()) return false;
  return true;
}

std::string WreathElement::str() const {
  std::ostringstream os;
  os << "(shift " << shift << ";";
  for (const ResidueMatrix& m : entries) os << " " << m.str();
  os << ")";
  return os.str();
}

bool operator==(const WreathImages& a, const WreathImages& b) {
  return a.base == b.base && a.t == b.t;
}

WreathImages wreath_build(const HnnData& h, const MatTuple& tuple, long ell) {
  if (ell < 1) throw usage_error("block count must be at least 1");
  if (tuple.mats.size() != static_cast<std::size_t>(h.base_rank))
    throw usage_error("tuple rank does not match the endomorphism");
  const std::size_t k = tuple.mats.size();

  // Orbit of the tuple: row i holds phi^i applied to the start.
  std::vector<MatTuple> orbit;
  orbit.reserve(static_cast<std::size_t>(ell));
  orbit.push_back(tuple);
  for (long i = 1; i < ell; ++i) orbit.push_back(apply_endo(h, orbit.back()));
  if (!(apply_endo(h, orbit.back()) == tuple))
    throw domain_error("tuple does not return to itself after " + std::to_string(ell) +
                       " steps");

  WreathImages out;
  out.t = WreathElement::identity(ell, tuple.m);
  out.t.shift = 1 % ell;
  out.base.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    WreathElement& g = out.base[j];
    g.ell = ell;
    g.shift = 0;
    g.entries.resize(static_cast<std::size_t>(ell));
    for (long i = 0; i < ell; ++i)
      g.entries[static_cast<std::size_t>(i)] = orbit[static_cast<std::size_t>(i)].mats[j];
  }

  // The whole construction stands on t g_j t^-1 landing on the image of
  // phi(x_j); check it outright rather than trusting the index bookkeeping.
  const WreathElement tinv = out.t.inverse();
  for (std::size_t j = 0; j < k; ++j) {
    const WreathElement lhs = out.t * out.base[j] * tinv;
    const WreathElement rhs = wreath_eval_word(h.phi[j], out.base);
    if (!(lhs == rhs)) throw domain_error("conjugation relation failed during build");
  }
  return out;
}

WreathElement wreath_eval_word(const Word& w, const std::vector<WreathElement>& images) {
  if (images.empty()) throw usage_error("no images to evaluate over");
  if (w.rank() != static_cast<int>(images.size()))
    throw usage_error("word rank " + std::to_string(w.rank()) + " does not match image count " +
                      std::to_string(images.size()));
  WreathElement acc = WreathElement::identity(images[0].ell, images[0].entries[0].m);
  for (const Letter& l : w.letters()) {
    const WreathElement& g = images[static_cast<std::size_t>(l.gen - 1)];
    acc = acc * (l.sign > 0 ? g : g.inverse());
  }
  return acc;
}

bool verify(const Certificate& c) {
  try {
    if (c.p < 2 || c.e < 1 || c.ell < 1) return false;
    if (!is_prime(c.p)) return false;
    std::uint64_t m = 1;
    for (int i = 0; i < c.e; ++i) m *= static_cast<std::uint64_t>(c.p);
    if (m != c.modulus) return false;
    if (c.w.size() == 0) return false;
    if (c.w.rank() != c.h.base_rank) return false;

    const std::size_t k = static_cast<std::size_t>(c.h.base_rank);
    if (c.images.base.size() != k) return false;
    if (c.tuple.m != c.modulus || c.tuple.mats.size() != k) return false;
    for (const WreathElement& g : c.images.base) {
      check_shape(g);
      if (g.ell != c.ell || g.shift != 0 || g.entries[0].m != c.modulus) return false;
    }
    check_shape(c.images.t);
    if (c.images.t.ell != c.ell || c.images.t.shift != 1 % c.ell) return false;
    if (c.images.t.entries[0].m != c.modulus) return false;
    for (const ResidueMatrix& mm : c.images.t.entries)
      if (!mm.is_identity()) return false;

    // Position 0 of each image vector is the tuple the certificate names.
    for (std::size_t j = 0; j < k; ++j)
      if (!(c.images.base[j].entries[0] == c.tuple.mats[j])) return false;

    // The tuple really returns after ell steps.
    MatTuple walk = c.tuple;
    for (long i = 0; i < c.ell; ++i) walk = apply_endo(c.h, walk);
    if (!(walk == c.tuple)) return false;

    // Conjugation relations, recomputed by wreath multiplication alone.
    const WreathElement tinv = c.images.t.inverse();
    for (std::size_t j = 0; j < k; ++j) {
      const WreathElement lhs = c.images.t * c.images.base[j] * tinv;
      const WreathElement rhs = wreath_eval_word(c.h.phi[j], c.images.base);
      if (!(lhs == rhs)) return false;
    }

    // gamma(w) as stored, and visibly nontrivial.
    const WreathElement gw = wreath_eval_word(c.w, c.images.base);
    if (!(gw == c.gamma_w)) return false;
    if (gw.is_identity()) return false;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

int nontriviality_modulus(const Word& w, const std::vector<IntMat2>& seed, long p) {
  if (w.size() == 0) throw usage_error("the empty word has no separating modulus");
  if (!is_prime(p)) throw usage_error(std::to_string(p) + " is not prime");
  const IntMat2 W = eval_word_int(w, seed);
  const IntMat2 I = IntMat2::identity();
  BigInt diffs[4] = {W.a - I.a, W.b - I.b, W.c - I.c, W.d - I.d};
  bool all_zero = true;
  for (const BigInt& d : diffs)
    if (d != 0) all_zero = false;
  if (all_zero)
    throw domain_error("word evaluates to the identity on the seed; no modulus separates it");

  // e - 1 is the least p-adic valuation among the nonzero entry differences.
  int e = 1;
  const BigInt bp = p;
  for (;;) {
    bool all_divide = true;
    for (BigInt& d : diffs)
      if (d != 0 && d % bp != 0) all_divide = false;
    if (!all_divide) return e;
    for (BigInt& d : diffs) d /= bp;
    ++e;
  }
}

namespace {

struct PrimeSearch {
  std::optional<Certificate> cert;
  std::vector<CertifyAttempt> attempts;
  bool saw_on_cycle_death = false;
};

PrimeSearch search_prime(const HnnData& h, const Word& w, const std::vector<IntMat2>& seed,
                         long p, int e_cap) {
  PrimeSearch out;
  const int e0 = nontriviality_modulus(w, seed, p);
  if (e0 > e_cap) {
    out.attempts.push_back({p, e0, -1, 0, false, "separating exponent exceeds the cap"});
    return out;
  }
  for (int e = e0; e <= e_cap; ++e) {
    std::uint64_t m = 1;
    bool overflow = false;
    for (int i = 0; i < e; ++i) {
      if (m > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(p))
        overflow = true;
      else
        m *= static_cast<std::uint64_t>(p);
    }
    if (overflow) {
      out.attempts.push_back({p, e, -1, 0, false, "modulus overflows 64 bits"});
      break;
    }
    const MatTuple start = reduce_tuple(seed, m);
    const CycleRecord rec = find_cycle(h, start);
    const bool alive = !eval_word(w, start).is_identity();
    out.attempts.push_back({p, e, rec.tail, rec.period, alive, ""});
    if (rec.tail != 0) continue;
    if (!alive) {
      out.saw_on_cycle_death = true;
      continue;
    }
    Certificate c;
    c.h = h;
    c.w = w;
    c.p = p;
    c.e = e;
    c.modulus = m;
    c.ell = rec.period;
    c.tuple = start;
    c.images = wreath_build(h, start, rec.period);
    c.gamma_w = wreath_eval_word(w, c.images.base);
    if (verify(c)) {
      out.cert = std::move(c);
      return out;
    }
    out.attempts.back().note = "built certificate failed verification";
  }
  return out;
}

CertifyResult combine(std::vector<PrimeSearch>& per_prime) {
  CertifyResult out;
  bool any_on_cycle_death = false;
  for (PrimeSearch& ps : per_prime) {
    any_on_cycle_death = any_on_cycle_death || ps.saw_on_cycle_death;
    for (CertifyAttempt& a : ps.attempts) out.attempts.push_back(std::move(a));
    if (ps.cert) {
      out.success = true;
      out.cert = std::move(*ps.cert);
      return out;
    }
  }
  if (any_on_cycle_death)
    out.obstruction = "the word vanishes at every on-cycle modulus tried";
  else
    out.obstruction = "the seed tuple never lands on its cycle at any admissible modulus";
  return out;
}

}  // namespace

CertifyResult certify(const HnnData& h, const Word& w, const std::vector<long>& primes,
                      int e_cap, bool parallel) {
  if (h.base_rank < 2) throw usage_error("certification needs base rank at least 2");
  if (w.size() == 0) throw usage_error("cannot certify the empty word");
  if (w.rank() != h.base_rank)
    throw usage_error("word rank " + std::to_string(w.rank()) + " does not match base rank " +
                      std::to_string(h.base_rank));
  if (primes.empty()) throw usage_error("no primes to try");
  for (long p : primes)
    if (!is_prime(p)) throw usage_error(std::to_string(p) + " is not prime");
  if (e_cap < 1) throw usage_error("exponent cap must be at least 1");

  const std::vector<IntMat2> seed = sanov_seed(h.base_rank);
  std::vector<PrimeSearch> per_prime(primes.size());
  if (parallel && primes.size() > 1) {
    std::vector<std::thread> pool;
    pool.reserve(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i)
      pool.emplace_back([&, i] {
        try {
          per_prime[i] = search_prime(h, w, seed, primes[i], e_cap);
        } catch (const std::exception& ex) {
          per_prime[i].attempts.push_back({primes[i], 0, -1, 0, false, ex.what()});
        }
      });
    for (std::thread& t : pool) t.join();
  } else {
    for (std::size_t i = 0; i < primes.size(); ++i) {
      per_prime[i] = search_prime(h, w, seed, primes[i], e_cap);
      if (per_prime[i].cert) break;  // later primes never reported anyway
    }
  }
  return combine(per_prime);
}

}  // namespace onerel
