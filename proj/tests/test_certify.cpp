#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "onerel/certify.hpp"
#include "onerel/magnus.hpp"
#include "onerel/matdyn.hpp"
#include "onerel/words.hpp"

using namespace onerel;

namespace {

HnnData endo(int rank, const std::vector<std::string>& images, const std::string& stable = "t") {
  std::vector<Word> ws;
  for (const std::string& s : images) ws.push_back(Word::parse(s, rank));
  return make_hnn(rank, ws, stable);
}

HnnData trace_swap_endo() { return endo(2, {"ab", "ba"}); }

ResidueMatrix rm(std::uint64_t m, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                 std::uint64_t d) {
  ResidueMatrix x;
  x.m = m;
  x.e = {a, b, c, d};
  return x;
}

ResidueMatrix random_shear_product(std::uint64_t m, Rng& rng) {
  ResidueMatrix acc = ResidueMatrix::identity(m);
  const int steps = 1 + static_cast<int>(rng.below(5));
  for (int i = 0; i < steps; ++i) {
    const std::uint64_t r = rng.below(m);
    acc = acc * (rng.below(2) == 0 ? rm(m, 1, r, 0, 1) : rm(m, 1, 0, r, 1));
  }
  return acc;
}

WreathElement random_wreath(long ell, std::uint64_t m, Rng& rng) {
  WreathElement g;
  g.ell = ell;
  g.shift = static_cast<long>(rng.below(static_cast<std::uint64_t>(ell)));
  for (long i = 0; i < ell; ++i) g.entries.push_back(random_shear_product(m, rng));
  return g;
}

// Orbit of a tuple under the base endomorphism, rows 0..steps-1.
std::vector<MatTuple> orbit_of(const HnnData& h, const MatTuple& start, long steps) {
  std::vector<MatTuple> rows{start};
  for (long i = 1; i < steps; ++i) rows.push_back(apply_endo(h, rows.back()));
  return rows;
}

}  // namespace

TEST_CASE("wreath element arithmetic") {
  const ResidueMatrix F0 = rm(5, 0, 2, 2, 1), F1 = rm(5, 1, 2, 2, 0);
  const ResidueMatrix G0 = rm(5, 1, 2, 0, 1), G1 = rm(5, 1, 0, 2, 1);

  WreathElement f;
  f.ell = 2;
  f.shift = 1;
  f.entries = {F0, F1};
  WreathElement g;
  g.ell = 2;
  g.shift = 1;
  g.entries = {G0, G1};

  SUBCASE("frozen products over two blocks") {
    const WreathElement fg = f * g;
    CHECK(fg.shift == 0);
    CHECK(fg.entries[0] == F0 * G1);  // g read one slot ahead, by f's shift
    CHECK(fg.entries[1] == F1 * G0);

    WreathElement g0 = g;
    g0.shift = 0;
    const WreathElement fg0 = f * g0;
    CHECK(fg0.shift == 1);
    CHECK(fg0.entries[0] == F0 * G1);
    CHECK(fg0.entries[1] == F1 * G0);
  }

  SUBCASE("identity and inverse laws") {
    const WreathElement id = WreathElement::identity(2, 5);
    CHECK(id.is_identity());
    CHECK(f * id == f);
    CHECK(id * f == f);
    CHECK((f * f.inverse()).is_identity());
    CHECK((f.inverse() * f).is_identity());
  }

  SUBCASE("conjugation by the shift element rotates one step left") {
    const long ell = 3;
    Rng rng(2026);
    WreathElement tau = WreathElement::identity(ell, 5);
    tau.shift = 1;
    for (int trial = 0; trial < 40; ++trial) {
      WreathElement x = random_wreath(ell, 5, rng);
      x.shift = 0;
      const WreathElement got = tau * x * tau.inverse();
      CHECK(got.shift == 0);
      for (long i = 0; i < ell; ++i)
        CHECK(got.entries[static_cast<std::size_t>(i)] ==
              x.entries[static_cast<std::size_t>((i + 1) % ell)]);
    }
  }

  SUBCASE("associativity and shift additivity on random triples") {
    Rng rng(71);
    for (int trial = 0; trial < 30; ++trial) {
      const WreathElement a = random_wreath(4, 25, rng);
      const WreathElement b = random_wreath(4, 25, rng);
      const WreathElement c = random_wreath(4, 25, rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK((a * b).shift == (a.shift + b.shift) % 4);
    }
  }

  SUBCASE("shape errors") {
    const WreathElement other = WreathElement::identity(3, 5);
    CHECK_THROWS_AS(f * other, usage_error);                          // block counts differ
    CHECK_THROWS_AS(f * WreathElement::identity(2, 7), usage_error);  // moduli differ
    WreathElement bad = f;
    bad.entries.pop_back();
    CHECK_THROWS_AS(bad * f, usage_error);
    CHECK_THROWS_AS(WreathElement::identity(0, 5), usage_error);
  }
}

TEST_CASE("wreath build from an on-cycle tuple") {
  const HnnData h = trace_swap_endo();
  const MatTuple t5 = reduce_tuple(sanov_seed(2), 5);

  SUBCASE("block vectors list the orbit of the tuple") {
    const WreathImages im = wreath_build(h, t5, 6);
    REQUIRE(im.base.size() == 2);
    CHECK(im.t.shift == 1);
    CHECK(im.t.ell == 6);
    for (const ResidueMatrix& e : im.t.entries) CHECK(e.is_identity());

    const std::vector<MatTuple> orbit = orbit_of(h, t5, 6);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(im.base[j].shift == 0);
      REQUIRE(im.base[j].entries.size() == 6);
      for (long i = 0; i < 6; ++i)
        CHECK(im.base[j].entries[static_cast<std::size_t>(i)] ==
              orbit[static_cast<std::size_t>(i)].mats[j]);
    }
    CHECK(im.base[0].entries[0] == rm(5, 0, 2, 2, 1));
    CHECK(im.base[1].entries[0] == rm(5, 1, 2, 2, 0));
  }

  SUBCASE("a multiple of the period is accepted") {
    const WreathImages im = wreath_build(h, t5, 12);
    CHECK(im.base[0].entries.size() == 12);
    // Two laps of the same hexagon.
    for (long i = 0; i < 6; ++i)
      CHECK(im.base[0].entries[static_cast<std::size_t>(i)] ==
            im.base[0].entries[static_cast<std::size_t>(i + 6)]);
  }

  SUBCASE("degenerate single block") {
    MatTuple fixed;
    fixed.m = 5;
    fixed.mats = {ResidueMatrix::identity(5), ResidueMatrix::identity(5)};
    const WreathImages im = wreath_build(h, fixed, 1);
    CHECK(im.t.shift == 0);  // shift group is trivial
    CHECK(im.base[0].is_identity());
  }

  SUBCASE("rejects a length that misses the return") {
    CHECK_THROWS_AS(wreath_build(h, t5, 5), domain_error);
    CHECK_THROWS_AS(wreath_build(h, t5, 0), usage_error);
    MatTuple wrong;
    wrong.m = 5;
    wrong.mats = {ResidueMatrix::identity(5)};
    CHECK_THROWS_AS(wreath_build(h, wrong, 1), usage_error);
  }
}

TEST_CASE("word evaluation over wreath images") {
  const HnnData h = trace_swap_endo();
  const MatTuple t5 = reduce_tuple(sanov_seed(2), 5);
  const WreathImages im = wreath_build(h, t5, 6);

  SUBCASE("homomorphism into block zero") {
    Rng rng(404);
    const Sampler sampler(2, 9);
    for (int trial = 0; trial < 60; ++trial) {
      const Word w = sampler.reduced(rng);
      const WreathElement gw = wreath_eval_word(w, im.base);
      CHECK(gw.shift == 0);
      CHECK(gw.entries[0] == eval_word(w, t5));
    }
  }

  SUBCASE("multiplicativity") {
    const Word u = Word::parse("abA", 2);
    const Word v = Word::parse("bbA", 2);
    CHECK(wreath_eval_word(u * v, im.base) ==
          wreath_eval_word(u, im.base) * wreath_eval_word(v, im.base));
    CHECK(wreath_eval_word(u.inverse(), im.base) == wreath_eval_word(u, im.base).inverse());
  }

  SUBCASE("rank mismatch is refused") {
    CHECK_THROWS_AS(wreath_eval_word(Word::parse("c", 3), im.base), usage_error);
    CHECK_THROWS_AS(wreath_eval_word(Word::parse("a", 2), std::vector<WreathElement>{}),
                    usage_error);
  }
}

TEST_CASE("separating modulus exponent") {
  const std::vector<IntMat2> seed = sanov_seed(2);

  SUBCASE("frozen exponents at the classical pair") {
    CHECK(nontriviality_modulus(Word::parse("a", 2), seed, 5) == 1);
    CHECK(nontriviality_modulus(Word::parse("b", 2), seed, 5) == 1);
    CHECK(nontriviality_modulus(Word::parse("abAB", 2), seed, 5) == 1);
    CHECK(nontriviality_modulus(Word::parse("a", 2), seed, 2) == 2);
    // x^6 dies mod 5 (the image has order 6 there) but survives mod 25.
    CHECK(nontriviality_modulus(Word::parse("aaaaaa", 2), seed, 5) == 2);
  }

  SUBCASE("commutator evaluation against direct products") {
    const IntMat2 A = seed[0], B = seed[1];
    const IntMat2 W = A * B * A.inverse() * B.inverse();
    CHECK(eval_word_int(Word::parse("abAB", 2), seed) == W);
    CHECK(W.a == BigInt(-319));
    CHECK(W.b == BigInt(144));
    CHECK(W.c == BigInt(-144));
    CHECK(W.d == BigInt(65));
  }

  SUBCASE("exponent by independent division, sampled words") {
    Rng rng(515);
    const Sampler sampler(2, 8);
    for (int trial = 0; trial < 40; ++trial) {
      const Word w = sampler.reduced(rng);
      const long p = (trial % 2 == 0) ? 5 : 7;
      const IntMat2 W = eval_word_int(w, seed);
      BigInt d[4] = {W.a - 1, W.b, W.c, W.d - 1};
      int expected = 1;
      for (;;) {
        bool all = true;
        for (const BigInt& x : d)
          if (x != 0 && x % p != 0) all = false;
        if (!all) break;
        for (BigInt& x : d) x /= p;
        ++expected;
      }
      CHECK(nontriviality_modulus(w, seed, p) == expected);
    }
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(nontriviality_modulus(Word::parse("", 2), seed, 5), usage_error);
    CHECK_THROWS_AS(nontriviality_modulus(Word::parse("aA", 2), seed, 5), usage_error);
    CHECK_THROWS_AS(nontriviality_modulus(Word::parse("a", 2), seed, 4), usage_error);
    const std::vector<IntMat2> trivial = {IntMat2::identity(), IntMat2::identity()};
    CHECK_THROWS_AS(nontriviality_modulus(Word::parse("a", 2), trivial, 5), domain_error);
  }
}

TEST_CASE("certificate for a single generator") {
  const HnnData h = trace_swap_endo();
  const CertifyResult r = certify(h, Word::parse("a", 2));
  REQUIRE(r.success);
  CHECK(r.obstruction.empty());
  CHECK(r.cert.p == 5);
  CHECK(r.cert.e == 1);
  CHECK(r.cert.modulus == 5);
  CHECK(r.cert.ell == 6);
  CHECK(r.cert.gamma_w.shift == 0);
  CHECK(r.cert.gamma_w.entries[0] == rm(5, 0, 2, 2, 1));
  CHECK(verify(r.cert));
  REQUIRE(r.attempts.size() == 1);
  CHECK(r.attempts[0].p == 5);
  CHECK(r.attempts[0].e == 1);
  CHECK(r.attempts[0].tail == 0);
  CHECK(r.attempts[0].period == 6);
  CHECK(r.attempts[0].word_survives);
}

TEST_CASE("certificates for the standard word list and tamper detection") {
  const HnnData h = trace_swap_endo();
  for (const std::string text : {"a", "b", "abAB", "abA"}) {
    CAPTURE(text);
    const CertifyResult r = certify(h, Word::parse(text, 2));
    REQUIRE(r.success);
    CHECK(r.cert.p == 5);
    CHECK(r.cert.e == 1);
    CHECK(r.cert.ell == 6);
    CHECK(verify(r.cert));
    CHECK_FALSE(r.cert.gamma_w.is_identity());

    // Every stored field is load-bearing: poke each one and watch it fail.
    Certificate c = r.cert;
    c.images.base[0].entries[2].e[1] = (c.images.base[0].entries[2].e[1] + 1) % 5;
    CHECK_FALSE(verify(c));

    c = r.cert;
    c.gamma_w.entries[3].e[0] = (c.gamma_w.entries[3].e[0] + 1) % 5;
    CHECK_FALSE(verify(c));

    c = r.cert;
    c.tuple.mats[1].e[2] = (c.tuple.mats[1].e[2] + 1) % 5;
    CHECK_FALSE(verify(c));

    c = r.cert;
    c.images.t.shift = 2;
    CHECK_FALSE(verify(c));

    c = r.cert;
    c.ell = 5;
    CHECK_FALSE(verify(c));

    c = r.cert;
    c.e = 2;
    CHECK_FALSE(verify(c));

    CHECK(verify(r.cert));  // the original is untouched
  }
}

TEST_CASE("certificate that needs a deeper modulus") {
  const HnnData h = trace_swap_endo();
  const Word w = Word::parse("aaaaaa", 2);
  const CertifyResult r = certify(h, w);
  REQUIRE(r.success);
  CHECK(r.cert.p == 5);
  CHECK(r.cert.e == 2);
  CHECK(r.cert.modulus == 25);
  CHECK(r.cert.ell == 12);  // the pair's true period mod 25
  CHECK(verify(r.cert));
  REQUIRE(r.attempts.size() == 1);
  CHECK(r.attempts[0].e == 2);
  CHECK(r.attempts[0].period == 12);

  // The wreath value sits over the exact integer evaluation.
  const ResidueMatrix direct = ResidueMatrix::reduce(eval_word_int(w, sanov_seed(2)), 25);
  CHECK(r.cert.gamma_w.entries[0] == direct);
  CHECK_FALSE(direct.is_identity());
  CHECK(ResidueMatrix::reduce(eval_word_int(w, sanov_seed(2)), 5).is_identity());
}

TEST_CASE("failure is a value with the obstruction spelled out") {
  const HnnData collapse = endo(2, {"b", "b"});  // everything funnels to (B, B)
  const CertifyResult r = certify(collapse, Word::parse("a", 2));
  CHECK_FALSE(r.success);
  CHECK(r.obstruction == "the seed tuple never lands on its cycle at any admissible modulus");
  CHECK(r.attempts.size() == 24);  // four primes, exponents 1..6 each
  for (const CertifyAttempt& a : r.attempts) {
    CHECK(a.tail >= 1);
    CHECK(a.word_survives);
    CHECK(a.period >= 1);
  }
  CHECK(r.attempts[0].p == 5);
  CHECK(r.attempts[23].p == 13);
  CHECK(r.attempts[23].e == 6);
}

TEST_CASE("parallel prime search reports the same result") {
  const HnnData h = trace_swap_endo();
  const Word w = Word::parse("abAB", 2);
  const CertifyResult seq = certify(h, w, {5, 7, 11, 13}, 6, false);
  const CertifyResult par = certify(h, w, {5, 7, 11, 13}, 6, true);
  REQUIRE(seq.success);
  REQUIRE(par.success);
  CHECK(seq.cert.p == par.cert.p);
  CHECK(seq.cert.e == par.cert.e);
  CHECK(seq.cert.ell == par.cert.ell);
  CHECK(seq.cert.gamma_w == par.cert.gamma_w);
  CHECK(seq.cert.images == par.cert.images);
  CHECK(seq.cert.tuple == par.cert.tuple);
  CHECK(seq.attempts.size() == par.attempts.size());

  const HnnData collapse = endo(2, {"b", "b"});
  const CertifyResult fs = certify(collapse, Word::parse("a", 2), {5, 7, 11, 13}, 3, false);
  const CertifyResult fp = certify(collapse, Word::parse("a", 2), {5, 7, 11, 13}, 3, true);
  CHECK_FALSE(fs.success);
  CHECK_FALSE(fp.success);
  CHECK(fs.obstruction == fp.obstruction);
  REQUIRE(fs.attempts.size() == fp.attempts.size());
  for (std::size_t i = 0; i < fs.attempts.size(); ++i) {
    CHECK(fs.attempts[i].p == fp.attempts[i].p);
    CHECK(fs.attempts[i].e == fp.attempts[i].e);
    CHECK(fs.attempts[i].tail == fp.attempts[i].tail);
    CHECK(fs.attempts[i].period == fp.attempts[i].period);
  }
}

TEST_CASE("conjugation relation on sampled endomorphisms") {
  Rng rng(888);
  const Sampler sampler(2, 6);
  int built = 0;
  while (built < 60) {
    const Word i1 = sampler.reduced(rng);
    const Word i2 = sampler.reduced(rng);
    const HnnData h = make_hnn(2, {i1, i2});
    const std::uint64_t m = (built % 2 == 0) ? 2 : 3;
    MatTuple start;
    start.m = m;
    start.mats = {random_shear_product(m, rng), random_shear_product(m, rng)};
    const CycleRecord rec = find_cycle(h, start);
    MatTuple tuple;
    tuple.m = m;
    tuple.mats = rec.on_cycle.mats;
    const WreathImages im = wreath_build(h, tuple, rec.period);
    ++built;

    // gamma(phi(x_j)) block i is phi(x_j) read off at the i-th orbit row;
    // conjugating gamma(x_j) by t must land exactly there.
    const std::vector<MatTuple> orbit = orbit_of(h, tuple, rec.period);
    const WreathElement tinv = im.t.inverse();
    for (std::size_t j = 0; j < 2; ++j) {
      const WreathElement lhs = im.t * im.base[j] * tinv;
      const WreathElement rhs = wreath_eval_word(h.phi[j], im.base);
      CHECK(lhs == rhs);
      CHECK(rhs.shift == 0);
      for (long i = 0; i < rec.period; ++i)
        CHECK(rhs.entries[static_cast<std::size_t>(i)] ==
              eval_word(h.phi[j], orbit[static_cast<std::size_t>(i)]));
    }
  }
}

TEST_CASE("kernel words close under products and inverses") {
  const HnnData h = trace_swap_endo();
  const MatTuple t5 = reduce_tuple(sanov_seed(2), 5);
  const WreathImages im = wreath_build(h, t5, 6);

  // The wreath image is finite, so u raised to the order of gamma(u) is a
  // kernel word for any u; random products of those must stay in the kernel.
  Rng rng(31);
  const Sampler sampler(2, 5);
  std::vector<Word> kernel;
  for (int i = 0; i < 40; ++i) {
    const Word u = sampler.reduced(rng);
    const WreathElement g = wreath_eval_word(u, im.base);
    WreathElement acc = g;
    int d = 1;
    while (!acc.is_identity() && d < 256) {
      acc = acc * g;
      ++d;
    }
    REQUIRE(acc.is_identity());
    Word power(2);
    for (int rep = 0; rep < d; ++rep) power = power * u;
    kernel.push_back(power);
  }
  for (const Word& k : kernel) CHECK(wreath_eval_word(k, im.base).is_identity());
  for (int trial = 0; trial < 200; ++trial) {
    const Word& u = kernel[rng.below(kernel.size())];
    const Word& v = kernel[rng.below(kernel.size())];
    CHECK(wreath_eval_word(u * v, im.base).is_identity());
    CHECK(wreath_eval_word(u.inverse(), im.base).is_identity());
  }

  // And a word alive in block zero never joins them.
  CHECK_FALSE(wreath_eval_word(Word::parse("ab", 2), im.base).is_identity());
}

TEST_CASE("certify validates its inputs") {
  const HnnData h = trace_swap_endo();
  CHECK_THROWS_AS(certify(endo(1, {"a"}), Word::parse("a", 1)), usage_error);
  CHECK_THROWS_AS(certify(h, Word::parse("", 2)), usage_error);
  CHECK_THROWS_AS(certify(h, Word::parse("c", 3)), usage_error);
  CHECK_THROWS_AS(certify(h, Word::parse("a", 2), {}), usage_error);
  CHECK_THROWS_AS(certify(h, Word::parse("a", 2), {6}), usage_error);
  CHECK_THROWS_AS(certify(h, Word::parse("a", 2), {5}, 0), usage_error);
}
