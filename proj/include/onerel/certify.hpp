#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onerel/base.hpp"
#include "onerel/magnus.hpp"
#include "onerel/matdyn.hpp"
#include "onerel/words.hpp"

namespace onerel {

// Element of (V x ... x V) x| Z/ell, V a matrix group over a fixed modulus.
// Product rule: (f, s) * (g, t) = (i -> f(i) * g(i + s), s + t), indices mod
// ell. Under this rule conjugating a shift-0 element by the shift-1 element
// with identity entries rotates its vector one step left.
struct WreathElement {
  long ell = 1;
  long shift = 0;                      // in [0, ell)
  std::vector<ResidueMatrix> entries;  // size ell, common modulus

  static WreathElement identity(long ell, std::uint64_t m);
  WreathElement operator*(const WreathElement& rhs) const;
  WreathElement inverse() const;
  bool is_identity() const;
  bool operator==(const WreathElement&) const = default;
  std::string str() const;
};

struct WreathImages {
  std::vector<WreathElement> base;  // images of the base generators
  WreathElement t;
};
bool operator==(const WreathImages&, const WreathImages&);

// Images x_j -> ((T_j, phi(T)_j, phi^2(T)_j, ..., phi^(ell-1)(T)_j), 0) and
// t -> ((I,...,I), 1). The tuple must return to itself after ell steps; the
// conjugation relation t g t^-1 = gamma(phi(x_j)) is checked before returning.
WreathImages wreath_build(const HnnData& h, const MatTuple& tuple, long ell);

// Wreath product of images along w; inverse letters by wreath inverse.
WreathElement wreath_eval_word(const Word& w, const std::vector<WreathElement>& images);

struct Certificate {
  HnnData h;
  Word w;                     // the separated word, over the base
  long p = 0;
  int e = 0;
  std::uint64_t modulus = 0;  // p^e
  long ell = 0;               // tuple period at that modulus
  MatTuple tuple;
  WreathImages images;
  WreathElement gamma_w;
};

// Recomputes everything the certificate claims: shape and moduli, the tuple
// behind position 0, ell-periodicity, every conjugation relation, and
// gamma(w) both reproducing the stored value and differing from the
// identity. Never throws; any mismatch is a false.
bool verify(const Certificate& c);

// Exact evaluation W = w(seed) over the integers, then the minimal e with
// W != I mod p^e. Exists whenever W != I, in particular for nontrivial w at
// a free seed tuple.
int nontriviality_modulus(const Word& w, const std::vector<IntMat2>& seed, long p);

struct CertifyAttempt {
  long p = 0;
  int e = 0;
  long tail = -1;  // -1 when the modulus was skipped outright
  long period = 0;
  bool word_survives = false;
  std::string note;
};

struct CertifyResult {
  bool success = false;
  Certificate cert;          // meaningful only on success
  std::string obstruction;   // empty on success
  std::vector<CertifyAttempt> attempts;
};

// Searches primes in order and exponents from the separating one up to
// e_cap: reduce the Sanov seed, ask for tail 0 and a surviving word, build
// and verify. Failure is data, not an exception. parallel = true searches
// the primes concurrently; the reported result is identical (lowest prime
// wins, attempt log truncated at the winning prime).
CertifyResult certify(const HnnData& h, const Word& w,
                      const std::vector<long>& primes = {5, 7, 11, 13}, int e_cap = 6,
                      bool parallel = false);

}  // namespace onerel
