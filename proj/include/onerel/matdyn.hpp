#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "onerel/base.hpp"
#include "onerel/magnus.hpp"
#include "onerel/words.hpp"

namespace onerel {

// Exact 2x2 integer matrix, row-major [[a,b],[c,d]].
struct IntMat2 {
  BigInt a = 0, b = 0, c = 0, d = 0;

  static IntMat2 identity() { return IntMat2{1, 0, 0, 1}; }
  IntMat2 operator*(const IntMat2& rhs) const;
  bool operator==(const IntMat2&) const = default;

  BigInt det() const { return a * d - b * c; }
  IntMat2 adjugate() const { return IntMat2{d, -b, -c, a}; }
  IntMat2 inverse() const;  // determinant must be +1 or -1
  std::string str() const;
};

// 2x2 matrix over Z/mZ, entries reduced to [0, m).
struct ResidueMatrix {
  std::uint64_t m = 0;
  std::array<std::uint64_t, 4> e{};  // row-major

  static ResidueMatrix identity(std::uint64_t m);
  static ResidueMatrix reduce(const IntMat2& a, std::uint64_t m);
  ResidueMatrix operator*(const ResidueMatrix& rhs) const;
  bool operator==(const ResidueMatrix&) const = default;

  std::uint64_t det() const;
  ResidueMatrix adjugate() const;
  ResidueMatrix inverse() const;  // det must be a unit mod m
  bool is_identity() const;
  std::string str() const;
};

// k matrices over a common modulus; one state of the endomorphism dynamics.
struct MatTuple {
  std::uint64_t m = 0;
  std::vector<ResidueMatrix> mats;

  bool operator==(const MatTuple&) const = default;
  std::string str() const;
};

struct MatTupleHash {
  std::size_t operator()(const MatTuple& t) const;
};

MatTuple reduce_tuple(const std::vector<IntMat2>& mats, std::uint64_t m);

// Evaluates w with generator j going to t.mats[j-1]. Inverse letters use the
// true inverse, so their determinants must be units; with adjoint = true they
// use the adjugate instead, which is defined for every matrix (the projective
// reading, where results are meaningful up to scalars).
ResidueMatrix eval_word(const Word& w, const MatTuple& t, bool adjoint = false);
IntMat2 eval_word_int(const Word& w, const std::vector<IntMat2>& mats);

// Componentwise eval_word of h.phi; h.base_rank must equal the tuple size.
MatTuple apply_endo(const HnnData& h, const MatTuple& t, bool adjoint = false);

// Integer seeds generating a free subgroup of SL_2(Z): for k = 2 the classical
// pair A = UV, B = VU with U = [[1,2],[0,1]], V = [[1,0],[2,1]]; otherwise
// the conjugates U^i V U^-i for i = 1..k.
std::vector<IntMat2> sanov_seed(int k);

struct CycleRecord {
  long tail = 0;      // steps before the cycle is entered; minimal
  long period = 1;    // minimal
  MatTuple on_cycle;  // first state on the cycle, = phi^tail(start)
};

// Iterates apply_endo from start until a state repeats, remembering every
// state seen (hash map, so the minimal tail comes for free). State budget
// 10^7; exceeding it is a domain_error.
CycleRecord find_cycle(const HnnData& h, const MatTuple& start, bool adjoint = false);

struct HenselLevel {
  std::uint64_t modulus = 0;
  long tail = 0;
  long period = 0;
  bool law_ok = false;  // tail 0 and period = p^(e-1) * base period
};

struct HenselReport {
  long p = 0;
  int depth = 0;
  long base_period = 0;  // period modulo p
  std::vector<HenselLevel> levels;
  bool law_holds = false;
};

// Checks the lifting law period(p^e) = p^(e-1) * period(p) for e = 1..depth.
// The start must lie on its cycle modulo p (tail 0); law violations at higher
// levels are reported, not thrown.
HenselReport hensel_check(const HnnData& h, const std::vector<IntMat2>& start,
                          long p, int depth, bool adjoint = false);

// F_{q^m} presented as F_q[x] modulo a fixed primitive polynomial from the
// embedded Conway-style table (q in {2,3,5,7}, m <= 3, plus q = 2, m = 4).
// Elements are indices 0..q^m-1; index sum c_i q^i stands for the residue
// class with coefficients c_i, so 0 and 1 are the field's zero and one.
class Fq {
 public:
  Fq(int q, int m);

  int q() const { return q_; }
  int deg() const { return m_; }
  int size() const { return size_; }
  // monic modulus polynomial, coefficients low to high
  const std::vector<int>& modulus_poly() const { return poly_; }

  int add(int x, int y) const;
  int sub(int x, int y) const;
  int neg(int x) const;
  int mul(int x, int y) const { return mul_[static_cast<std::size_t>(x) * size_ + y]; }
  int inv(int x) const;          // x must be nonzero
  int pow(int x, long e) const;  // e >= 0
  int frob(int x, int s) const;  // x^(q^s)
  std::string elem_str(int x) const;

 private:
  int q_ = 0, m_ = 0, size_ = 0;
  std::vector<int> poly_;
  std::vector<int> mul_;
  std::vector<int> inv_;
};

// 2x2 matrix over an Fq, entries as element indices; operations take the field.
struct FqMat2 {
  std::array<int, 4> e{};
  auto operator<=>(const FqMat2&) const = default;
};

FqMat2 fq_identity();
FqMat2 fq_mul(const Fq& f, const FqMat2& x, const FqMat2& y);
int fq_det(const Fq& f, const FqMat2& x);
FqMat2 fq_adjugate(const Fq& f, const FqMat2& x);
FqMat2 fq_frob(const Fq& f, const FqMat2& x, int s);  // entrywise
// Inverse letters act by the adjugate (projective convention), so every word
// is defined on every tuple.
FqMat2 fq_eval_word(const Fq& f, const Word& w, const std::vector<FqMat2>& mats);

// All of SL_2(F_Q), Q = q^m, in sorted entry order; Q^3 - Q elements.
std::vector<FqMat2> sl2_elements(const Fq& f);

struct QuasiFixedQuery {
  int q = 5;
  int m = 1;  // extension degree
  int s = 1;  // Frobenius power, so Q = q^s
  HnnData phi;
  bool sl2_only = true;  // search SL_2 tuples; false searches all matrices
  int workers = 1;
};

struct QuasiFixedResult {
  int q = 0, m = 0, s = 0;
  bool sl2_only = true;
  std::vector<std::vector<FqMat2>> tuples;  // sorted; independent of workers
};

// All k-tuples T over F_{q^m} with phi(T) equal to the entrywise Q-th power
// (= Frobenius^s) of T. Guard: at most 10^8 candidate tuples.
QuasiFixedResult quasi_fixed_search(const QuasiFixedQuery& query, int k);

// Multiplicative order; det must be a unit mod x.m.
long order_of(const ResidueMatrix& x);

}  // namespace onerel
