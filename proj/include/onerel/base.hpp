#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace onerel {

using BigInt = boost::multiprecision::cpp_int;

// Bad input from the caller: unparseable words, out-of-range ranks, unknown
// flags. Maps to exit code 2 at the CLI.
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input was well-formed but the operation's mathematical precondition fails
// (nonzero stable-letter exponent sum, non-unit determinant, ...). Maps to
// exit code 1 at the CLI.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic seedable generator. mt19937_64 is fully specified by the
// standard, so streams are identical across platforms; bounded draws use
// rejection instead of std::uniform_int_distribution, whose output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw domain_error("Rng::below: empty range");
    if ((n & (n - 1)) == 0) return next() & (n - 1);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  // uniform in [0, n) for arbitrary-precision n >= 1
  BigInt big_below(const BigInt& n) {
    if (n <= 0) throw domain_error("Rng::big_below: empty range");
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
    const unsigned chunks = (bits + 63) / 64;
    for (;;) {
      BigInt v = 0;
      for (unsigned i = 0; i < chunks; ++i) {
        v <<= 64;
        v |= BigInt(next());
      }
      v >>= (chunks * 64 - bits);  // keep exactly `bits` random bits
      if (v < n) return v;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace onerel
