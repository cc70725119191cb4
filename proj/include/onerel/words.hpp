#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "onerel/base.hpp"

namespace onerel {

// One letter of a free-group word: generator index 1..26 with a sign.
// Serialized as 'a'..'z' for positive letters, 'A'..'Z' for inverses.
struct Letter {
  int gen = 1;   // 1-based
  int sign = 1;  // +1 or -1

  // Total order a < A < b < B < ...; doubles as a dense 0-based encoding.
  int code() const { return 2 * (gen - 1) + (sign < 0 ? 1 : 0); }
  static Letter from_code(int c) { return Letter{c / 2 + 1, (c & 1) ? -1 : 1}; }

  Letter inverse() const { return Letter{gen, -sign}; }
  char to_char() const {
    return static_cast<char>((sign > 0 ? 'a' : 'A') + gen - 1);
  }

  bool operator==(const Letter&) const = default;
  auto operator<=>(const Letter& o) const { return code() <=> o.code(); }
};

// Freely reduced word of a fixed rank. Construction reduces; the letter
// sequence is always reduced from then on.
class Word {
 public:
  Word() = default;
  explicit Word(int rank) : rank_(check_rank(rank)) {}
  Word(int rank, std::vector<Letter> letters);

  // "abA" style; "1" denotes the empty word. Every generator 1..rank may be
  // used; letters beyond the rank are a usage_error.
  static Word parse(const std::string& text, int rank);

  int rank() const { return rank_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  std::string str() const;
  Word inverse() const;
  Word operator*(const Word& rhs) const;  // concatenate + reduce

  bool operator==(const Word&) const = default;

 private:
  static int check_rank(int rank);
  int rank_ = 0;
  std::vector<Letter> letters_;
};

struct CyclicReduction;

// Cyclically reduced word stored as its canonical rotation (the
// lexicographically least one under a < A < b < B < ...). Equality is
// therefore rotation-invariant.
class CyclicWord {
 public:
  CyclicWord() = default;
  // Cyclically reduces w, then canonicalizes the rotation.
  explicit CyclicWord(const Word& w);
  static CyclicWord parse(const std::string& text, int rank);

  int rank() const { return word_.rank(); }
  const std::vector<Letter>& letters() const { return word_.letters(); }
  std::size_t size() const { return word_.size(); }
  bool empty() const { return word_.empty(); }

  // The canonical rotation as a plain (linear) word.
  const Word& word() const { return word_; }
  std::string str() const { return word_.str(); }

  bool operator==(const CyclicWord&) const = default;

 private:
  friend struct CyclicReduction;
  friend CyclicReduction cyclic_reduce(const Word& w);
  Word word_;
};

// w conjugator * cyclic * conjugator^-1 recovers the input word.
struct CyclicReduction {
  CyclicWord cyclic;
  Word conjugator;
};

std::vector<Letter> reduce(std::vector<Letter> letters);
CyclicReduction cyclic_reduce(const Word& w);
long exponent_sum(const Word& w, int gen);
long exponent_sum(const CyclicWord& w, int gen);

// Replaces generator i by images[i-1] (inverse letters by the inverse image)
// and reduces. All images must share a rank, which becomes the result rank.
Word substitute(const Word& w, const std::vector<Word>& images);

// Number of freely reduced (cyclic = false) or cyclically reduced
// (cyclic = true) words of exactly the given length over rank k.
BigInt count_words(int k, int length, bool cyclic);

// Exact uniform samplers over words of length 1..max_len (the empty word is
// excluded by design). Model 1 draws freely reduced words, model 2
// cyclically reduced ones; length frequencies are proportional to the exact
// counts, via transfer-matrix prefix counts.
class Sampler {
 public:
  Sampler(int rank, int max_len);

  Word reduced(Rng& rng) const;               // model 1
  CyclicWord cyclic(Rng& rng) const;          // model 2
  CyclicWord cyclic_exact(int len, Rng& rng) const;
  // The model-2 draw before rotation canonicalization; the distribution is
  // uniform over cyclically reduced strings, which tests rely on.
  Word cyclic_linear(Rng& rng) const;
  Word cyclic_linear_exact(int len, Rng& rng) const;
  // Model 1 deviation knob: uniform unreduced string of length 1..max_len,
  // then reduce. The result can be shorter than 1, including empty.
  Word raw_reduced(Rng& rng) const;

  int rank() const { return rank_; }
  int max_len() const { return max_len_; }

 private:
  Word reduced_exact(int len, Rng& rng) const;

  int rank_;
  int max_len_;
  // Continuation counts for cyclically reduced words relative to a first
  // letter f: index by remaining length; cls_a = current letter == f^-1,
  // cls_b = current letter == f, cls_g = anything else.
  std::vector<BigInt> cls_a_, cls_b_, cls_g_;
  std::vector<BigInt> cum_reduced_, cum_cyclic_;  // cumulative length weights
  BigInt total_reduced_, total_cyclic_;
};

// Folded subgroup graph (Stallings graph) of <generators> <= F_rank.
// After folding each state has at most one outgoing and one incoming edge
// per generator, so words trace deterministically.
class SubgroupGraph {
 public:
  SubgroupGraph(int rank, const std::vector<Word>& generators);

  int rank() const { return rank_; }                 // ambient rank
  int subgroup_rank() const { return edges_ - states_ + 1; }
  int states() const { return states_; }
  int edges() const { return edges_; }
  int base() const { return 0; }

  // -1 where no edge exists.
  int out_edge(int state, int gen) const { return out_[state][gen - 1]; }
  int in_edge(int state, int gen) const { return in_[state][gen - 1]; }

  // True iff w traces from the base state back to the base state.
  bool contains(const Word& w) const;

 private:
  int rank_;
  int states_ = 0;
  int edges_ = 0;
  std::vector<std::vector<int>> out_, in_;  // [state][gen-1]
};

}  // namespace onerel
