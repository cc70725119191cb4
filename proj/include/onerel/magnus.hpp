#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "onerel/words.hpp"

namespace onerel {

// Rewriting a zero-t-sum relator over the indexed letters b_{j,i} = t^i x_j t^-i,
// where i is the prefix t-exponent at the occurrence. Reading order is that of
// the linear input word; rotating the input shifts all indices.

struct IndexedLetter {
  int family;  // ambient generator j, never the stable one
  long index;  // Magnus index i
  int sign;    // +1 or -1
  auto operator<=>(const IndexedLetter&) const = default;
};

struct MagnusRewrite {
  int rank = 0;   // ambient rank
  int t_gen = 0;  // stable generator
  std::vector<IndexedLetter> rewritten;
  std::map<int, std::pair<long, long>> ranges;  // family -> [min,max] index

  Word expand() const;  // substitute b_{j,i} back and reduce; recovers the input
  std::string str() const;
};

MagnusRewrite magnus_rewrite(const Word& r, int t_gen);
MagnusRewrite magnus_rewrite(const CyclicWord& r, int t_gen);

// Ascending HNN data: base F_m, endomorphism phi, and the stable letter.
struct HnnData {
  int base_rank = 0;
  std::vector<Word> phi;  // phi[j] = image of generator j+1, a word over the base
  std::string stable = "t";

  std::string presentation() const;
};

HnnData make_hnn(int base_rank, std::vector<Word> phi, std::string stable = "t");

// Image rank m proves phi injective: a surjection F_m -> F_m is injective
// because free groups are Hopfian.
bool phi_injective_rank_check(const HnnData& h);

struct HnnExtractResult {
  bool extracted = false;
  HnnData data;
  long lo = 0, hi = 0;    // index window of the single Magnus family
  bool min_side = false;  // true when the bottom letter was eliminated
  std::string reason;     // set when extraction fails
};

// Eliminate the unique bottom (preferred) or top indexed letter and present
// the group as an ascending HNN extension of the free group on the window.
HnnExtractResult hnn_extract(const MagnusRewrite& mr);

// t^-k g t^l with k, l >= 0; l - k equals the t-exponent sum of the input.
struct NormalForm {
  long k = 0;
  Word g;
  long l = 0;
  std::string str() const;
};

// Input uses letters a.. for base generators and t/T for the stable letter,
// so the base rank is capped at 19 here.
NormalForm hnn_normal_form(const HnnData& h, const std::string& w);

// C'(lambda) checking. A piece is a word occurring at two distinct cyclic
// slots of the symmetrized collection (all rotations of all words and their
// inverses); two slots of the same word count, so proper powers score 1.
struct SmallCancellationReport {
  std::vector<CyclicWord> words;
  std::vector<int> max_piece;    // per word: longest piece occurring in it
  std::vector<bool> satisfies;   // max_piece < lambda * length, exact rational
  bool all_satisfy = true;
  double lambda_star = 0.0;      // max of max_piece / length
  long lambda_num = 0, lambda_den = 1;
};

SmallCancellationReport small_cancellation(const std::vector<CyclicWord>& ws,
                                           long lambda_num, long lambda_den);

// The k embedding words over {a,b} with block parameter n. For n = 1 the
// descending a-run of the last word is empty, leaving just "a b^k".
std::vector<Word> ss_embedding_words(int k, long n);

struct EmbedResult {
  int t_gen = 0;  // ambient generator playing the stable role
  bool t_inverted = false;
  int x1_gen = 0;             // ambient generator playing the first base role
  std::vector<int> role;      // role[j-1] in 1..k for ambient generator j
  long n = 0;                 // chosen block parameter (index span by default)
  std::vector<Word> images;   // role i maps to images[i-1]
  CyclicWord image;           // substituted relator, cyclically reduced
};

// Search generator pairings (with stable-letter inversion) for one with zero
// stable-exponent sum and a unique maximal Magnus index of the first-role
// generator, then substitute the embedding words.
EmbedResult embed(const CyclicWord& r, long n_override = 0);

// Largeness bookkeeping: subgroup of index n generated by s = t^n and
// s_{j,i} = t^i x_j t^-i for 0 <= i < n.
struct SLetter {
  bool is_s = false;
  int family = 0;  // meaningful when !is_s
  long index = 0;
  int sign = 1;
  auto operator<=>(const SLetter&) const = default;
};

struct RewrittenRelator {
  int c = 0;  // which conjugate t^c u t^-c
  std::vector<SLetter> letters;
};

struct LargenessData {
  long g = 0, r = 0, m = 0, n = 0;
  long k_generators = 0;  // (g-1)(n-m)
  long k_relators = 0;    // n*r
  std::vector<RewrittenRelator> relators;
  std::vector<std::vector<SLetter>> quotient_relators;  // indices < m killed
};

// Parameters only: minimal n with (g-1)(n-m) >= n*r + 1.
LargenessData baumslag_pride(long g, long r, long m);

// Full Reidemeister-Schreier rewriting of the n relator conjugates. Each
// relator is first shifted so its own index window starts at 0.
LargenessData largeness_presentation(const std::vector<Word>& relators, int t_gen, long n);

Word expand_sletters(const std::vector<SLetter>& ls, int t_gen, int rank, long n);
std::string sletters_str(const std::vector<SLetter>& ls);

}  // namespace onerel
