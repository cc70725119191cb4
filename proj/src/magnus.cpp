#include "onerel/magnus.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "onerel/base.hpp"
#include "onerel/lattice.hpp"

namespace onerel {

namespace {

constexpr std::size_t kNormalFormCap = 1u << 20;

void check_gen(int rank, int g, const char* what) {
  if (g < 1 || g > rank) throw usage_error(std::string(what) + " out of range");
}

void require_cyclically_reduced(const Word& r) {
  if (r.empty()) throw usage_error("relator must be nonempty");
  const auto& ls = r.letters();
  if (ls.size() >= 2 && ls.front() == ls.back().inverse())
    throw usage_error("relator must be cyclically reduced");
}

std::string indexed_str(char fam, long index, int sign) {
  std::string s(1, fam);
  s += "_" + std::to_string(index);
  if (sign < 0) s += "^-1";
  return s;
}

void append_t_power(std::vector<Letter>& out, int t_gen, long e) {
  for (long i = 0; i < std::labs(e); ++i) out.push_back(Letter{t_gen, e > 0 ? 1 : -1});
}

}  // namespace

MagnusRewrite magnus_rewrite(const Word& r, int t_gen) {
  check_gen(r.rank(), t_gen, "stable generator");
  require_cyclically_reduced(r);
  if (exponent_sum(r, t_gen) != 0)
    throw domain_error("stable generator has nonzero exponent sum");

  MagnusRewrite mr;
  mr.rank = r.rank();
  mr.t_gen = t_gen;
  long level = 0;
  for (const Letter& l : r.letters()) {
    if (l.gen == t_gen) {
      level += l.sign;
      continue;
    }
    mr.rewritten.push_back(IndexedLetter{l.gen, level, l.sign});
    auto [it, fresh] = mr.ranges.emplace(l.gen, std::make_pair(level, level));
    if (!fresh) {
      it->second.first = std::min(it->second.first, level);
      it->second.second = std::max(it->second.second, level);
    }
  }
  return mr;
}

MagnusRewrite magnus_rewrite(const CyclicWord& r, int t_gen) {
  return magnus_rewrite(r.word(), t_gen);
}

Word MagnusRewrite::expand() const {
  std::vector<Letter> out;
  for (const IndexedLetter& il : rewritten) {
    append_t_power(out, t_gen, il.index);
    out.push_back(Letter{il.family, il.sign});
    append_t_power(out, t_gen, -il.index);
  }
  return Word(rank, out);
}

std::string MagnusRewrite::str() const {
  if (rewritten.empty()) return "1";
  std::string out;
  for (const IndexedLetter& il : rewritten) {
    if (!out.empty()) out += ' ';
    out += indexed_str(static_cast<char>('a' + il.family - 1), il.index, il.sign);
  }
  return out;
}

HnnData make_hnn(int base_rank, std::vector<Word> phi, std::string stable) {
  if (base_rank < 0 || base_rank > 26) throw usage_error("base rank out of range");
  if (static_cast<int>(phi.size()) != base_rank)
    throw usage_error("endomorphism must provide one image per base generator");
  for (const Word& w : phi) {
    if (w.rank() != base_rank) throw usage_error("phi image has wrong rank");
    if (w.empty()) throw usage_error("phi image must be nonempty");
  }
  HnnData h;
  h.base_rank = base_rank;
  h.phi = std::move(phi);
  h.stable = std::move(stable);
  return h;
}

std::string HnnData::presentation() const {
  std::ostringstream os;
  os << "< ";
  for (int j = 1; j <= base_rank; ++j) os << static_cast<char>('a' + j - 1) << ", ";
  os << stable << " |";
  for (int j = 1; j <= base_rank; ++j) {
    os << ' ' << stable << ' ' << static_cast<char>('a' + j - 1) << ' ' << stable
       << "^-1 = " << phi[j - 1].str();
    if (j < base_rank) os << ',';
  }
  os << " >";
  return os.str();
}

bool phi_injective_rank_check(const HnnData& h) {
  if (h.base_rank == 0) return true;
  SubgroupGraph g(h.base_rank, h.phi);
  return g.subgroup_rank() == h.base_rank;
}

HnnExtractResult hnn_extract(const MagnusRewrite& mr) {
  HnnExtractResult res;
  if (mr.rewritten.empty()) {
    res.reason = "relator has no non-stable letters";
    return res;
  }
  if (mr.ranges.size() > 1) {
    res.reason = "more than one non-stable generator occurs, so no finitely "
                 "generated base exists";
    return res;
  }
  const auto [lo, hi] = mr.ranges.begin()->second;
  res.lo = lo;
  res.hi = hi;
  long at_lo = 0, at_hi = 0;
  for (const IndexedLetter& il : mr.rewritten) {
    at_lo += il.index == lo;
    at_hi += il.index == hi;
  }
  const bool use_min = at_lo == 1;
  if (!use_min && at_hi != 1) {
    res.reason = "both extreme Magnus indices occur more than once";
    return res;
  }
  res.min_side = use_min;

  const long m = hi - lo;  // window size after eliminating one letter
  if (m > 26) throw usage_error("base rank exceeds 26");
  const long e = use_min ? lo : hi;
  std::size_t p = 0;
  while (mr.rewritten[p].index != e) ++p;

  // Solve the cyclic relator for the eliminated letter: rotate its unique
  // occurrence to the front; the remainder (or its inverse) is the image.
  const std::size_t L = mr.rewritten.size();
  std::vector<IndexedLetter> rest;
  for (std::size_t i = 1; i < L; ++i) rest.push_back(mr.rewritten[(p + i) % L]);
  auto base_gen = [&](long i) { return static_cast<int>(use_min ? i - lo : i - lo + 1); };
  std::vector<Letter> expr;
  if (mr.rewritten[p].sign < 0) {
    for (const IndexedLetter& il : rest) expr.push_back(Letter{base_gen(il.index), il.sign});
  } else {
    for (auto it = rest.rbegin(); it != rest.rend(); ++it)
      expr.push_back(Letter{base_gen(it->index), -it->sign});
  }
  const Word image(static_cast<int>(m), expr);

  HnnData h;
  h.base_rank = static_cast<int>(m);
  if (use_min) {
    // stable letter t^-1 shifts every index down; the bottom letter is the
    // solved expression, the others drop by one
    if (m >= 1) h.phi.push_back(image);
    for (long j = 2; j <= m; ++j)
      h.phi.push_back(Word(static_cast<int>(m), {Letter{static_cast<int>(j - 1), 1}}));
    h.stable = std::string(1, Letter{mr.t_gen, -1}.to_char());
  } else {
    for (long j = 1; j < m; ++j)
      h.phi.push_back(Word(static_cast<int>(m), {Letter{static_cast<int>(j + 1), 1}}));
    if (m >= 1) h.phi.push_back(image);
    h.stable = std::string(1, Letter{mr.t_gen, 1}.to_char());
  }
  res.extracted = true;
  res.data = std::move(h);
  return res;
}

std::string NormalForm::str() const {
  std::string out(static_cast<std::size_t>(k), 'T');
  if (!g.empty()) out += g.str();
  out += std::string(static_cast<std::size_t>(l), 't');
  return out.empty() ? "1" : out;
}

NormalForm hnn_normal_form(const HnnData& h, const std::string& w) {
  if (h.base_rank > 19)
    throw usage_error("base rank above 19 collides with the stable letter t");
  auto capped = [](const Word& g) {
    if (g.size() > kNormalFormCap) throw domain_error("normal form exceeded the size cap");
    return g;
  };
  long k = 0, l = 0;
  Word g(h.base_rank);
  for (char c : w) {
    if (c == ' ' || c == '1') continue;
    if (!std::isalpha(static_cast<unsigned char>(c))) throw usage_error("bad letter in word");
    const char low = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const int sign = std::islower(static_cast<unsigned char>(c)) ? 1 : -1;
    if (low == 't') {
      if (sign > 0) {
        ++l;
      } else if (l > 0) {
        --l;
      } else {
        ++k;
        g = capped(substitute(g, h.phi));
      }
      continue;
    }
    const int gen = low - 'a' + 1;
    if (gen > h.base_rank) throw usage_error("letter outside the base alphabet");
    Word x(h.base_rank, {Letter{gen, sign}});
    for (long i = 0; i < l; ++i) x = capped(substitute(x, h.phi));
    g = capped(g * x);
  }
  NormalForm nf;
  nf.k = k;
  nf.g = g;
  nf.l = l;
  return nf;
}

namespace {

// Rolling hashes over the doubled letter-code string, two moduli.
struct PlaceHash {
  static constexpr std::uint64_t kM1 = 1000000007ull, kM2 = 998244353ull;
  static constexpr std::uint64_t kB1 = 131, kB2 = 137;
  std::size_t len = 0;
  std::vector<int> codes;  // doubled
  std::vector<std::uint64_t> h1, h2, p1, p2;

  void build(const std::vector<int>& single) {
    len = single.size();
    codes = single;
    codes.insert(codes.end(), single.begin(), single.end());
    const std::size_t n = codes.size();
    h1.assign(n + 1, 0);
    h2.assign(n + 1, 0);
    p1.assign(n + 1, 1);
    p2.assign(n + 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
      h1[i + 1] = (h1[i] * kB1 + static_cast<std::uint64_t>(codes[i]) + 1) % kM1;
      h2[i + 1] = (h2[i] * kB2 + static_cast<std::uint64_t>(codes[i]) + 1) % kM2;
      p1[i + 1] = p1[i] * kB1 % kM1;
      p2[i + 1] = p2[i] * kB2 % kM2;
    }
  }
  std::uint64_t key(std::size_t pos, std::size_t d) const {
    const std::uint64_t a = (h1[pos + d] + kM1 * kM1 - h1[pos] * p1[d]) % kM1;
    const std::uint64_t b = (h2[pos + d] + kM2 * kM2 - h2[pos] * p2[d]) % kM2;
    return a << 32 | b;
  }
  bool same(std::size_t pos, const PlaceHash& o, std::size_t opos, std::size_t d) const {
    return std::equal(codes.begin() + pos, codes.begin() + pos + d, o.codes.begin() + opos);
  }
};

}  // namespace

SmallCancellationReport small_cancellation(const std::vector<CyclicWord>& ws,
                                           long lambda_num, long lambda_den) {
  if (ws.empty()) throw usage_error("empty collection");
  if (lambda_num < 1 || lambda_den < 1 || lambda_num >= lambda_den)
    throw usage_error("lambda must lie strictly between 0 and 1");
  for (const CyclicWord& w : ws)
    if (w.empty()) throw usage_error("collection words must be nonempty");

  // One hashed string per word per orientation.
  const std::size_t W = ws.size();
  std::vector<PlaceHash> places(2 * W);
  for (std::size_t i = 0; i < W; ++i) {
    std::vector<int> plus, minus;
    for (const Letter& l : ws[i].letters()) plus.push_back(l.code());
    const Word inv = ws[i].word().inverse();  // keep alive: letters() views its storage
    for (const Letter& l : inv.letters()) minus.push_back(l.code());
    places[2 * i].build(plus);
    places[2 * i + 1].build(minus);
  }

  // Is some length-d window of word `target` repeated at any other slot?
  auto has_piece = [&](std::size_t target, std::size_t d) {
    if (d == 0) return true;
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::size_t, std::size_t>>> seen;
    for (std::size_t p = 0; p < places.size(); ++p) {
      if (places[p].len < d) continue;
      for (std::size_t o = 0; o < places[p].len; ++o)
        seen[places[p].key(o, d)].push_back({p, o});
    }
    for (std::size_t p : {2 * target, 2 * target + 1}) {
      if (places[p].len < d) continue;
      for (std::size_t o = 0; o < places[p].len; ++o) {
        auto it = seen.find(places[p].key(o, d));
        if (it == seen.end()) continue;
        for (const auto& [q, qo] : it->second) {
          if (q == p && qo == o) continue;
          if (places[p].same(o, places[q], qo, d)) return true;
        }
      }
    }
    return false;
  };

  SmallCancellationReport rep;
  rep.words = ws;
  rep.lambda_num = lambda_num;
  rep.lambda_den = lambda_den;
  for (std::size_t i = 0; i < W; ++i) {
    const long L = static_cast<long>(ws[i].size());
    long lo = 0, hi = L;  // invariant: has_piece(lo), !has_piece(hi+1)
    while (lo < hi) {
      const long mid = (lo + hi + 1) / 2;
      if (has_piece(i, static_cast<std::size_t>(mid)))
        lo = mid;
      else
        hi = mid - 1;
    }
    rep.max_piece.push_back(static_cast<int>(lo));
    rep.satisfies.push_back(lo * lambda_den < lambda_num * L);
    rep.all_satisfy = rep.all_satisfy && rep.satisfies.back();
    rep.lambda_star = std::max(rep.lambda_star, static_cast<double>(lo) / static_cast<double>(L));
  }
  return rep;
}

std::vector<Word> ss_embedding_words(int k, long n) {
  if (k < 2) throw usage_error("need at least two generators");
  if (n < 1) throw usage_error("block parameter must be positive");
  auto block = [](std::vector<Letter>& out, long aexp, long bpow) {
    for (long i = 0; i < std::labs(aexp); ++i) out.push_back(Letter{1, aexp > 0 ? 1 : -1});
    for (long i = 0; i < bpow; ++i) out.push_back(Letter{2, 1});
  };
  std::vector<Word> out;
  {
    std::vector<Letter> ls;
    for (long j = 1; j <= n + 1; ++j) block(ls, j, 1);
    for (long j = -(n + 1); j <= -1; ++j) block(ls, j, 1);
    out.emplace_back(2, ls);
  }
  for (int i = 2; i <= k; ++i) {
    std::vector<Letter> ls;
    const long stop = i == k ? -2 : -1;  // the last word omits the a^-1 block
    for (long j = 1; j <= n; ++j) block(ls, j, i);
    for (long j = -n; j <= stop; ++j) block(ls, j, i);
    out.emplace_back(2, ls);
  }
  return out;
}

EmbedResult embed(const CyclicWord& r, long n_override) {
  const int k = r.rank();
  if (k < 3) throw usage_error("embedding needs rank at least 3");
  if (r.empty()) throw usage_error("relator must be nonempty");
  const Word& w = r.word();

  for (int t = 1; t <= k; ++t) {
    if (exponent_sum(w, t) != 0) continue;
    for (int inv = 0; inv < 2; ++inv) {
      for (int x1 = 1; x1 <= k; ++x1) {
        if (x1 == t) continue;
        auto idx = magnus_indices(w, t, x1);
        if (idx.empty()) continue;
        long mx = LONG_MIN;
        int cnt = 0;
        for (const auto& [sg, raw] : idx) {
          const long i = inv ? -raw : raw;
          if (i > mx) {
            mx = i;
            cnt = 1;
          } else if (i == mx) {
            ++cnt;
          }
        }
        if (cnt != 1) continue;

        EmbedResult res;
        res.t_gen = t;
        res.t_inverted = inv == 1;
        res.x1_gen = x1;
        res.role.assign(k, 0);
        res.role[t - 1] = k;
        res.role[x1 - 1] = 1;
        int next = 2;
        for (int j = 1; j <= k; ++j)
          if (res.role[j - 1] == 0) res.role[j - 1] = next++;

        long span_lo = LONG_MAX, span_hi = LONG_MIN;
        for (int j = 1; j <= k; ++j) {
          if (j == t) continue;
          for (const auto& [sg, raw] : magnus_indices(w, t, j)) {
            const long i = res.t_inverted ? -raw : raw;
            span_lo = std::min(span_lo, i);
            span_hi = std::max(span_hi, i);
          }
        }
        res.n = n_override >= 1 ? n_override : span_hi - span_lo + 1;
        res.images = ss_embedding_words(k, res.n);

        std::vector<Word> sub;
        for (int j = 1; j <= k; ++j) {
          Word im = res.images[res.role[j - 1] - 1];
          if (j == t && res.t_inverted) im = im.inverse();
          sub.push_back(im);
        }
        res.image = CyclicWord(substitute(w, sub));
        return res;
      }
    }
  }
  throw domain_error("no generator pairing satisfies the embedding precondition");
}

LargenessData baumslag_pride(long g, long r, long m) {
  if (m < 1) throw usage_error("index span must be positive");
  if (r < 0) throw usage_error("relator count must be nonnegative");
  if (g - r < 2) throw domain_error("need at least two more generators than relators");
  LargenessData d;
  d.g = g;
  d.r = r;
  d.m = m;
  // minimal n with (g-1)(n-m) >= n*r + 1
  const long num = (g - 1) * m + 1, den = g - 1 - r;
  d.n = (num + den - 1) / den;
  d.k_generators = (g - 1) * (d.n - d.m);
  d.k_relators = d.n * d.r;
  return d;
}

Word expand_sletters(const std::vector<SLetter>& ls, int t_gen, int rank, long n) {
  std::vector<Letter> out;
  for (const SLetter& sl : ls) {
    if (sl.is_s) {
      append_t_power(out, t_gen, sl.sign > 0 ? n : -n);
      continue;
    }
    append_t_power(out, t_gen, sl.index);
    out.push_back(Letter{sl.family, sl.sign});
    append_t_power(out, t_gen, -sl.index);
  }
  return Word(rank, out);
}

std::string sletters_str(const std::vector<SLetter>& ls) {
  if (ls.empty()) return "1";
  std::string out;
  for (const SLetter& sl : ls) {
    if (!out.empty()) out += ' ';
    if (sl.is_s)
      out += sl.sign > 0 ? "s" : "s^-1";
    else
      out += "s_" + indexed_str(static_cast<char>('a' + sl.family - 1), sl.index, sl.sign);
  }
  return out;
}

namespace {

std::vector<SLetter> reduce_sletters(std::vector<SLetter> in) {
  std::vector<SLetter> out;
  for (SLetter& sl : in) {
    if (!out.empty() && out.back().is_s == sl.is_s && out.back().family == sl.family &&
        out.back().index == sl.index && out.back().sign == -sl.sign)
      out.pop_back();
    else
      out.push_back(sl);
  }
  return out;
}

}  // namespace

LargenessData largeness_presentation(const std::vector<Word>& relators, int t_gen, long n) {
  if (relators.empty()) throw usage_error("need at least one relator");
  const int g = relators.front().rank();
  check_gen(g, t_gen, "stable generator");
  long m = 0;
  std::vector<long> mins;
  for (const Word& u : relators) {
    if (u.rank() != g) throw usage_error("relators must share one rank");
    if (u.empty()) throw usage_error("relators must be nonempty");
    if (exponent_sum(u, t_gen) != 0)
      throw domain_error("stable generator has nonzero exponent sum");
    long level = 0, lo = LONG_MAX, hi = LONG_MIN;
    for (const Letter& l : u.letters()) {
      if (l.gen == t_gen) {
        level += l.sign;
        continue;
      }
      lo = std::min(lo, level);
      hi = std::max(hi, level);
    }
    mins.push_back(lo);
    m = std::max(m, hi - lo + 1);
  }
  if (n < m) throw usage_error("index n must be at least the relator span");

  LargenessData d;
  d.g = g;
  d.r = static_cast<long>(relators.size());
  d.m = m;
  d.n = n;
  d.k_generators = (g - 1) * (n - m);
  d.k_relators = n * d.r;

  for (std::size_t ri = 0; ri < relators.size(); ++ri) {
    for (long c = 0; c < n; ++c) {
      // conjugate so the shifted window starts at level c, then walk cosets
      std::vector<Letter> conj;
      append_t_power(conj, t_gen, c - mins[ri]);
      for (const Letter& l : relators[ri].letters()) conj.push_back(l);
      append_t_power(conj, t_gen, mins[ri] - c);
      const Word wc(g, conj);

      RewrittenRelator rr;
      rr.c = static_cast<int>(c);
      long state = 0;  // current coset representative exponent in [0, n)
      for (const Letter& l : wc.letters()) {
        if (l.gen != t_gen) {
          rr.letters.push_back(SLetter{false, l.gen, state, l.sign});
          continue;
        }
        if (l.sign > 0) {
          if (state == n - 1) rr.letters.push_back(SLetter{true, 0, 0, 1});
          state = (state + 1) % n;
        } else {
          if (state == 0) rr.letters.push_back(SLetter{true, 0, 0, -1});
          state = (state + n - 1) % n;
        }
      }
      rr.letters = reduce_sletters(std::move(rr.letters));
      std::vector<SLetter> quot;
      for (const SLetter& sl : rr.letters)
        if (sl.is_s || sl.index >= m) quot.push_back(sl);
      d.quotient_relators.push_back(reduce_sletters(std::move(quot)));
      d.relators.push_back(std::move(rr));
    }
  }
  return d;
}

}  // namespace onerel
