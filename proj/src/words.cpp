#include "onerel/words.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace onerel {

namespace {

// Booth's least-rotation algorithm over letter codes; returns the start
// index of the lexicographically least rotation.
std::size_t least_rotation(const std::vector<Letter>& s) {
  const std::size_t n = s.size();
  if (n <= 1) return 0;
  std::vector<std::ptrdiff_t> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const int sj = s[j % n].code();
    std::ptrdiff_t i = f[j - k - 1];
    while (i != -1 && sj != s[(k + i + 1) % n].code()) {
      if (sj < s[(k + i + 1) % n].code()) k = j - i - 1;
      i = f[i];
    }
    if (sj != s[(k + i + 1) % n].code()) {
      if (sj < s[k % n].code()) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k;
}

std::vector<Letter> rotate(const std::vector<Letter>& s, std::size_t start) {
  std::vector<Letter> r;
  r.reserve(s.size());
  r.insert(r.end(), s.begin() + start, s.end());
  r.insert(r.end(), s.begin(), s.begin() + start);
  return r;
}

}  // namespace

int Word::check_rank(int rank) {
  if (rank < 0 || rank > 26)
    throw usage_error("rank must be between 0 and 26, got " + std::to_string(rank));
  return rank;
}

Word::Word(int rank, std::vector<Letter> letters) : rank_(check_rank(rank)) {
  for (const Letter& l : letters) {
    if (l.gen < 1 || l.gen > rank_ || (l.sign != 1 && l.sign != -1))
      throw usage_error("letter out of range for rank " + std::to_string(rank_));
  }
  letters_ = reduce(std::move(letters));
}

Word Word::parse(const std::string& text, int rank) {
  if (text == "1") return Word(rank);
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (char c : text) {
    if (c >= 'a' && c <= 'z')
      letters.push_back(Letter{c - 'a' + 1, 1});
    else if (c >= 'A' && c <= 'Z')
      letters.push_back(Letter{c - 'A' + 1, -1});
    else
      throw usage_error(std::string("bad character '") + c + "' in word");
  }
  return Word(rank, std::move(letters));
}

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::string s;
  s.reserve(letters_.size());
  for (const Letter& l : letters_) s.push_back(l.to_char());
  return s;
}

Word Word::inverse() const {
  std::vector<Letter> inv;
  inv.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    inv.push_back(it->inverse());
  Word w(rank_);
  w.letters_ = std::move(inv);  // inverse of a reduced word is reduced
  return w;
}

Word Word::operator*(const Word& rhs) const {
  if (rank_ != rhs.rank_) throw usage_error("rank mismatch in word product");
  std::vector<Letter> cat = letters_;
  cat.insert(cat.end(), rhs.letters_.begin(), rhs.letters_.end());
  Word w(rank_);
  w.letters_ = reduce(std::move(cat));
  return w;
}

std::vector<Letter> reduce(std::vector<Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (const Letter& l : letters) {
    if (!out.empty() && out.back() == l.inverse())
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

CyclicWord::CyclicWord(const Word& w) { *this = cyclic_reduce(w).cyclic; }

CyclicWord CyclicWord::parse(const std::string& text, int rank) {
  return CyclicWord(Word::parse(text, rank));
}

CyclicReduction cyclic_reduce(const Word& w) {
  std::vector<Letter> mid = w.letters();
  std::vector<Letter> front;
  while (mid.size() >= 2 && mid.front() == mid.back().inverse()) {
    front.push_back(mid.front());
    mid.erase(mid.begin());
    mid.pop_back();
  }
  const std::size_t start = least_rotation(mid);
  // w = front * prefix * rotation * prefix^-1 * front^-1
  std::vector<Letter> conj = front;
  conj.insert(conj.end(), mid.begin(), mid.begin() + start);

  CyclicReduction r;
  r.conjugator = Word(w.rank(), std::move(conj));
  Word canon(w.rank(), rotate(mid, start));
  CyclicWord c;
  c.word_ = std::move(canon);
  r.cyclic = std::move(c);
  return r;
}

long exponent_sum(const Word& w, int gen) {
  long s = 0;
  for (const Letter& l : w.letters())
    if (l.gen == gen) s += l.sign;
  return s;
}

long exponent_sum(const CyclicWord& w, int gen) { return exponent_sum(w.word(), gen); }

Word substitute(const Word& w, const std::vector<Word>& images) {
  if (static_cast<int>(images.size()) != w.rank())
    throw usage_error("substitute needs one image per generator");
  int target_rank = images.empty() ? 0 : images[0].rank();
  for (const Word& im : images)
    if (im.rank() != target_rank) throw usage_error("substitute images have mixed ranks");
  std::vector<Letter> out;
  for (const Letter& l : w.letters()) {
    const Word& im = images[l.gen - 1];
    if (l.sign > 0)
      out.insert(out.end(), im.letters().begin(), im.letters().end());
    else {
      const Word inv = im.inverse();
      out.insert(out.end(), inv.letters().begin(), inv.letters().end());
    }
  }
  return Word(target_rank, std::move(out));
}

BigInt count_words(int k, int length, bool cyclic) {
  if (k < 1 || k > 26) throw usage_error("count_words: rank must be 1..26");
  if (length < 0) throw usage_error("count_words: negative length");
  if (length == 0) return 1;
  const int a = 2 * k;  // alphabet size
  if (!cyclic) {
    // transfer DP over last-letter states
    std::vector<BigInt> cur(a, 1);
    for (int l = 2; l <= length; ++l) {
      BigInt total = std::accumulate(cur.begin(), cur.end(), BigInt(0));
      std::vector<BigInt> nxt(a);
      for (int c = 0; c < a; ++c) nxt[c] = total - cur[c ^ 1];  // forbid the inverse
      cur = std::move(nxt);
    }
    return std::accumulate(cur.begin(), cur.end(), BigInt(0));
  }
  // Cyclic: fix the first letter f; count reduced continuations whose final
  // letter is not f^-1, tracking only the class of the current letter
  // (equal to f^-1, equal to f, or neither).
  BigInt ca = 0, cb = 1, cg = 1;  // remaining length 0
  for (int r = 1; r < length; ++r) {
    BigInt na = ca + (2 * k - 2) * cg;
    BigInt nb = cb + (2 * k - 2) * cg;
    BigInt ng = (k >= 2) ? ca + cb + (2 * k - 3) * cg : BigInt(0);
    ca = std::move(na);
    cb = std::move(nb);
    cg = std::move(ng);
  }
  return BigInt(a) * cb;
}

Sampler::Sampler(int rank, int max_len) : rank_(rank), max_len_(max_len) {
  if (rank < 1 || rank > 26) throw usage_error("Sampler: rank must be 1..26");
  if (max_len < 1) throw usage_error("Sampler: max length must be >= 1");
  const int n = max_len;
  cls_a_.assign(n, BigInt(0));
  cls_b_.assign(n, BigInt(0));
  cls_g_.assign(n, BigInt(0));
  cls_a_[0] = 0;
  cls_b_[0] = 1;
  cls_g_[0] = (rank >= 2) ? 1 : 0;
  for (int r = 1; r < n; ++r) {
    cls_a_[r] = cls_a_[r - 1] + (2 * rank - 2) * cls_g_[r - 1];
    cls_b_[r] = cls_b_[r - 1] + (2 * rank - 2) * cls_g_[r - 1];
    cls_g_[r] = (rank >= 2) ? cls_a_[r - 1] + cls_b_[r - 1] + (2 * rank - 3) * cls_g_[r - 1]
                            : BigInt(0);
  }
  cum_reduced_.assign(n + 1, BigInt(0));
  cum_cyclic_.assign(n + 1, BigInt(0));
  BigInt red = 2 * rank;  // count of reduced words of the current length
  for (int l = 1; l <= n; ++l) {
    cum_reduced_[l] = cum_reduced_[l - 1] + red;
    red *= 2 * rank - 1;
    cum_cyclic_[l] = cum_cyclic_[l - 1] + BigInt(2 * rank) * cls_b_[l - 1];
  }
  total_reduced_ = cum_reduced_[n];
  total_cyclic_ = cum_cyclic_[n];
}

namespace {

int pick_length(const std::vector<BigInt>& cum, const BigInt& draw) {
  // first l with cum[l] > draw
  int lo = 1, hi = static_cast<int>(cum.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (cum[mid] > draw) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

}  // namespace

Word Sampler::reduced_exact(int len, Rng& rng) const {
  std::vector<Letter> out;
  out.reserve(len);
  out.push_back(Letter::from_code(static_cast<int>(rng.below(2 * rank_))));
  for (int i = 1; i < len; ++i) {
    const int skip = out.back().inverse().code();
    int c = static_cast<int>(rng.below(2 * rank_ - 1));
    if (c >= skip) ++c;
    out.push_back(Letter::from_code(c));
  }
  return Word(rank_, std::move(out));
}

Word Sampler::reduced(Rng& rng) const {
  const int len = pick_length(cum_reduced_, rng.big_below(total_reduced_));
  return reduced_exact(len, rng);
}

CyclicWord Sampler::cyclic(Rng& rng) const {
  const int len = pick_length(cum_cyclic_, rng.big_below(total_cyclic_));
  return cyclic_exact(len, rng);
}

Word Sampler::cyclic_linear(Rng& rng) const {
  const int len = pick_length(cum_cyclic_, rng.big_below(total_cyclic_));
  return cyclic_linear_exact(len, rng);
}

CyclicWord Sampler::cyclic_exact(int len, Rng& rng) const {
  return CyclicWord(cyclic_linear_exact(len, rng));
}

Word Sampler::cyclic_linear_exact(int len, Rng& rng) const {
  if (len < 1 || len > max_len_) throw usage_error("cyclic_exact: length out of range");
  const Letter first = Letter::from_code(static_cast<int>(rng.below(2 * rank_)));
  const Letter fbar = first.inverse();
  std::vector<Letter> out{first};
  auto weight = [&](int remaining, const Letter& l) -> const BigInt& {
    if (l == fbar) return cls_a_[remaining];
    if (l == first) return cls_b_[remaining];
    return cls_g_[remaining];
  };
  for (int r = len - 1; r >= 1; --r) {
    // candidates: every letter except the inverse of the current last one,
    // weighted by the number of valid completions
    const BigInt total = weight(r, out.back());
    BigInt draw = rng.big_below(total);
    const int skip = out.back().inverse().code();
    Letter chosen{};
    bool found = false;
    for (int c = 0; c < 2 * rank_; ++c) {
      if (c == skip) continue;
      const Letter cand = Letter::from_code(c);
      const BigInt& cw = weight(r - 1, cand);
      if (draw < cw) {
        chosen = cand;
        found = true;
        break;
      }
      draw -= cw;
    }
    if (!found) throw domain_error("cyclic sampler: inconsistent counts");
    out.push_back(chosen);
  }
  // by construction reduced, last != first^-1
  return Word(rank_, std::move(out));
}

Word Sampler::raw_reduced(Rng& rng) const {
  // length weights (2k)^l, l = 1..n
  BigInt pw = 1;
  std::vector<BigInt> cum(max_len_ + 1, BigInt(0));
  for (int l = 1; l <= max_len_; ++l) {
    pw *= 2 * rank_;
    cum[l] = cum[l - 1] + pw;
  }
  const int len = pick_length(cum, rng.big_below(cum[max_len_]));
  std::vector<Letter> raw;
  raw.reserve(len);
  for (int i = 0; i < len; ++i)
    raw.push_back(Letter::from_code(static_cast<int>(rng.below(2 * rank_))));
  return Word(rank_, std::move(raw));
}

SubgroupGraph::SubgroupGraph(int rank, const std::vector<Word>& generators) : rank_(rank) {
  if (rank < 1 || rank > 26) throw usage_error("SubgroupGraph: rank must be 1..26");
  struct Edge {
    int u, g, v;
  };
  std::vector<Edge> edges;
  int n_states = 1;  // 0 = base
  for (const Word& w : generators) {
    if (w.rank() != rank) throw usage_error("SubgroupGraph: generator rank mismatch");
    if (w.empty()) continue;
    int cur = 0;
    const auto& ls = w.letters();
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const int nxt = (i + 1 == ls.size()) ? 0 : n_states++;
      if (ls[i].sign > 0)
        edges.push_back({cur, ls[i].gen, nxt});
      else
        edges.push_back({nxt, ls[i].gen, cur});
      cur = nxt;
    }
  }

  std::vector<int> parent(n_states);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  // Fold to a fixpoint: identical (source, label) edges force their targets
  // together, identical (target, label) edges force their sources together.
  bool changed = true;
  while (changed) {
    changed = false;
    for (Edge& e : edges) {
      e.u = find(e.u);
      e.v = find(e.v);
    }
    auto by_out = [](const Edge& a, const Edge& b) {
      return std::tie(a.u, a.g, a.v) < std::tie(b.u, b.g, b.v);
    };
    std::sort(edges.begin(), edges.end(), by_out);
    for (std::size_t i = 1; i < edges.size(); ++i) {
      const Edge &p = edges[i - 1], &e = edges[i];
      if (p.u == e.u && p.g == e.g && p.v != e.v) {
        parent[find(p.v)] = find(e.v);
        changed = true;
      }
    }
    if (changed) continue;
    auto by_in = [](const Edge& a, const Edge& b) {
      return std::tie(a.v, a.g, a.u) < std::tie(b.v, b.g, b.u);
    };
    std::sort(edges.begin(), edges.end(), by_in);
    for (std::size_t i = 1; i < edges.size(); ++i) {
      const Edge &p = edges[i - 1], &e = edges[i];
      if (p.v == e.v && p.g == e.g && p.u != e.u) {
        parent[find(p.u)] = find(e.u);
        changed = true;
      }
    }
  }

  for (Edge& e : edges) {
    e.u = find(e.u);
    e.v = find(e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.g, a.v) < std::tie(b.u, b.g, b.v);
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) {
                            return a.u == b.u && a.g == b.g && a.v == b.v;
                          }),
              edges.end());

  // compact: base first, then remaining representatives in id order
  std::vector<int> label(n_states, -1);
  label[find(0)] = 0;
  int next = 1;
  for (int s = 0; s < n_states; ++s)
    if (find(s) == s && label[s] < 0) label[s] = next++;
  states_ = next;
  edges_ = static_cast<int>(edges.size());
  out_.assign(states_, std::vector<int>(rank_, -1));
  in_.assign(states_, std::vector<int>(rank_, -1));
  for (const Edge& e : edges) {
    out_[label[e.u]][e.g - 1] = label[e.v];
    in_[label[e.v]][e.g - 1] = label[e.u];
  }
}

bool SubgroupGraph::contains(const Word& w) const {
  if (w.rank() != rank_) throw usage_error("membership: rank mismatch");
  int cur = 0;
  for (const Letter& l : w.letters()) {
    cur = (l.sign > 0) ? out_[cur][l.gen - 1] : in_[cur][l.gen - 1];
    if (cur < 0) return false;
  }
  return cur == 0;
}

}  // namespace onerel
