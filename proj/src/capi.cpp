#include "onerel.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "onerel/certify.hpp"
#include "onerel/experiments.hpp"
#include "onerel/json_io.hpp"
#include "onerel/lattice.hpp"
#include "onerel/magnus.hpp"
#include "onerel/matdyn.hpp"
#include "onerel/words.hpp"

using namespace onerel;

struct onerel_hnn {
  HnnData data;
};

namespace {

thread_local std::string g_error;

char* dup_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p != nullptr) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <typename F>
int guarded(char** out, F&& f) {
  if (out == nullptr) {
    g_error = "null output pointer";
    return ONEREL_USAGE;
  }
  *out = nullptr;
  try {
    *out = dup_out(f());
    if (*out == nullptr) {
      g_error = "out of memory";
      return ONEREL_DOMAIN;
    }
    g_error.clear();
    return ONEREL_OK;
  } catch (const usage_error& e) {
    g_error = e.what();
    return ONEREL_USAGE;
  } catch (const domain_error& e) {
    g_error = e.what();
    return ONEREL_DOMAIN;
  } catch (const std::exception& e) {
    g_error = e.what();
    return ONEREL_DOMAIN;
  }
}

std::string need(const char* s, const char* what) {
  if (s == nullptr) throw usage_error(std::string("null ") + what);
  return s;
}

const HnnData& need_hnn(const onerel_hnn* h) {
  if (h == nullptr) throw usage_error("null presentation handle");
  return h->data;
}

int need_letter(const std::string& s) {
  if (s.size() != 1 || s[0] < 'a' || s[0] > 'z')
    throw usage_error("expected a single generator letter a..z, got '" + s + "'");
  return s[0] - 'a' + 1;
}

std::vector<long> parse_long_csv(const std::string& text, const char* what) {
  std::vector<long> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw usage_error(std::string(what) + " must be comma-separated integers, got '" +
                        text + "'");
    out.push_back(std::stol(item));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

extern "C" {

const char* onerel_version(void) { return "1.0.0"; }

const char* onerel_last_error(void) { return g_error.c_str(); }

void onerel_free(char* buf) { std::free(buf); }

int onerel_hnn_new(int base_rank, const char* const* phi, int phi_count, const char* stable,
                   onerel_hnn** out) {
  if (out == nullptr) {
    g_error = "null output pointer";
    return ONEREL_USAGE;
  }
  *out = nullptr;
  try {
    if (phi == nullptr && phi_count != 0) throw usage_error("null phi list");
    std::vector<Word> images;
    for (int i = 0; i < phi_count; ++i)
      images.push_back(Word::parse(need(phi[i], "phi word"), base_rank));
    HnnData h = make_hnn(base_rank, std::move(images),
                         stable == nullptr ? std::string("t") : std::string(stable));
    *out = new onerel_hnn{std::move(h)};
    g_error.clear();
    return ONEREL_OK;
  } catch (const usage_error& e) {
    g_error = e.what();
    return ONEREL_USAGE;
  } catch (const std::exception& e) {
    g_error = e.what();
    return ONEREL_DOMAIN;
  }
}

int onerel_hnn_named(const char* name, onerel_hnn** out) {
  if (out == nullptr) {
    g_error = "null output pointer";
    return ONEREL_USAGE;
  }
  *out = nullptr;
  try {
    const std::string n = need(name, "group name");
    HnnData h;
    if (n == "HT" || n == "ht") {
      h = make_hnn(2, {Word::parse("ab", 2), Word::parse("ba", 2)});
    } else if (n == "BS12" || n == "bs12") {
      h = make_hnn(1, {Word::parse("aa", 1)});
    } else {
      throw usage_error("unknown group '" + n + "'; known: HT, BS12");
    }
    *out = new onerel_hnn{std::move(h)};
    g_error.clear();
    return ONEREL_OK;
  } catch (const usage_error& e) {
    g_error = e.what();
    return ONEREL_USAGE;
  } catch (const std::exception& e) {
    g_error = e.what();
    return ONEREL_DOMAIN;
  }
}

void onerel_hnn_destroy(onerel_hnn* h) { delete h; }

int onerel_hnn_describe(const onerel_hnn* h, char** out_json) {
  return guarded(out_json, [&] { return hnn_json(need_hnn(h)).dump(); });
}

int onerel_sample(int model, int rank, int max_len, int count, unsigned long long seed,
                  char** out_json) {
  return guarded(out_json, [&] {
    if (model != 1 && model != 2) throw usage_error("model must be 1 or 2");
    if (count < 1) throw usage_error("count must be positive");
    const Sampler sampler(rank, max_len);
    Rng rng(seed);
    std::vector<std::string> words;
    words.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
      words.push_back(model == 1 ? sampler.reduced(rng).str() : sampler.cyclic(rng).str());
    return samples_json(model, rank, max_len, seed, words).dump();
  });
}

int onerel_brown(const char* word, int rank, char** out_json) {
  return guarded(out_json, [&] {
    const CyclicWord r = CyclicWord::parse(need(word, "word"), rank);
    return brown_json(r, brown_verdict(r)).dump();
  });
}

int onerel_goodness(const char* word, int rank, int repair, char** out_json) {
  return guarded(out_json, [&] {
    const CyclicWord r = CyclicWord::parse(need(word, "word"), rank);
    const bool good = is_good(r);
    if (r.rank() == 3) {
      const HullAnalysis hull = hull_analysis(r);
      if (!good && repair != 0) {
        const CyclicWord fixed = make_good(r);
        return goodness_json(r, good, &hull, &fixed).dump();
      }
      return goodness_json(r, good, &hull, nullptr).dump();
    }
    return goodness_json(r, good, nullptr, nullptr).dump();
  });
}

int onerel_magnus(const char* word, int rank, const char* stable_letter, char** out_json) {
  return guarded(out_json, [&] {
    const int t_gen = need_letter(need(stable_letter, "stable letter"));
    const CyclicWord r = CyclicWord::parse(need(word, "word"), rank);
    return magnus_json(magnus_rewrite(r, t_gen)).dump();
  });
}

int onerel_extract(const char* word, int rank, const char* stable_letter, char** out_json) {
  return guarded(out_json, [&] {
    const int t_gen = need_letter(need(stable_letter, "stable letter"));
    const CyclicWord r = CyclicWord::parse(need(word, "word"), rank);
    return extract_json(hnn_extract(magnus_rewrite(r, t_gen))).dump();
  });
}

int onerel_normalform(const onerel_hnn* h, const char* word, char** out_json) {
  return guarded(out_json, [&] {
    const HnnData& data = need_hnn(h);
    const std::string w = need(word, "word");
    return normalform_json(data, w, hnn_normal_form(data, w)).dump();
  });
}

int onerel_smallcancel(const char* const* words, int word_count, int rank, long lambda_num,
                       long lambda_den, char** out_json) {
  return guarded(out_json, [&] {
    if (words == nullptr || word_count < 1) throw usage_error("need at least one word");
    std::vector<CyclicWord> ws;
    for (int i = 0; i < word_count; ++i)
      ws.push_back(CyclicWord::parse(need(words[i], "word"), rank));
    return smallcancel_json(small_cancellation(ws, lambda_num, lambda_den)).dump();
  });
}

int onerel_embed(const char* word, int rank, long n_override, char** out_json) {
  return guarded(out_json, [&] {
    const CyclicWord r = CyclicWord::parse(need(word, "word"), rank);
    const EmbedResult res = embed(r, n_override);
    Json j = embed_json(res);
    j["image_status"] = to_string(brown_verdict(res.image).status);
    return j.dump();
  });
}

int onerel_largeness(long g, long r, long m, char** out_json) {
  return guarded(out_json, [&] { return largeness_json(baumslag_pride(g, r, m)).dump(); });
}

int onerel_largeness_words(const char* const* words, int word_count, int rank,
                           const char* stable_letter, long n, char** out_json) {
  return guarded(out_json, [&] {
    if (words == nullptr || word_count < 1) throw usage_error("need at least one relator");
    std::vector<Word> relators;
    for (int i = 0; i < word_count; ++i)
      relators.push_back(Word::parse(need(words[i], "relator"), rank));
    const int t_gen = need_letter(stable_letter);
    return largeness_json(largeness_presentation(relators, t_gen, n)).dump();
  });
}

int onerel_period(const onerel_hnn* h, unsigned long long modulus, int adjoint,
                  char** out_json) {
  return guarded(out_json, [&] {
    const HnnData& data = need_hnn(h);
    const MatTuple start = reduce_tuple(sanov_seed(data.base_rank), modulus);
    return cycle_json(modulus, find_cycle(data, start, adjoint != 0)).dump();
  });
}

int onerel_hensel(const onerel_hnn* h, long p, int depth, int adjoint, char** out_json) {
  return guarded(out_json, [&] {
    const HnnData& data = need_hnn(h);
    return hensel_json(hensel_check(data, sanov_seed(data.base_rank), p, depth, adjoint != 0))
        .dump();
  });
}

int onerel_quasifixed(const onerel_hnn* h, int q, int m, int s, int sl2_only, int workers,
                      char** out_json) {
  return guarded(out_json, [&] {
    QuasiFixedQuery query;
    query.q = q;
    query.m = m;
    query.s = s;
    query.phi = need_hnn(h);
    query.sl2_only = sl2_only != 0;
    query.workers = workers;
    const QuasiFixedResult res = quasi_fixed_search(query, query.phi.base_rank);
    return quasifixed_json(Fq(q, m), res).dump();
  });
}

int onerel_certify(const onerel_hnn* h, const char* word, const char* primes_csv, int e_cap,
                   int parallel, char** out_json) {
  return guarded(out_json, [&] {
    const HnnData& data = need_hnn(h);
    const Word w = Word::parse(need(word, "word"), data.base_rank);
    std::vector<long> primes = {5, 7, 11, 13};
    if (primes_csv != nullptr) primes = parse_long_csv(primes_csv, "primes");
    return certify_json(certify(data, w, primes, e_cap, parallel != 0)).dump();
  });
}

int onerel_verify(const char* certificate_json, char** out_json) {
  return guarded(out_json, [&] {
    const Certificate c = certificate_from_json(need(certificate_json, "certificate"));
    const bool ok = verify(c);
    return Json{{"verified", ok},
                {"word", c.w.str()},
                {"p", c.p},
                {"e", c.e},
                {"modulus", std::to_string(c.modulus)},
                {"ell", c.ell}}
        .dump();
  });
}

int onerel_experiment(const char* kind, int k, const char* lengths_csv, long trials,
                      unsigned long long seed, int workers, long lambda_num, long lambda_den,
                      int keep_samples, int csv, double* elapsed_seconds, char** out) {
  return guarded(out, [&] {
    const std::string kd = need(kind, "experiment kind");
    ExperimentSpec spec;
    spec.k = k;
    for (long v : parse_long_csv(need(lengths_csv, "lengths"), "lengths"))
      spec.lengths.push_back(static_cast<int>(v));
    spec.trials = trials;
    spec.seed = seed;
    spec.workers = workers;
    spec.keep_samples = keep_samples != 0;
    ExperimentReport rep;
    if (kd == "p_good")
      rep = run_p_good(spec);
    else if (kd == "hull_goodness")
      rep = run_hull_goodness(spec);
    else if (kd == "hull_growth")
      rep = run_hull_growth(spec);
    else if (kd == "small_cancellation")
      rep = run_small_cancellation(spec, lambda_num, lambda_den);
    else
      throw usage_error("unknown experiment kind '" + kd +
                        "'; known: p_good, hull_goodness, hull_growth, small_cancellation");
    if (elapsed_seconds != nullptr) *elapsed_seconds = rep.elapsed_seconds;
    return csv != 0 ? report_csv(rep) : report_json(rep).dump();
  });
}

}  // extern "C"
