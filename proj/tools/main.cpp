// Command-line front end. Everything goes through the C surface in onerel.h;
// this file owns flag parsing, rank inference, and batch plumbing only.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "onerel.h"

namespace {

// Print the result (or the error) and hand back the status as the exit code.
int finish(int status, char* out) {
  if (status == ONEREL_OK && out != nullptr) {
    std::fputs(out, stdout);
    std::fputc('\n', stdout);
  } else if (status != ONEREL_OK) {
    std::fprintf(stderr, "error: %s\n", onerel_last_error());
  }
  onerel_free(out);
  return status;
}

int usage(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return ONEREL_USAGE;
}

// Infer the rank from the letters actually used. A skipped generator below
// the maximum is almost always a typo, so it is an error unless the caller
// pins the rank explicitly.
int infer_rank(const std::string& word, std::string* why) {
  bool seen[26] = {false};
  int max = 0;
  for (char c : word) {
    if (word.size() == 1 && c == '1') break;  // the empty word
    int idx = -1;
    if (c >= 'a' && c <= 'z') idx = c - 'a';
    if (c >= 'A' && c <= 'Z') idx = c - 'A';
    if (idx < 0) {
      *why = "word '" + word + "' contains a non-letter; generators are a-z";
      return -1;
    }
    seen[idx] = true;
    max = std::max(max, idx + 1);
  }
  if (max == 0) {
    *why = "cannot infer a rank from an empty word; pass --rank";
    return -1;
  }
  for (int g = 0; g < max; ++g) {
    if (!seen[g]) {
      *why = "word '" + word + "' uses generator '" +
             std::string(1, static_cast<char>('a' + max - 1)) +
             "' but never '" + std::string(1, static_cast<char>('a' + g)) +
             "'; pass --rank if that is intended";
      return -1;
    }
  }
  return max;
}

// Run one word, or every stdin line when no --word was given. Batch mode
// emits one JSON line per input and exits with the worst status seen.
int for_each_word(const std::string& word_flag,
                  const std::function<int(const std::string&)>& run_one) {
  if (!word_flag.empty()) return run_one(word_flag);
  std::string line;
  int worst = ONEREL_OK;
  bool any = false;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    any = true;
    worst = std::max(worst, run_one(line));
  }
  if (!any) return usage("no word given; pass --word or pipe words on stdin");
  return worst;
}

struct GroupOpts {
  std::string group;
  int base_rank = 0;
  std::vector<std::string> phi;
  std::string stable = "t";
};

void add_group_flags(CLI::App* cmd, GroupOpts& g) {
  cmd->add_option("--group", g.group, "built-in presentation: HT or BS12");
  cmd->add_option("--phi", g.phi,
                  "endomorphism image of each base generator, in order (repeatable)");
  cmd->add_option("--base-rank", g.base_rank,
                  "base free-group rank (defaults to the number of --phi words)");
  cmd->add_option("--stable", g.stable, "stable letter used when printing")
      ->capture_default_str();
}

// Either a handle with status OK, or null with the status explaining why.
onerel_hnn* open_group(const GroupOpts& g, int* status) {
  onerel_hnn* h = nullptr;
  if (!g.group.empty()) {
    *status = onerel_hnn_named(g.group.c_str(), &h);
    if (*status != ONEREL_OK) std::fprintf(stderr, "error: %s\n", onerel_last_error());
    return h;
  }
  if (g.phi.empty()) {
    *status = usage("no presentation given; pass --group or --phi");
    return nullptr;
  }
  std::vector<const char*> ptrs;
  ptrs.reserve(g.phi.size());
  for (const std::string& s : g.phi) ptrs.push_back(s.c_str());
  const int rank = g.base_rank > 0 ? g.base_rank : static_cast<int>(g.phi.size());
  *status = onerel_hnn_new(rank, ptrs.data(), static_cast<int>(ptrs.size()),
                           g.stable.c_str(), &h);
  if (*status != ONEREL_OK) std::fprintf(stderr, "error: %s\n", onerel_last_error());
  return h;
}

struct HandleGuard {
  onerel_hnn* h = nullptr;
  ~HandleGuard() { onerel_hnn_destroy(h); }
};

// Output schemas, one per subcommand. Values describe the field.
const char* schema_for(const std::string& name) {
  if (name == "sample")
    return R"({"model":"int, 1 = reduced words, 2 = cyclically reduced",
"rank":"int","max_len":"int","seed":"decimal string","count":"int",
"words":"array of word strings"})";
  if (name == "brown")
    return R"({"word":"canonical cyclic word","rank":"int",
"exponent_sum":"array of int, one per generator",
"status":"AscendingHNN | NotAscending | NeverByRank | Inapplicable",
"min_side":"int, -1 when unused","witness_edge":"string","witness":"string",
"reason":"string"})";
  if (name == "goodness")
    return R"({"word":"canonical cyclic word","rank":"int","good":"bool",
"hull":"rank 3 only: array of [x,y,z] hull vertices",
"multiplicities":"rank 3 only: visit counts per hull vertex",
"single_visit_index":"rank 3 only: index of a once-visited vertex, -1 if none",
"repaired":"with --repair on a bad word: a good word four letters longer"})";
  if (name == "magnus")
    return R"({"rank":"int","t":"stable letter",
"rewritten":"array of {family,index,sign} subscripted letters",
"ranges":"per family, [lowest, highest] subscript seen","str":"display form"})";
  if (name == "extract")
    return R"({"extracted":"bool","hnn":"when extracted: {base_rank,phi,stable,presentation}",
"lo":"int, lowest subscript","hi":"int, highest subscript",
"min_side":"which extreme subscript occurs once","reason":"string"})";
  if (name == "normalform")
    return R"({"input":"word over base letters plus the stable letter and its inverse",
"stable":"string","k":"int, stable-letter prefix exponent","g":"base word",
"l":"int, stable-letter suffix exponent","str":"display form"})";
  if (name == "smallcancel")
    return R"({"words":"canonical cyclic words","lambda_num":"int","lambda_den":"int",
"max_piece":"longest piece length over the collection",
"satisfies":"per word, whether C'(lambda) holds","all_satisfy":"bool",
"lambda_star":"smallest ratio bound witnessed by the pieces"})";
  if (name == "embed")
    return R"({"t":"letter sent to the stable side","t_inverted":"bool",
"x1":"letter playing the first generator","role":"generator role permutation",
"n":"int, subscript width","images":"embedding word per generator",
"image":"image of the relator over two letters","image_length":"int"})";
  if (name == "largeness")
    return R"({"g":"int","r":"int","m":"int","n":"int, index of the subgroup",
"k_generators":"int","k_relators":"int",
"relators":"array of {conjugate,letters} rewritten relators",
"quotient_relators":"array of subscripted-letter strings"})";
  if (name == "period")
    return R"({"modulus":"decimal string","tail":"int, steps before the cycle",
"period":"int, cycle length","on_cycle":"first on-cycle tuple, entries as decimal strings"})";
  if (name == "hensel")
    return R"({"p":"int","depth":"int","base_period":"int, period at modulus p",
"levels":"array of {modulus,tail,period,law_ok} per power of p",
"law_holds":"bool, whether every level matched the predicted multiple"})";
  if (name == "quasifixed")
    return R"({"q":"int","m":"int, extension degree","s":"int, Frobenius power",
"modulus_poly":"defining polynomial of the field",
"sl2_only":"bool","count":"int","tuples":"array of tuples of [a,b,c,d] matrices"})";
  if (name == "certify")
    return R"({"found":"bool","certificate":"when found: the full certificate object",
"verified":"when found: recheck result, always true",
"obstruction":"when not found: why the search came up empty",
"attempts":"array of {p,e,tail,period,word_survives} per modulus tried"})";
  if (name == "verify")
    return R"({"verified":"bool","word":"string","p":"int","e":"int",
"modulus":"decimal string","ell":"int"})";
  if (name == "experiment")
    return R"({"kind":"p_good | hull_goodness | hull_growth | small_cancellation",
"k":"int","lengths":"array of int","trials":"int","seed":"decimal string",
"rows":"per length: length, trials, hits, misses, degenerate, estimate, wilson_low, wilson_high, mean, variance, and the sample buckets when kept"})";
  return "{}";
}

// Reads the whole file, or stdin when the path is empty or "-".
bool slurp(const std::string& path, std::string* out) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    *out = ss.str();
    return true;
  }
  std::ifstream f(path);
  if (!f) return false;
  std::ostringstream ss;
  ss << f.rdbuf();
  *out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-relator group toolkit"};
  app.require_subcommand(1);
  int exit_code = ONEREL_OK;

  // Shared flag storage. Each subcommand reads only what it registered.
  std::string word, stable_letter = "a", primes, kind, lengths, verify_path;
  std::vector<std::string> words;
  GroupOpts group;
  int rank = 0, exp_k = 2, model = 2, max_len = 0, count = 1, repair = 0;
  int lam_num = 1, lam_den = 6, depth = 3, e_cap = 6, parallel = 0;
  int q = 5, ext_m = 1, frob_s = 1, all_mats = 0, workers = 1;
  int keep_samples = 0, csv = 0, adjoint = 0;
  long n_override = 0, big_g = 0, big_r = 0, big_m = 0, prime_p = 5, trials = 1000;
  unsigned long long seed = 0, modulus = 0;

  const auto add_schema = [&](CLI::App* cmd) {
    bool* flag = new bool(false);  // lives for the whole run
    cmd->add_flag("--schema", *flag, "print the output schema and exit");
    return flag;
  };
  const auto resolve_rank = [&](const std::string& w) -> int {
    if (rank > 0) return rank;
    std::string why;
    const int r = infer_rank(w, &why);
    if (r < 0) exit_code = usage(why);
    return r;
  };

  // sample
  auto* c_sample = app.add_subcommand("sample", "draw random cyclic or reduced words");
  c_sample->add_option("--model", model, "1 = reduced, 2 = cyclically reduced")
      ->capture_default_str();
  c_sample->add_option("--rank", rank, "free-group rank");
  c_sample->add_option("--max-len", max_len, "maximum word length");
  c_sample->add_option("--count", count, "number of samples")->capture_default_str();
  c_sample->add_option("--seed", seed, "RNG seed")->capture_default_str();
  const bool* s_sample = add_schema(c_sample);
  c_sample->callback([&, s_sample] {
    if (*s_sample) return void(std::puts(schema_for("sample")));
    if (rank <= 0 || max_len <= 0)
      return void(exit_code = usage("sample needs --rank and --max-len"));
    char* out = nullptr;
    const int status = onerel_sample(model, rank, max_len, count, seed, &out);
    exit_code = finish(status, out);
  });

  // brown
  auto* c_brown = app.add_subcommand("brown", "ascending-HNN test for a relator");
  c_brown->add_option("--word", word, "relator; omit to read words from stdin");
  c_brown->add_option("--rank", rank, "free-group rank (default: inferred)");
  const bool* s_brown = add_schema(c_brown);
  c_brown->callback([&, s_brown] {
    if (*s_brown) return void(std::puts(schema_for("brown")));
    exit_code = for_each_word(word, [&](const std::string& w) {
      const int r = resolve_rank(w);
      if (r < 0) return ONEREL_USAGE;
      char* out = nullptr;
      const int status = onerel_brown(w.c_str(), r, &out);
      return finish(status, out);
    });
  });

  // goodness
  auto* c_good = app.add_subcommand("goodness", "exponent-vector goodness, with repair");
  c_good->add_option("--word", word, "relator; omit to read words from stdin");
  c_good->add_option("--rank", rank, "free-group rank (default: inferred)");
  c_good->add_flag("--repair", repair, "append a fixing commutator when bad");
  const bool* s_good = add_schema(c_good);
  c_good->callback([&, s_good] {
    if (*s_good) return void(std::puts(schema_for("goodness")));
    exit_code = for_each_word(word, [&](const std::string& w) {
      const int r = resolve_rank(w);
      if (r < 0) return ONEREL_USAGE;
      char* out = nullptr;
      const int status = onerel_goodness(w.c_str(), r, repair, &out);
      return finish(status, out);
    });
  });

  // magnus
  auto* c_magnus = app.add_subcommand("magnus", "rewrite a relator in subscripted letters");
  c_magnus->add_option("--word", word, "relator; omit to read words from stdin");
  c_magnus->add_option("--rank", rank, "free-group rank (default: inferred)");
  c_magnus->add_option("--stable", stable_letter, "generator with zero exponent sum")
      ->capture_default_str();
  const bool* s_magnus = add_schema(c_magnus);
  c_magnus->callback([&, s_magnus] {
    if (*s_magnus) return void(std::puts(schema_for("magnus")));
    exit_code = for_each_word(word, [&](const std::string& w) {
      const int r = resolve_rank(w);
      if (r < 0) return ONEREL_USAGE;
      char* out = nullptr;
      const int status = onerel_magnus(w.c_str(), r, stable_letter.c_str(), &out);
      return finish(status, out);
    });
  });

  // extract
  auto* c_extract = app.add_subcommand("extract", "pull an HNN splitting out of a relator");
  c_extract->add_option("--word", word, "relator; omit to read words from stdin");
  c_extract->add_option("--rank", rank, "free-group rank (default: inferred)");
  c_extract->add_option("--stable", stable_letter, "generator with zero exponent sum")
      ->capture_default_str();
  const bool* s_extract = add_schema(c_extract);
  c_extract->callback([&, s_extract] {
    if (*s_extract) return void(std::puts(schema_for("extract")));
    exit_code = for_each_word(word, [&](const std::string& w) {
      const int r = resolve_rank(w);
      if (r < 0) return ONEREL_USAGE;
      char* out = nullptr;
      const int status = onerel_extract(w.c_str(), r, stable_letter.c_str(), &out);
      return finish(status, out);
    });
  });

  // normalform
  auto* c_nf = app.add_subcommand("normalform", "normal form in an ascending HNN extension");
  add_group_flags(c_nf, group);
  c_nf->add_option("--word", word,
                   "word over base letters plus the stable letter; stdin batch otherwise");
  const bool* s_nf = add_schema(c_nf);
  c_nf->callback([&, s_nf] {
    if (*s_nf) return void(std::puts(schema_for("normalform")));
    int status = ONEREL_OK;
    HandleGuard g{open_group(group, &status)};
    if (status != ONEREL_OK) return void(exit_code = status);
    exit_code = for_each_word(word, [&](const std::string& w) {
      char* out = nullptr;
      const int status = onerel_normalform(g.h, w.c_str(), &out);
      return finish(status, out);
    });
  });

  // smallcancel
  auto* c_sc = app.add_subcommand("smallcancel", "C'(lambda) pieces for a collection");
  c_sc->add_option("--word", words, "collection member (repeatable); stdin lines otherwise");
  c_sc->add_option("--rank", rank, "free-group rank (default: inferred from the words)");
  c_sc->add_option("--lambda-num", lam_num, "lambda numerator")->capture_default_str();
  c_sc->add_option("--lambda-den", lam_den, "lambda denominator")->capture_default_str();
  const bool* s_sc = add_schema(c_sc);
  c_sc->callback([&, s_sc] {
    if (*s_sc) return void(std::puts(schema_for("smallcancel")));
    std::vector<std::string> coll = words;
    if (coll.empty()) {
      std::string line;
      while (std::getline(std::cin, line))
        if (!line.empty()) coll.push_back(line);
    }
    if (coll.empty())
      return void(exit_code = usage("no words given; pass --word or pipe words on stdin"));
    int r = rank;
    if (r <= 0) {
      std::string joined, why;
      for (const std::string& w : coll) joined += w;
      r = infer_rank(joined, &why);
      if (r < 0) return void(exit_code = usage(why));
    }
    std::vector<const char*> ptrs;
    ptrs.reserve(coll.size());
    for (const std::string& w : coll) ptrs.push_back(w.c_str());
    char* out = nullptr;
    const int status = onerel_smallcancel(ptrs.data(), static_cast<int>(ptrs.size()), r, lam_num, lam_den, &out);
    exit_code = finish(status, out);
  });

  // embed
  auto* c_embed = app.add_subcommand("embed", "push a higher-rank relator into rank two");
  c_embed->add_option("--word", word, "relator; omit to read words from stdin");
  c_embed->add_option("--rank", rank, "free-group rank (default: inferred)");
  c_embed->add_option("--n", n_override, "subscript width override, 0 = automatic")
      ->capture_default_str();
  const bool* s_embed = add_schema(c_embed);
  c_embed->callback([&, s_embed] {
    if (*s_embed) return void(std::puts(schema_for("embed")));
    exit_code = for_each_word(word, [&](const std::string& w) {
      const int r = resolve_rank(w);
      if (r < 0) return ONEREL_USAGE;
      char* out = nullptr;
      const int status = onerel_embed(w.c_str(), r, n_override, &out);
      return finish(status, out);
    });
  });

  // largeness: parameter mode (--g/--r/--m) or relator mode (--relator/--n)
  auto* c_large = app.add_subcommand("largeness", "finite-index quotient bookkeeping");
  c_large->add_option("--g", big_g, "generator count (parameter mode)");
  c_large->add_option("--r", big_r, "relator count (parameter mode)");
  c_large->add_option("--m", big_m, "window span (parameter mode)");
  c_large->add_option("--relator", words, "concrete relator (repeatable)");
  c_large->add_option("--rank", rank, "free-group rank (default: inferred)");
  c_large->add_option("--stable", stable_letter, "generator with zero exponent sum")
      ->capture_default_str();
  c_large->add_option("--n", n_override, "index of the subgroup (relator mode)");
  const bool* s_large = add_schema(c_large);
  c_large->callback([&, s_large] {
    if (*s_large) return void(std::puts(schema_for("largeness")));
    char* out = nullptr;
    if (!words.empty()) {
      int r = rank;
      if (r <= 0) {
        std::string joined, why;
        for (const std::string& w : words) joined += w;
        r = infer_rank(joined, &why);
        if (r < 0) return void(exit_code = usage(why));
      }
      std::vector<const char*> ptrs;
      ptrs.reserve(words.size());
      for (const std::string& w : words) ptrs.push_back(w.c_str());
      const int status =
          onerel_largeness_words(ptrs.data(), static_cast<int>(ptrs.size()), r,
                                 stable_letter.c_str(), n_override, &out);
      return void(exit_code = finish(status, out));
    }
    if (big_g == 0)
      return void(exit_code = usage("pass either --relator/--n or --g/--r/--m"));
    const int status = onerel_largeness(big_g, big_r, big_m, &out);
    exit_code = finish(status, out);
  });

  // period
  auto* c_period = app.add_subcommand("period", "orbit tail and period at a modulus");
  add_group_flags(c_period, group);
  auto* period_mod = c_period->add_option("--mod", modulus, "modulus");
  c_period->add_flag("--adjoint", adjoint, "iterate on the adjoint seed instead");
  const bool* s_period = add_schema(c_period);
  c_period->callback([&, s_period] {
    if (*s_period) return void(std::puts(schema_for("period")));
    if (period_mod->count() == 0) return void(exit_code = usage("period needs --mod"));
    int status = ONEREL_OK;
    HandleGuard g{open_group(group, &status)};
    if (status != ONEREL_OK) return void(exit_code = status);
    char* out = nullptr;
    const int rc = onerel_period(g.h, modulus, adjoint, &out);
    exit_code = finish(rc, out);
  });

  // hensel
  auto* c_hensel = app.add_subcommand("hensel", "periods along the tower p, p^2, ...");
  add_group_flags(c_hensel, group);
  c_hensel->add_option("--p", prime_p, "prime base of the tower")->capture_default_str();
  c_hensel->add_option("--depth", depth, "number of levels")->capture_default_str();
  c_hensel->add_flag("--adjoint", adjoint, "iterate on the adjoint seed instead");
  const bool* s_hensel = add_schema(c_hensel);
  c_hensel->callback([&, s_hensel] {
    if (*s_hensel) return void(std::puts(schema_for("hensel")));
    int status = ONEREL_OK;
    HandleGuard g{open_group(group, &status)};
    if (status != ONEREL_OK) return void(exit_code = status);
    char* out = nullptr;
    const int rc = onerel_hensel(g.h, prime_p, depth, adjoint, &out);
    exit_code = finish(rc, out);
  });

  // quasifixed
  auto* c_qf = app.add_subcommand("quasifixed", "tuples fixed up to Frobenius twist");
  add_group_flags(c_qf, group);
  c_qf->add_option("--q", q, "field characteristic")->capture_default_str();
  c_qf->add_option("--m", ext_m, "extension degree")->capture_default_str();
  c_qf->add_option("--s", frob_s, "Frobenius power")->capture_default_str();
  c_qf->add_flag("--all", all_mats, "search all 2x2 matrices, not just SL2");
  c_qf->add_option("--workers", workers, "threads")->capture_default_str();
  const bool* s_qf = add_schema(c_qf);
  c_qf->callback([&, s_qf] {
    if (*s_qf) return void(std::puts(schema_for("quasifixed")));
    int status = ONEREL_OK;
    HandleGuard g{open_group(group, &status)};
    if (status != ONEREL_OK) return void(exit_code = status);
    char* out = nullptr;
    const int rc =
        onerel_quasifixed(g.h, q, ext_m, frob_s, all_mats == 0 ? 1 : 0, workers, &out);
    exit_code = finish(rc, out);
  });

  // certify
  auto* c_cert = app.add_subcommand("certify", "search for a nontriviality certificate");
  add_group_flags(c_cert, group);
  c_cert->add_option("--word", word, "base word; omit to read words from stdin");
  c_cert->add_option("--primes", primes, "comma-separated primes to try (default 5,7,11,13)");
  c_cert->add_option("--e-cap", e_cap, "largest prime-power exponent to try")
      ->capture_default_str();
  c_cert->add_flag("--parallel", parallel, "try the primes concurrently");
  const bool* s_cert = add_schema(c_cert);
  c_cert->callback([&, s_cert] {
    if (*s_cert) return void(std::puts(schema_for("certify")));
    int status = ONEREL_OK;
    HandleGuard g{open_group(group, &status)};
    if (status != ONEREL_OK) return void(exit_code = status);
    exit_code = for_each_word(word, [&](const std::string& w) {
      char* out = nullptr;
      const int status = onerel_certify(g.h, w.c_str(), primes.empty() ? nullptr : primes.c_str(), e_cap, parallel, &out);
      return finish(status, out);
    });
  });

  // verify
  auto* c_verify = app.add_subcommand("verify", "recheck a certificate from file or stdin");
  c_verify->add_option("file", verify_path, "certificate JSON path ('-' or empty = stdin)");
  const bool* s_verify = add_schema(c_verify);
  c_verify->callback([&, s_verify] {
    if (*s_verify) return void(std::puts(schema_for("verify")));
    std::string text;
    if (!slurp(verify_path, &text))
      return void(exit_code = usage("cannot read '" + verify_path + "'"));
    char* out = nullptr;
    const int status = onerel_verify(text.c_str(), &out);
    exit_code = finish(status, out);
  });

  // experiment
  auto* c_exp = app.add_subcommand("experiment", "Monte Carlo sweeps over word lengths");
  c_exp->add_option("--kind", kind,
                    "p_good | hull_goodness | hull_growth | small_cancellation");
  c_exp->add_option("--k", exp_k, "free-group rank")->capture_default_str();
  c_exp->add_option("--lengths", lengths, "comma-separated word lengths");
  c_exp->add_option("--trials", trials, "trials per length")->capture_default_str();
  c_exp->add_option("--seed", seed, "master seed")->capture_default_str();
  c_exp->add_option("--workers", workers, "threads")->capture_default_str();
  c_exp->add_option("--lambda-num", lam_num, "small_cancellation only")
      ->capture_default_str();
  c_exp->add_option("--lambda-den", lam_den, "small_cancellation only")
      ->capture_default_str();
  c_exp->add_flag("--keep-samples", keep_samples, "embed sample words in the report");
  c_exp->add_flag("--csv", csv, "emit CSV instead of JSON");
  const bool* s_exp = add_schema(c_exp);
  c_exp->callback([&, s_exp] {
    if (*s_exp) return void(std::puts(schema_for("experiment")));
    if (kind.empty() || lengths.empty())
      return void(exit_code = usage("experiment needs --kind and --lengths"));
    double elapsed = 0.0;
    char* out = nullptr;
    const int status =
        onerel_experiment(kind.c_str(), exp_k, lengths.c_str(), trials, seed, workers,
                          lam_num, lam_den, keep_samples, csv, &elapsed, &out);
    if (status == ONEREL_OK && csv != 0 && out != nullptr) {
      std::fputs(out, stdout);  // CSV already ends with a newline
      onerel_free(out);
      exit_code = status;
    } else {
      exit_code = finish(status, out);
    }
    if (status == ONEREL_OK)
      std::fprintf(stderr, "elapsed_seconds=%.3f\n", elapsed);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ONEREL_USAGE;
  }
  return exit_code;
}
