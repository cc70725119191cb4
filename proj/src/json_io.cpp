#include "onerel/json_io.hpp"

#include <cinttypes>
#include <cstdio>

namespace onerel {

namespace {

char gen_char(int gen) { return static_cast<char>('a' + gen - 1); }

std::string u64s(std::uint64_t v) { return std::to_string(v); }

Json rm_json(const ResidueMatrix& m) {
  return Json::array({u64s(m.e[0]), u64s(m.e[1]), u64s(m.e[2]), u64s(m.e[3])});
}

Json tuple_json(const MatTuple& t) {
  Json a = Json::array();
  for (const ResidueMatrix& m : t.mats) a.push_back(rm_json(m));
  return a;
}

Json wreath_json(const WreathElement& w) {
  Json entries = Json::array();
  for (const ResidueMatrix& m : w.entries) entries.push_back(rm_json(m));
  return Json{{"ell", w.ell}, {"shift", w.shift}, {"entries", std::move(entries)}};
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t parse_u64(const Json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (!j.is_string()) throw usage_error(std::string(what) + " must be a decimal string");
  const std::string s = j.get<std::string>();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw usage_error(std::string(what) + " is not a nonnegative decimal: " + s);
  std::uint64_t v = 0;
  for (char c : s) {
    if (v > (UINT64_MAX - static_cast<std::uint64_t>(c - '0')) / 10)
      throw usage_error(std::string(what) + " overflows 64 bits: " + s);
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

ResidueMatrix rm_from_json(const Json& j, std::uint64_t modulus) {
  if (!j.is_array() || j.size() != 4)
    throw usage_error("a matrix must be an array of four entries");
  ResidueMatrix m;
  m.m = modulus;
  for (int i = 0; i < 4; ++i) {
    m.e[static_cast<std::size_t>(i)] = parse_u64(j[static_cast<std::size_t>(i)], "matrix entry");
    if (m.e[static_cast<std::size_t>(i)] >= modulus)
      throw usage_error("matrix entry not reduced modulo " + u64s(modulus));
  }
  return m;
}

WreathElement wreath_from_json(const Json& j, std::uint64_t modulus) {
  WreathElement w;
  w.ell = j.at("ell").get<long>();
  w.shift = j.at("shift").get<long>();
  if (w.ell < 1) throw usage_error("wreath block count must be positive");
  for (const Json& e : j.at("entries")) w.entries.push_back(rm_from_json(e, modulus));
  if (w.entries.size() != static_cast<std::size_t>(w.ell))
    throw usage_error("wreath entry count disagrees with the block count");
  return w;
}

}  // namespace

Json samples_json(int model, int rank, int max_len, std::uint64_t seed,
                  const std::vector<std::string>& words) {
  return Json{{"model", model},
              {"rank", rank},
              {"max_len", max_len},
              {"seed", u64s(seed)},
              {"count", words.size()},
              {"words", words}};
}

Json brown_json(const CyclicWord& r, const BrownVerdict& v) {
  Json exps = Json::array();
  for (int g = 1; g <= r.rank(); ++g) exps.push_back(exponent_sum(r, g));
  return Json{{"word", r.str()},          {"rank", r.rank()},
              {"exponent_sum", exps},     {"status", to_string(v.status)},
              {"min_side", v.min_side},   {"witness_edge", v.witness_edge},
              {"witness", v.witness},     {"reason", v.reason}};
}

Json goodness_json(const CyclicWord& r, bool good, const HullAnalysis* hull,
                   const CyclicWord* repaired) {
  Json j{{"word", r.str()}, {"rank", r.rank()}, {"good", good}};
  if (hull != nullptr) {
    Json hv = Json::array();
    for (const Vec3& p : hull->hull) hv.push_back(Json::array({p[0], p[1], p[2]}));
    j["hull"] = std::move(hv);
    j["multiplicities"] = hull->multiplicities;
    j["single_visit_index"] = hull->single_visit_index;
  }
  if (repaired != nullptr) j["repaired"] = repaired->str();
  return j;
}

Json magnus_json(const MagnusRewrite& mr) {
  Json letters = Json::array();
  for (const IndexedLetter& l : mr.rewritten)
    letters.push_back(Json{{"family", std::string(1, gen_char(l.family))},
                           {"index", l.index},
                           {"sign", l.sign}});
  Json ranges = Json::object();
  for (const auto& [fam, range] : mr.ranges)
    ranges[std::string(1, gen_char(fam))] = Json::array({range.first, range.second});
  return Json{{"rank", mr.rank},
              {"t", std::string(1, gen_char(mr.t_gen))},
              {"rewritten", std::move(letters)},
              {"ranges", std::move(ranges)},
              {"str", mr.str()}};
}

Json hnn_json(const HnnData& h) {
  Json phi = Json::array();
  for (const Word& w : h.phi) phi.push_back(w.str());
  return Json{{"base_rank", h.base_rank},
              {"phi", std::move(phi)},
              {"stable", h.stable},
              {"presentation", h.presentation()}};
}

Json extract_json(const HnnExtractResult& r) {
  Json j{{"extracted", r.extracted}};
  if (r.extracted) {
    j["hnn"] = hnn_json(r.data);
    j["lo"] = r.lo;
    j["hi"] = r.hi;
    j["min_side"] = r.min_side;
  }
  j["reason"] = r.reason;
  return j;
}

Json normalform_json(const HnnData& h, const std::string& input, const NormalForm& nf) {
  return Json{{"input", input},
              {"stable", h.stable},
              {"k", nf.k},
              {"g", nf.g.str()},
              {"l", nf.l},
              {"str", nf.str()}};
}

Json smallcancel_json(const SmallCancellationReport& r) {
  Json words = Json::array();
  for (const CyclicWord& w : r.words) words.push_back(w.str());
  return Json{{"words", std::move(words)},
              {"lambda_num", r.lambda_num},
              {"lambda_den", r.lambda_den},
              {"max_piece", r.max_piece},
              {"satisfies", r.satisfies},
              {"all_satisfy", r.all_satisfy},
              {"lambda_star", r.lambda_star}};
}

Json embed_json(const EmbedResult& r) {
  Json images = Json::array();
  for (const Word& w : r.images) images.push_back(w.str());
  return Json{{"t", std::string(1, gen_char(r.t_gen))},
              {"t_inverted", r.t_inverted},
              {"x1", std::string(1, gen_char(r.x1_gen))},
              {"role", r.role},
              {"n", r.n},
              {"images", std::move(images)},
              {"image", r.image.str()},
              {"image_length", r.image.size()}};
}

Json largeness_json(const LargenessData& d) {
  Json rels = Json::array();
  for (const RewrittenRelator& r : d.relators)
    rels.push_back(Json{{"conjugate", r.c}, {"letters", sletters_str(r.letters)}});
  Json quot = Json::array();
  for (const std::vector<SLetter>& ls : d.quotient_relators) quot.push_back(sletters_str(ls));
  return Json{{"g", d.g},
              {"r", d.r},
              {"m", d.m},
              {"n", d.n},
              {"k_generators", d.k_generators},
              {"k_relators", d.k_relators},
              {"relators", std::move(rels)},
              {"quotient_relators", std::move(quot)}};
}

Json cycle_json(std::uint64_t modulus, const CycleRecord& rec) {
  return Json{{"modulus", u64s(modulus)},
              {"tail", rec.tail},
              {"period", rec.period},
              {"on_cycle", tuple_json(rec.on_cycle)}};
}

Json hensel_json(const HenselReport& r) {
  Json levels = Json::array();
  for (const HenselLevel& l : r.levels)
    levels.push_back(Json{{"modulus", u64s(l.modulus)},
                          {"tail", l.tail},
                          {"period", l.period},
                          {"law_ok", l.law_ok}});
  return Json{{"p", r.p},
              {"depth", r.depth},
              {"base_period", r.base_period},
              {"levels", std::move(levels)},
              {"law_holds", r.law_holds}};
}

Json quasifixed_json(const Fq& field, const QuasiFixedResult& r) {
  Json tuples = Json::array();
  for (const std::vector<FqMat2>& t : r.tuples) {
    Json row = Json::array();
    for (const FqMat2& m : t) row.push_back(Json::array({m.e[0], m.e[1], m.e[2], m.e[3]}));
    tuples.push_back(std::move(row));
  }
  return Json{{"q", r.q},
              {"m", r.m},
              {"s", r.s},
              {"modulus_poly", field.modulus_poly()},
              {"sl2_only", r.sl2_only},
              {"count", r.tuples.size()},
              {"tuples", std::move(tuples)}};
}

Json certificate_json(const Certificate& c) {
  Json base = Json::array();
  for (const WreathElement& g : c.images.base) base.push_back(wreath_json(g));
  return Json{{"presentation", hnn_json(c.h)},
              {"word", c.w.str()},
              {"p", c.p},
              {"e", c.e},
              {"modulus", u64s(c.modulus)},
              {"ell", c.ell},
              {"tuple", tuple_json(c.tuple)},
              {"images", Json{{"base", std::move(base)}, {"t", wreath_json(c.images.t)}}},
              {"gamma_w", wreath_json(c.gamma_w)}};
}

Json certify_json(const CertifyResult& r) {
  Json attempts = Json::array();
  for (const CertifyAttempt& a : r.attempts)
    attempts.push_back(Json{{"p", a.p},
                            {"e", a.e},
                            {"tail", a.tail},
                            {"period", a.period},
                            {"word_survives", a.word_survives},
                            {"note", a.note}});
  Json j{{"found", r.success}};
  if (r.success) {
    j["certificate"] = certificate_json(r.cert);
    j["verified"] = true;
  } else {
    j["obstruction"] = r.obstruction;
  }
  j["attempts"] = std::move(attempts);
  return j;
}

Json report_json(const ExperimentReport& r) {
  Json rows = Json::array();
  for (const LengthStats& s : r.per_length) {
    Json row{{"length", s.length},
             {"trials", s.trials},
             {"hits", s.hits},
             {"misses", s.misses},
             {"degenerate", s.degenerate},
             {"estimate", s.estimate},
             {"wilson_low", s.wilson_low},
             {"wilson_high", s.wilson_high},
             {"value_sum", s.value_sum},
             {"value_sq_sum", s.value_sq_sum},
             {"mean", s.mean},
             {"variance", s.variance}};
    if (r.spec.keep_samples) {
      row["hit_samples"] = s.hit_samples;
      row["miss_samples"] = s.miss_samples;
      row["degenerate_samples"] = s.degenerate_samples;
    }
    rows.push_back(std::move(row));
  }
  // workers and elapsed are run details, not results; leaving them out keeps
  // equal experiments byte-equal.
  return Json{{"kind", r.spec.kind},
              {"k", r.spec.k},
              {"lengths", r.spec.lengths},
              {"trials", r.spec.trials},
              {"seed", u64s(r.spec.seed)},
              {"rows", std::move(rows)}};
}

std::string report_csv(const ExperimentReport& r) {
  std::string out =
      "kind,k,length,trials,hits,misses,degenerate,estimate,wilson_low,wilson_high,"
      "mean,variance,seed\n";
  for (const LengthStats& s : r.per_length) {
    out += r.spec.kind;
    out += ',' + std::to_string(r.spec.k);
    out += ',' + std::to_string(s.length);
    out += ',' + std::to_string(s.trials);
    out += ',' + std::to_string(s.hits);
    out += ',' + std::to_string(s.misses);
    out += ',' + std::to_string(s.degenerate);
    out += ',' + fmt17(s.estimate);
    out += ',' + fmt17(s.wilson_low);
    out += ',' + fmt17(s.wilson_high);
    out += ',' + fmt17(s.mean);
    out += ',' + fmt17(s.variance);
    out += ',' + u64s(r.spec.seed);
    out += '\n';
  }
  return out;
}

Certificate certificate_from_json(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    Certificate c;
    const Json& pres = j.at("presentation");
    const int rank = pres.at("base_rank").get<int>();
    std::vector<Word> phi;
    for (const Json& w : pres.at("phi")) phi.push_back(Word::parse(w.get<std::string>(), rank));
    c.h = make_hnn(rank, std::move(phi), pres.value("stable", std::string("t")));
    c.w = Word::parse(j.at("word").get<std::string>(), rank);
    c.p = j.at("p").get<long>();
    c.e = j.at("e").get<int>();
    c.modulus = parse_u64(j.at("modulus"), "modulus");
    c.ell = j.at("ell").get<long>();
    if (c.modulus < 2) throw usage_error("modulus must be at least 2");
    c.tuple.m = c.modulus;
    for (const Json& m : j.at("tuple")) c.tuple.mats.push_back(rm_from_json(m, c.modulus));
    const Json& im = j.at("images");
    for (const Json& g : im.at("base"))
      c.images.base.push_back(wreath_from_json(g, c.modulus));
    c.images.t = wreath_from_json(im.at("t"), c.modulus);
    c.gamma_w = wreath_from_json(j.at("gamma_w"), c.modulus);
    return c;
  } catch (const Json::exception& ex) {
    throw usage_error(std::string("certificate JSON malformed: ") + ex.what());
  }
}

}  // namespace onerel
