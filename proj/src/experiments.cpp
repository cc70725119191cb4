#include "onerel/experiments.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "onerel/lattice.hpp"
#include "onerel/magnus.hpp"
#include "onerel/words.hpp"

namespace onerel {

namespace {

constexpr std::size_t kSampleCap = 8;

// Class of one sampled relator: 0 counted in, 1 counted out, 2 set aside.
struct TrialOutcome {
  int cls = 0;
  long long value = 0;
  std::string word;
};

using TrialFn = std::function<TrialOutcome(const Sampler&, Rng&)>;

struct Shard {
  long hits = 0, misses = 0, degenerate = 0;
  long long value_sum = 0, value_sq_sum = 0;
  std::vector<std::pair<long, std::string>> hit_s, miss_s, degen_s;
};

bool is_proper_power(const CyclicWord& w) {
  const std::vector<Letter>& ls = w.letters();
  const std::size_t n = ls.size();
  for (std::size_t d = 1; d <= n / 2; ++d) {
    if (n % d != 0) continue;
    bool eq = true;
    for (std::size_t i = 0; i < n && eq; ++i) eq = ls[i] == ls[(i + d) % n];
    if (eq) return true;
  }
  return false;
}

void validate(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw usage_error("an experiment needs at least one trial");
  if (spec.lengths.empty()) throw usage_error("an experiment needs a length grid");
  for (int n : spec.lengths)
    if (n < 1) throw usage_error("lengths must be positive");
  if (spec.workers < 1) throw usage_error("worker count must be positive");
  if (spec.k < 1 || spec.k > 26) throw usage_error("rank out of range");
}

ExperimentReport run_generic(ExperimentSpec spec, const char* kind, const TrialFn& fn) {
  validate(spec);
  spec.kind = kind;
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentReport rep;
  rep.spec = spec;
  const long trials = spec.trials;
  for (std::size_t li = 0; li < spec.lengths.size(); ++li) {
    const int len = spec.lengths[li];
    const Sampler sampler(spec.k, len);
    const int workers =
        static_cast<int>(std::min<long>(spec.workers, trials));
    std::vector<Shard> shards(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));

    const auto body = [&](int wi) {
      Shard& s = shards[static_cast<std::size_t>(wi)];
      const long lo = trials * wi / workers;
      const long hi = trials * (wi + 1) / workers;
      for (long ti = lo; ti < hi; ++ti) {
        // Trial seeds depend only on the global index, so shard boundaries
        // cannot shift any verdict.
        const std::uint64_t gidx =
            static_cast<std::uint64_t>(li) * static_cast<std::uint64_t>(trials) +
            static_cast<std::uint64_t>(ti);
        Rng rng(spec.seed ^ gidx);
        const TrialOutcome o = fn(sampler, rng);
        std::vector<std::pair<long, std::string>>* bucket = nullptr;
        if (o.cls == 0) {
          ++s.hits;
          s.value_sum += o.value;
          s.value_sq_sum += o.value * o.value;
          bucket = &s.hit_s;
        } else if (o.cls == 1) {
          ++s.misses;
          bucket = &s.miss_s;
        } else {
          ++s.degenerate;
          bucket = &s.degen_s;
        }
        if (spec.keep_samples && bucket->size() < kSampleCap)
          bucket->emplace_back(ti, o.word);
      }
    };

    if (workers == 1) {
      body(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int wi = 0; wi < workers; ++wi)
        pool.emplace_back([&, wi] {
          try {
            body(wi);
          } catch (...) {
            errors[static_cast<std::size_t>(wi)] = std::current_exception();
          }
        });
      for (std::thread& t : pool) t.join();
      for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    }

    LengthStats st;
    st.length = len;
    st.trials = trials;
    // Shards hold ascending disjoint trial ranges, so worker-order
    // concatenation keeps samples in trial order.
    std::vector<std::pair<long, std::string>> hit_s, miss_s, degen_s;
    for (const Shard& s : shards) {
      st.hits += s.hits;
      st.misses += s.misses;
      st.degenerate += s.degenerate;
      st.value_sum += s.value_sum;
      st.value_sq_sum += s.value_sq_sum;
      for (const auto& x : s.hit_s) hit_s.push_back(x);
      for (const auto& x : s.miss_s) miss_s.push_back(x);
      for (const auto& x : s.degen_s) degen_s.push_back(x);
    }
    if (st.hits + st.misses + st.degenerate != trials)
      throw domain_error("experiment counts lost a trial");

    const long base = st.hits + st.misses;
    st.estimate = base > 0 ? static_cast<double>(st.hits) / static_cast<double>(base) : 0.0;
    const auto ci = wilson_interval(st.hits, base);
    st.wilson_low = ci.first;
    st.wilson_high = ci.second;
    if (st.hits > 0) {
      const double n = static_cast<double>(st.hits);
      st.mean = static_cast<double>(st.value_sum) / n;
      st.variance = static_cast<double>(st.value_sq_sum) / n - st.mean * st.mean;
    }
    const auto take = [](std::vector<std::pair<long, std::string>>& src,
                         std::vector<std::string>& dst) {
      for (std::size_t i = 0; i < src.size() && i < kSampleCap; ++i)
        dst.push_back(std::move(src[i].second));
    };
    if (spec.keep_samples) {
      take(miss_s, st.miss_samples);
      take(degen_s, st.degenerate_samples);
      take(hit_s, st.hit_samples);
    }
    rep.per_length.push_back(std::move(st));
  }

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

std::pair<double, double> wilson_interval(long hits, long total) {
  if (hits < 0 || total < 0 || hits > total)
    throw usage_error("wilson_interval needs 0 <= hits <= total");
  if (total == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ExperimentReport run_p_good(const ExperimentSpec& spec) {
  if (spec.k != 2) throw usage_error("the ascending-fraction experiment is a rank-2 question");
  return run_generic(spec, "p_good", [](const Sampler& s, Rng& rng) {
    const CyclicWord w = s.cyclic(rng);  // length <= grid value
    TrialOutcome o;
    o.word = w.str();
    try {
      o.cls = is_good(w) ? 0 : 1;
    } catch (const domain_error&) {
      o.cls = 2;  // zero exponent vector
    }
    return o;
  });
}

ExperimentReport run_hull_goodness(const ExperimentSpec& spec) {
  if (spec.k != 3) throw usage_error("hull goodness is a rank-3 question");
  return run_generic(spec, "hull_goodness", [](const Sampler& s, Rng& rng) {
    const CyclicWord w = s.cyclic_exact(s.max_len(), rng);
    TrialOutcome o;
    o.word = w.str();
    try {
      o.cls = is_good(w) ? 0 : 1;
    } catch (const domain_error&) {
      o.cls = 2;
    }
    return o;
  });
}

ExperimentReport run_hull_growth(const ExperimentSpec& spec) {
  if (spec.k != 3)
    throw usage_error("hull growth is a rank-3 question; two generators give a segment");
  return run_generic(spec, "hull_growth", [](const Sampler& s, Rng& rng) {
    const CyclicWord w = s.cyclic_exact(s.max_len(), rng);
    TrialOutcome o;
    o.word = w.str();
    try {
      o.value = static_cast<long long>(hull_analysis(w).hull.size());
      o.cls = 0;
    } catch (const domain_error&) {
      o.cls = 2;
    }
    return o;
  });
}

ExperimentReport run_small_cancellation(const ExperimentSpec& spec, long lambda_num,
                                        long lambda_den) {
  if (lambda_num < 1 || lambda_den < 1 || lambda_num > lambda_den)
    throw usage_error("lambda must lie in (0, 1]");
  const bool whole = lambda_num == lambda_den;  // the piece scan ignores lambda
  return run_generic(spec, "small_cancellation",
                     [lambda_num, lambda_den, whole](const Sampler& s, Rng& rng) {
                       const CyclicWord w = s.cyclic_exact(s.max_len(), rng);
                       TrialOutcome o;
                       o.word = w.str();
                       if (is_proper_power(w)) {
                         o.cls = 2;
                         return o;
                       }
                       if (whole) {
                         const SmallCancellationReport r = small_cancellation({w}, 1, 2);
                         o.cls = r.max_piece[0] < static_cast<int>(w.size()) ? 0 : 1;
                       } else {
                         o.cls = small_cancellation({w}, lambda_num, lambda_den).all_satisfy
                                     ? 0
                                     : 1;
                       }
                       return o;
                     });
}

}  // namespace onerel
