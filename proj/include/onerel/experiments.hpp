#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onerel/base.hpp"

namespace onerel {

struct ExperimentSpec {
  std::string kind;          // filled in by the runner
  int k = 2;                 // sampling rank
  std::vector<int> lengths;  // length grid, one stats row each
  long trials = 1000;        // per length
  std::uint64_t seed = 0;    // master seed, echoed in the report
  int workers = 1;
  bool keep_samples = false;  // embed a few miss/degenerate words for audit
};

// Counts are the ground truth; the derived numbers are recomputed from them
// single-threadedly so the report does not depend on the worker count.
struct LengthStats {
  int length = 0;
  long trials = 0;
  long hits = 0;
  long misses = 0;
  long degenerate = 0;  // excluded from the ratio, never dropped
  double estimate = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  // hull growth only: exact sums of the per-sample vertex counts
  long long value_sum = 0;
  long long value_sq_sum = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance
  std::vector<std::string> hit_samples;         // up to 8, earliest trials first
  std::vector<std::string> miss_samples;        // up to 8
  std::vector<std::string> degenerate_samples;  // up to 8
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<LengthStats> per_length;
  double elapsed_seconds = 0.0;  // wall clock; not part of serialized output
};

// 95% Wilson score interval; returns {low, high} and is exact-input
// deterministic. hits <= total required; total = 0 gives [0, 1].
std::pair<double, double> wilson_interval(long hits, long total);

// Fraction of rank-2 cyclic samples of length <= n that pass the ascending
// criterion; zero-exponent-vector samples are counted as degenerate.
ExperimentReport run_p_good(const ExperimentSpec& spec);

// Fraction of rank-3 cyclic samples of exactly each grid length whose hull
// has a once-visited vertex.
ExperimentReport run_hull_goodness(const ExperimentSpec& spec);

// Mean and variance of the hull vertex count at each grid length.
ExperimentReport run_hull_growth(const ExperimentSpec& spec);

// Fraction of cyclic samples at each grid length whose worst piece ratio is
// below lambda = num/den; proper powers are counted as degenerate.
ExperimentReport run_small_cancellation(const ExperimentSpec& spec, long lambda_num,
                                        long lambda_den);

}  // namespace onerel
