#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "onerel/words.hpp"

namespace onerel {

using Vec3 = std::array<long long, 3>;

// Walk in Z^rank read off a relator: one unit step per letter, starting at
// the origin. points has size() + 1 entries; the last one is the exponent
// vector M.
struct LatticeWalk {
  int rank = 0;
  std::vector<std::vector<long long>> points;

  std::vector<long long> endpoint() const { return points.back(); }
};

LatticeWalk walk_of(const CyclicWord& r);

// (sign, index) for every occurrence of generator x in reading order, where
// index is the prefix exponent sum of generator t before the occurrence.
std::vector<std::pair<int, long>> magnus_indices(const Word& w, int t_gen, int x_gen);

enum class BrownStatus { AscendingHNN, NotAscending, NeverByRank, Inapplicable };

std::string to_string(BrownStatus s);

struct BrownVerdict {
  BrownStatus status = BrownStatus::Inapplicable;
  // Side and witness are only meaningful for AscendingHNN. Projections are
  // v_t = n . P_t with n = (-M_y, M_x); side records whether the argmin or
  // argmax of v was the single vertex/edge. Witness is a time index into the
  // canonical rotation (for an edge, the index of its first vertex; a
  // wrapping edge reports L-1).
  bool min_side = false;
  bool witness_edge = false;
  long witness = -1;
  std::string reason;
};

// Brown's criterion for rank-2 relators: ascending iff one of the two
// support lines parallel to OM meets the cyclic walk in a single vertex or a
// single edge. The min side is checked first.
BrownVerdict brown_k2(const CyclicWord& r);

// rank 1 -> Inapplicable, rank 2 -> brown_k2, rank >= 3 -> NeverByRank.
BrownVerdict brown_verdict(const CyclicWord& r);

// Visit counts of the two extreme projection values of a rank-2 walk, with
// cyclically-consecutive duplicates collapsed. The "visited an extreme point
// only once" reading of the criterion; diverges from the vertex-or-edge one
// exactly when an extreme level carries more than one collinear step.
struct BridgeVisits {
  int min_visits = 0;
  int max_visits = 0;
};
BridgeVisits bridge_visits(const CyclicWord& r);

// Exact integer convex-hull data for rank-3 relators. Points are projected
// along M via p -> |M|^2 p - (p.M) M, which scales the true projection by
// |M|^2 but keeps everything in Z^3.
struct HullAnalysis {
  Vec3 m{};
  std::vector<Vec3> hull;            // strict hull vertices, ccw
  std::vector<int> multiplicities;   // cyclic visit counts, duplicates collapsed
  long long single_visit_index = -1; // first hull vertex visited exactly once
  bool good = false;
};

HullAnalysis hull_analysis(const CyclicWord& r);

// rank 2: Brown's condition; rank 3: some hull vertex is visited exactly
// once. Throws domain_error when the exponent vector vanishes.
bool is_good(const CyclicWord& r);

// Repairs a bad rank-3 relator by inserting a commutator [u,w] right after
// the walk's second visit to the given hull vertex. Candidates (u,w) are
// tried in lexicographic letter order; the first insertion that keeps the
// word cyclically reduced and makes it good wins. Length grows by exactly 4.
CyclicWord make_good(const CyclicWord& r, const Vec3& hull_vertex);

// Convenience: applies make_good at the first multiply-visited hull vertex.
CyclicWord make_good(const CyclicWord& r);

}  // namespace onerel
