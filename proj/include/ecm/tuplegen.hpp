#pragma once

// Seed-driven synthesis of minimum-distance constellations ("M-tuples") from
// elliptic-curve points, plus closed-form estimates of how many such tuples
// a candidate pool contains.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ecm/constellation.hpp"
#include "ecm/ec_core.hpp"
#include "ecm/kdtree.hpp"
#include "ecm/random_stream.hpp"

namespace ecm {

/// L distinct scalars with their centred, unit-energy plane points.
struct CandidatePool {
  std::vector<Scalar> scalars;
  std::vector<PlanePoint> points;
  /// Area of the axis-aligned bounding box of `points`.
  double bounding_area = 0.0;

  std::size_t size() const noexcept { return points.size(); }
};

/// Draws L distinct scalars uniformly from [1, n) on the "pool" stream and
/// maps them through k*G, lift, center and normalize. Throws CurveInvalid,
/// InvalidArgument (L == 0) or PoolTooSmall (L >= n).
CandidatePool gen_candidate_pool(const Seed& seed, std::size_t pool_size,
                                 const CurveParams& curve);

struct EcmTuple {
  std::vector<Scalar> scalars;
  /// Tuple-centred, tuple-unit-energy points; points[i] carries symbol i.
  std::vector<PlanePoint> points;
};

/// How each next tuple point is drawn from the admissible set S.
///  Uniform: uniformly from all of S.
///  Compact: uniformly from the points of S whose distance to the current
///  tuple centroid is within tolerance * radius of the closest point of S.
///  Compact growth packs tuples tightly enough that re-normalization keeps
///  the pairwise distances above d_min for dense orders such as 16.
enum class GrowthRule { Uniform, Compact };

std::string_view growth_name(GrowthRule rule);
/// Throws InvalidArgument for unknown names.
GrowthRule parse_growth(std::string_view name);

struct TupleBank {
  static constexpr int kFormatVersion = 1;

  std::string curve_id;
  int order = 0;
  double d_min = 0.0;
  std::size_t requested = 0;
  std::size_t pool_size = 0;
  std::size_t max_attempts = 0;
  double prefilter_slack = 1.0;
  GrowthRule growth = GrowthRule::Compact;
  double compact_tolerance = 0.02;
  std::string seed_fingerprint;
  std::size_t attempts_used = 0;
  bool partial = false;
  std::vector<EcmTuple> tuples;

  std::size_t size() const noexcept { return tuples.size(); }
};

struct TupleGenConfig {
  int order = 4;
  double d_min = 1.0;
  std::size_t n_tuples = 1;
  std::size_t pool_size = 10'000;
  /// 0 selects the default of 100 attempts per requested tuple.
  std::size_t max_attempts = 0;
  /// Multiplies d_min for the per-step pool-coordinate filter only; the final
  /// acceptance test always uses d_min on the re-normalized tuple.
  double prefilter_slack = 1.0;
  GrowthRule growth = GrowthRule::Compact;
  /// Width of the Compact candidate band, as a fraction of the step radius.
  double compact_tolerance = 0.02;

  std::size_t effective_max_attempts() const {
    return max_attempts != 0 ? max_attempts : 100 * n_tuples;
  }
};

struct GenerationResult {
  TupleBank bank;
  /// True when max_attempts ran out before n_tuples were found; `bank` then
  /// holds the partial result.
  bool exhausted = false;
  std::string diagnostic;
};

/// Full pipeline: pool, tree, tuple synthesis. Throws PoolTooSmall (L < M),
/// InvalidArgument for malformed parameters, CurveInvalid.
GenerationResult generate_tuples(const Seed& seed, const CurveParams& curve,
                                 const TupleGenConfig& config);

/// Tuple synthesis over an existing pool and tree (the pool must have been
/// produced from `seed` for the result to be reproducible by a peer).
GenerationResult generate_tuples(const Seed& seed, const std::string& curve_id,
                                 const CandidatePool& pool, const KdTree2D& tree,
                                 const TupleGenConfig& config);

/// Independent O(M^2) check of one stored tuple: size, centroid and energy
/// within `tol`, and every pair at least d_min apart (1e-12 slack).
bool validate_tuple(const EcmTuple& tuple, int order, double d_min, double tol = 1e-9);

/// ln of a (possibly astronomically large) count, with decimal rendering.
struct LogCount {
  double ln = 0.0;

  double log10() const;
  /// Mantissa in [1, 10) and integral exponent such that value = m * 10^e.
  double mantissa() const;
  long exponent() const;
  /// e.g. "2.718e+50".
  std::string scientific(int digits = 4) const;
};

/// ln[ C(L, M) (1 - pi d^2 / A)^{C(M,2)} ]. Throws ConstraintInfeasible when
/// pi d^2 >= A and InvalidArgument when M > L or M < 2.
LogCount expected_tuples_exact(double pool_size, int order, double d_min, double area);

/// ln[ L^M / M! * exp(-(pi d^2 / A) C(M,2)) ], the large-L, small-exclusion
/// form of the exact count.
LogCount expected_tuples_approx(double pool_size, int order, double d_min, double area);

}  // namespace ecm
