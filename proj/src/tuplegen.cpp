#include "ecm/tuplegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <set>

namespace ecm {

std::string_view growth_name(GrowthRule rule) {
  return rule == GrowthRule::Uniform ? "uniform" : "compact";
}

GrowthRule parse_growth(std::string_view name) {
  if (name == "uniform") return GrowthRule::Uniform;
  if (name == "compact") return GrowthRule::Compact;
  throw Error(ErrorKind::InvalidArgument, "unknown growth rule: " + std::string(name));
}

CandidatePool gen_candidate_pool(const Seed& seed, std::size_t pool_size,
                                 const CurveParams& curve) {
  if (const CurveCheck check = validate_curve(curve); !check.ok()) {
    throw Error(ErrorKind::CurveInvalid, curve.name + ": " + check.message);
  }
  if (pool_size == 0) throw Error(ErrorKind::InvalidArgument, "pool size must be positive");
  if (BigInt(static_cast<unsigned long>(pool_size)) >= curve.n) {
    throw Error(ErrorKind::PoolTooSmall, "pool size must be below the group order");
  }

  RandomStream stream = derive_stream(seed, "pool");
  const BigInt span = curve.n - 1;
  std::set<BigInt> seen;
  CandidatePool pool;
  pool.scalars.reserve(pool_size);
  while (pool.scalars.size() < pool_size) {
    BigInt k = stream.uniform_big(span) + 1;
    if (!seen.insert(k).second) continue;
    pool.scalars.emplace_back(std::move(k), curve.n);
  }

  const FixedBaseTable table(curve);
  std::vector<CurvePoint> curve_points;
  curve_points.reserve(pool_size);
  for (const auto& k : pool.scalars) curve_points.push_back(table.mul(k.value()));

  pool.points = normalize_energy(center(lift_to_plane(curve_points, curve.p())));
  double min_x = pool.points[0].x, max_x = min_x, min_y = pool.points[0].y, max_y = min_y;
  for (const auto& p : pool.points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  pool.bounding_area = (max_x - min_x) * (max_y - min_y);
  return pool;
}

namespace {

void check_config(const TupleGenConfig& config) {
  const int m = config.order;
  if (m < 4 || (m & (m - 1)) != 0) {
    throw Error(ErrorKind::InvalidArgument, "M must be a power of two >= 4");
  }
  if (!(config.d_min > 0.0) || !std::isfinite(config.d_min)) {
    throw Error(ErrorKind::InvalidArgument, "d_min must be positive");
  }
  if (config.n_tuples == 0) throw Error(ErrorKind::InvalidArgument, "N' must be >= 1");
  if (!(config.prefilter_slack > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "prefilter slack must be positive");
  }
  if (!(config.compact_tolerance >= 0.0) || !std::isfinite(config.compact_tolerance)) {
    throw Error(ErrorKind::InvalidArgument, "compact tolerance must be non-negative");
  }
}

PlanePoint mean_of(const std::vector<PlanePoint>& points) {
  PlanePoint c{0.0, 0.0};
  for (const auto& p : points) c = c + p;
  const double n = static_cast<double>(points.size());
  return {c.x / n, c.y / n};
}

}  // namespace

GenerationResult generate_tuples(const Seed& seed, const std::string& curve_id,
                                 const CandidatePool& pool, const KdTree2D& tree,
                                 const TupleGenConfig& config) {
  check_config(config);
  const auto m = static_cast<std::size_t>(config.order);
  if (pool.size() < m) throw Error(ErrorKind::PoolTooSmall, "pool smaller than M");
  if (tree.size() != pool.size()) {
    throw Error(ErrorKind::InvalidArgument, "tree does not index this pool");
  }

  GenerationResult result;
  TupleBank& bank = result.bank;
  bank.curve_id = curve_id;
  bank.order = config.order;
  bank.d_min = config.d_min;
  bank.requested = config.n_tuples;
  bank.pool_size = pool.size();
  bank.max_attempts = config.effective_max_attempts();
  bank.prefilter_slack = config.prefilter_slack;
  bank.growth = config.growth;
  bank.compact_tolerance = config.compact_tolerance;
  bank.seed_fingerprint = seed.fingerprint();

  RandomStream stream = derive_stream(seed, "tuplegen");
  const double step_radius = config.d_min * config.prefilter_slack;
  std::set<std::vector<std::uint32_t>> used_sets;
  std::vector<std::uint32_t> chosen;
  std::vector<PlanePoint> chosen_points;
  std::size_t attempts = 0;

  while (bank.tuples.size() < config.n_tuples && attempts < bank.max_attempts) {
    ++attempts;
    chosen.clear();
    chosen_points.clear();
    const auto start = static_cast<std::uint32_t>(stream.uniform_int(pool.size()));
    chosen.push_back(start);
    chosen_points.push_back(pool.points[start]);
    while (chosen.size() < m) {
      std::optional<Disk> band;
      if (config.growth == GrowthRule::Compact) {
        const PlanePoint c = mean_of(chosen_points);
        const auto closest = tree.nearest_admissible(c, chosen_points, step_radius, chosen);
        if (!closest) break;
        band = Disk{c, distance(pool.points[*closest], c) + config.compact_tolerance * step_radius};
      }
      const std::size_t available =
          tree.count_admissible(chosen_points, step_radius, chosen, band);
      if (available == 0) break;
      const std::size_t rank = stream.uniform_int(available);
      const std::uint32_t next =
          tree.select_admissible(chosen_points, step_radius, chosen, rank, band);
      chosen.push_back(next);
      chosen_points.push_back(pool.points[next]);
    }
    if (chosen.size() != m) continue;

    std::vector<PlanePoint> renormalized = normalize_energy(center(chosen_points));
    if (min_pairwise_distance(renormalized) < config.d_min) continue;

    std::vector<std::uint32_t> key = chosen;
    std::sort(key.begin(), key.end());
    if (!used_sets.insert(std::move(key)).second) continue;

    EcmTuple tuple;
    tuple.scalars.reserve(m);
    for (auto idx : chosen) tuple.scalars.push_back(pool.scalars[idx]);
    tuple.points = std::move(renormalized);
    bank.tuples.push_back(std::move(tuple));
  }

  bank.attempts_used = attempts;
  if (bank.tuples.size() < config.n_tuples) {
    result.exhausted = true;
    bank.partial = true;
    result.diagnostic = "ExhaustedAttempts: found " + std::to_string(bank.tuples.size()) + " of " +
                        std::to_string(config.n_tuples) + " tuples in " +
                        std::to_string(attempts) + " attempts";
  }
  return result;
}

GenerationResult generate_tuples(const Seed& seed, const CurveParams& curve,
                                 const TupleGenConfig& config) {
  check_config(config);
  if (config.pool_size < static_cast<std::size_t>(config.order)) {
    throw Error(ErrorKind::PoolTooSmall, "pool smaller than M");
  }
  const CandidatePool pool = gen_candidate_pool(seed, config.pool_size, curve);
  const KdTree2D tree(pool.points);
  return generate_tuples(seed, curve.name, pool, tree, config);
}

bool validate_tuple(const EcmTuple& tuple, int order, double d_min, double tol) {
  const auto m = static_cast<std::size_t>(order);
  if (tuple.points.size() != m || tuple.scalars.size() != m) return false;
  double sx = 0.0, sy = 0.0, energy = 0.0;
  for (const auto& p : tuple.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
    sx += p.x;
    sy += p.y;
    energy += p.x * p.x + p.y * p.y;
  }
  const double n = static_cast<double>(m);
  if (std::fabs(sx / n) > tol || std::fabs(sy / n) > tol) return false;
  if (std::fabs(energy / n - 1.0) > tol) return false;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dx = tuple.points[i].x - tuple.points[j].x;
      const double dy = tuple.points[i].y - tuple.points[j].y;
      if (std::sqrt(dx * dx + dy * dy) < d_min - 1e-12) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Estimators

double LogCount::log10() const { return ln / std::numbers::ln10; }

long LogCount::exponent() const { return static_cast<long>(std::floor(log10())); }

double LogCount::mantissa() const {
  return std::pow(10.0, log10() - static_cast<double>(exponent()));
}

std::string LogCount::scientific(int digits) const {
  long e = exponent();
  double mant = mantissa();
  // Rounding can carry the mantissa to 10.
  const double scale = std::pow(10.0, digits - 1);
  mant = std::round(mant * scale) / scale;
  if (mant >= 10.0) {
    mant /= 10.0;
    ++e;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*fe%+03ld", digits - 1, mant, e);
  return buf;
}

namespace {

double exclusion_fraction(double pool_size, int order, double d_min, double area) {
  if (order < 2) throw Error(ErrorKind::InvalidArgument, "M must be at least 2");
  if (static_cast<double>(order) > pool_size) {
    throw Error(ErrorKind::InvalidArgument, "M must not exceed L");
  }
  if (!(area > 0.0) || d_min < 0.0) throw Error(ErrorKind::InvalidArgument, "bad d_min or area");
  const double x = std::numbers::pi * d_min * d_min / area;
  if (x >= 1.0) throw Error(ErrorKind::ConstraintInfeasible, "pi d_min^2 >= A");
  return x;
}

}  // namespace

LogCount expected_tuples_exact(double pool_size, int order, double d_min, double area) {
  const double x = exclusion_fraction(pool_size, order, d_min, area);
  const double m = order;
  const double ln_binom =
      std::lgamma(pool_size + 1.0) - std::lgamma(m + 1.0) - std::lgamma(pool_size - m + 1.0);
  const double pairs = m * (m - 1.0) / 2.0;
  return {ln_binom + pairs * std::log1p(-x)};
}

LogCount expected_tuples_approx(double pool_size, int order, double d_min, double area) {
  const double x = exclusion_fraction(pool_size, order, d_min, area);
  const double m = order;
  const double pairs = m * (m - 1.0) / 2.0;
  return {m * std::log(pool_size) - std::lgamma(m + 1.0) - x * pairs};
}

}  // namespace ecm
