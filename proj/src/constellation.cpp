#include "ecm/constellation.hpp"

#include <cstdint>
#include <cstdio>
#include <limits>

namespace ecm {

namespace {

// Neumaier-compensated sum so centering stays accurate over large pools.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double lift_coordinate(const BigInt& v, const BigInt& p) {
  // floor(v * 2^53 / p) < 2^53 is exactly representable, so the result stays below 1.
  BigInt scaled = v;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 53);
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), p.get_mpz_t());
  std::uint64_t q = 0;
  mpz_export(&q, nullptr, -1, sizeof(q), 0, 0, scaled.get_mpz_t());
  return std::ldexp(static_cast<double>(q), -53);
}

std::vector<PlanePoint> lift_to_plane(std::span<const CurvePoint> points, const BigInt& p) {
  std::vector<PlanePoint> out;
  out.reserve(points.size());
  for (const auto& pt : points) {
    if (pt.is_infinity()) throw Error(ErrorKind::InfinityPoint, "cannot lift the point at infinity");
    out.push_back({lift_coordinate(pt.x().value(), p), lift_coordinate(pt.y().value(), p)});
  }
  return out;
}

PlanePoint centroid(std::span<const PlanePoint> points) {
  if (points.empty()) throw Error(ErrorKind::EmptyInput, "centroid of an empty set");
  CompensatedSum sx, sy;
  for (const auto& p : points) {
    sx.add(p.x);
    sy.add(p.y);
  }
  const auto n = static_cast<double>(points.size());
  return {sx.value() / n, sy.value() / n};
}

double average_energy(std::span<const PlanePoint> points) {
  if (points.empty()) throw Error(ErrorKind::EmptyInput, "energy of an empty set");
  CompensatedSum s;
  for (const auto& p : points) s.add(p.norm_sq());
  return s.value() / static_cast<double>(points.size());
}

std::vector<PlanePoint> center(std::span<const PlanePoint> points) {
  const PlanePoint c = centroid(points);
  std::vector<PlanePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p - c);
  return out;
}

std::vector<PlanePoint> normalize_energy(std::span<const PlanePoint> points) {
  const double energy = average_energy(points);
  if (!(energy > 0.0)) throw Error(ErrorKind::DegenerateAllZero, "all points are at the origin");
  const double scale = 1.0 / std::sqrt(energy);
  std::vector<PlanePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(scale * p);
  return out;
}

double min_pairwise_distance(std::span<const PlanePoint> points) {
  if (points.size() < 2) throw Error(ErrorKind::TooFewPoints, "need at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::min(best, distance_sq(points[i], points[j]));
    }
  }
  return std::sqrt(best);
}

double qam_min_distance(int order) {
  return 2.0 / std::sqrt(2.0 * (order - 1) / 3.0);
}

Constellation qam_reference(int order) {
  int bits_per_axis = 0;
  switch (order) {
    case 4: bits_per_axis = 1; break;
    case 16: bits_per_axis = 2; break;
    case 64: bits_per_axis = 3; break;
    default: throw Error(ErrorKind::UnsupportedOrder, "QAM order must be 4, 16 or 64");
  }
  const int levels = 1 << bits_per_axis;
  const double scale = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
  auto gray_decode = [](int g) {
    int v = 0;
    for (; g != 0; g >>= 1) v ^= g;
    return v;
  };
  auto amplitude = [&](int label) {
    return scale * static_cast<double>(2 * gray_decode(label) - (levels - 1));
  };
  Constellation c;
  c.points.reserve(static_cast<std::size_t>(order));
  for (int label = 0; label < order; ++label) {
    const int i_label = label >> bits_per_axis;
    const int q_label = label & (levels - 1);
    c.points.push_back({amplitude(i_label), amplitude(q_label)});
  }
  c.d_min = 2.0 * scale;
  return c;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace ecm
