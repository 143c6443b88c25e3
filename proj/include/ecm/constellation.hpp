#pragma once

// Real-plane geometry of constellations: lifting curve points, centering,
// unit-energy scaling, distances and square QAM references.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ecm/ec_core.hpp"

namespace ecm {

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  friend PlanePoint operator+(PlanePoint a, PlanePoint b) { return {a.x + b.x, a.y + b.y}; }
  friend PlanePoint operator-(PlanePoint a, PlanePoint b) { return {a.x - b.x, a.y - b.y}; }
  friend PlanePoint operator*(double s, PlanePoint a) { return {s * a.x, s * a.y}; }
  friend bool operator==(PlanePoint a, PlanePoint b) { return a.x == b.x && a.y == b.y; }

  double norm_sq() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm_sq()); }
};

inline double distance(PlanePoint a, PlanePoint b) { return (a - b).norm(); }
inline double distance_sq(PlanePoint a, PlanePoint b) { return (a - b).norm_sq(); }

/// Counter-clockwise rotation by `angle` radians (complex multiplication by e^{j angle}).
inline PlanePoint rotate(PlanePoint p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

struct Constellation {
  std::vector<PlanePoint> points;
  double d_min = 0.0;

  std::size_t order() const noexcept { return points.size(); }
};

/// (x / p, y / p) for every point, each coordinate correctly rounded into [0, 1).
/// Throws InfinityPoint.
std::vector<PlanePoint> lift_to_plane(std::span<const CurvePoint> points, const BigInt& p);

/// Single coordinate v / p for 0 <= v < p.
double lift_coordinate(const BigInt& v, const BigInt& p);

PlanePoint centroid(std::span<const PlanePoint> points);
double average_energy(std::span<const PlanePoint> points);

/// Subtracts the centroid. Throws EmptyInput.
std::vector<PlanePoint> center(std::span<const PlanePoint> points);

/// Scales to unit average energy. Throws DegenerateAllZero (or EmptyInput).
std::vector<PlanePoint> normalize_energy(std::span<const PlanePoint> points);

/// Exact O(M^2) minimum over unordered pairs. Throws TooFewPoints.
double min_pairwise_distance(std::span<const PlanePoint> points);

/// Closed-form minimum distance of unit-energy square M-QAM: 2 / sqrt(2(M-1)/3).
double qam_min_distance(int order);

/// Gray-mapped square QAM for M in {4, 16, 64}: points[b] is the symbol for
/// the bit label b (first half of the bits selects I, second half Q).
/// Throws UnsupportedOrder.
Constellation qam_reference(int order);

/// "%.17g" rendering, which round-trips every double exactly.
std::string format_real(double v);

}  // namespace ecm
