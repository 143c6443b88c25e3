#include "ecm/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ecm/error.hpp"

namespace ecm {

namespace {

double axis_value(const PlanePoint& p, int axis) { return axis == 0 ? p.x : p.y; }

double min_dist_sq(PlanePoint c, double min_x, double min_y, double max_x, double max_y) {
  const double dx = c.x < min_x ? min_x - c.x : (c.x > max_x ? c.x - max_x : 0.0);
  const double dy = c.y < min_y ? min_y - c.y : (c.y > max_y ? c.y - max_y : 0.0);
  return dx * dx + dy * dy;
}

double max_dist_sq(PlanePoint c, double min_x, double min_y, double max_x, double max_y) {
  const double dx = std::max(c.x - min_x, max_x - c.x);
  const double dy = std::max(c.y - min_y, max_y - c.y);
  return dx * dx + dy * dy;
}

}  // namespace

KdTree2D::KdTree2D(std::span<const PlanePoint> points)
    : points_(points.begin(), points.end()) {
  if (points_.empty()) throw Error(ErrorKind::EmptyPool, "cannot build a tree over zero points");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  boxes_.resize(points_.size());
  height_ = build(0, points_.size(), 0);
  position_.resize(points_.size());
  for (std::size_t pos = 0; pos < order_.size(); ++pos) {
    position_[order_[pos]] = static_cast<std::uint32_t>(pos);
  }
}

int KdTree2D::build(std::size_t lo, std::size_t hi, int depth) {
  if (lo >= hi) return 0;
  const int axis = depth % 2;
  const std::size_t mid = lo + (hi - lo) / 2;
  // Total order: split coordinate, then the other coordinate, then index.
  auto less = [&](std::uint32_t a, std::uint32_t b) {
    const double ka = axis_value(points_[a], axis), kb = axis_value(points_[b], axis);
    if (ka != kb) return ka < kb;
    const double oa = axis_value(points_[a], 1 - axis), ob = axis_value(points_[b], 1 - axis);
    if (oa != ob) return oa < ob;
    return a < b;
  };
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(lo),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(hi), less);
  Box box{points_[order_[lo]].x, points_[order_[lo]].y, points_[order_[lo]].x,
          points_[order_[lo]].y};
  for (std::size_t i = lo; i < hi; ++i) {
    const PlanePoint& p = points_[order_[i]];
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  boxes_[mid] = box;
  const int left = build(lo, mid, depth + 1);
  const int right = build(mid + 1, hi, depth + 1);
  return 1 + std::max(left, right);
}

KdTree2D::Query KdTree2D::make_query(std::span<const PlanePoint> centers, double radius,
                                     std::span<const std::uint32_t> excluded,
                                     std::optional<Disk> within) const {
  Query q{centers, radius * radius, {}, within, 0.0};
  if (within) q.within_sq = within->radius * within->radius;
  q.excluded_positions.reserve(excluded.size());
  for (auto idx : excluded) q.excluded_positions.push_back(position_.at(idx));
  std::sort(q.excluded_positions.begin(), q.excluded_positions.end());
  q.excluded_positions.erase(std::unique(q.excluded_positions.begin(), q.excluded_positions.end()),
                             q.excluded_positions.end());
  return q;
}

KdTree2D::Region KdTree2D::classify(const Box& box, const Query& q) const {
  bool outside_all = true;
  if (q.within) {
    const PlanePoint f = q.within->center;
    if (min_dist_sq(f, box.min_x, box.min_y, box.max_x, box.max_y) > q.within_sq) {
      return Region::Inside;
    }
    if (max_dist_sq(f, box.min_x, box.min_y, box.max_x, box.max_y) > q.within_sq) {
      outside_all = false;
    }
  }
  for (const auto& c : q.centers) {
    if (max_dist_sq(c, box.min_x, box.min_y, box.max_x, box.max_y) < q.radius_sq) {
      return Region::Inside;
    }
    if (min_dist_sq(c, box.min_x, box.min_y, box.max_x, box.max_y) < q.radius_sq) {
      outside_all = false;
    }
  }
  return outside_all ? Region::Outside : Region::Straddling;
}

bool KdTree2D::admissible(std::size_t pos, const Query& q) const {
  const PlanePoint& p = points_[order_[pos]];
  for (const auto& c : q.centers) {
    if (distance_sq(p, c) < q.radius_sq) return false;
  }
  if (q.within && distance_sq(p, q.within->center) > q.within_sq) return false;
  return !std::binary_search(q.excluded_positions.begin(), q.excluded_positions.end(),
                             static_cast<std::uint32_t>(pos));
}

std::size_t KdTree2D::excluded_in(std::size_t lo, std::size_t hi, const Query& q) const {
  const auto& ex = q.excluded_positions;
  return static_cast<std::size_t>(std::lower_bound(ex.begin(), ex.end(), hi) -
                                  std::lower_bound(ex.begin(), ex.end(), lo));
}

std::size_t KdTree2D::count(std::size_t lo, std::size_t hi, const Query& q) const {
  if (lo >= hi) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  switch (classify(boxes_[mid], q)) {
    case Region::Inside: return 0;
    case Region::Outside: return (hi - lo) - excluded_in(lo, hi, q);
    case Region::Straddling: break;
  }
  return count(lo, mid, q) + (admissible(mid, q) ? 1 : 0) + count(mid + 1, hi, q);
}

std::size_t KdTree2D::select(std::size_t lo, std::size_t hi, const Query& q,
                             std::size_t rank) const {
  const std::size_t mid = lo + (hi - lo) / 2;
  if (classify(boxes_[mid], q) == Region::Outside) {
    // Every non-excluded position in [lo, hi) is admissible; skip exclusions.
    std::size_t pos = lo + rank;
    const auto& ex = q.excluded_positions;
    for (auto it = std::lower_bound(ex.begin(), ex.end(), lo); it != ex.end() && *it <= pos; ++it) {
      ++pos;
    }
    return pos;
  }
  const std::size_t left = count(lo, mid, q);
  if (rank < left) return select(lo, mid, q, rank);
  rank -= left;
  if (admissible(mid, q)) {
    if (rank == 0) return mid;
    --rank;
  }
  return select(mid + 1, hi, q, rank);
}

std::size_t KdTree2D::count_admissible(std::span<const PlanePoint> centers, double radius,
                                       std::span<const std::uint32_t> excluded,
                                       std::optional<Disk> within) const {
  const Query q = make_query(centers, radius, excluded, within);
  return count(0, order_.size(), q);
}

std::uint32_t KdTree2D::select_admissible(std::span<const PlanePoint> centers, double radius,
                                          std::span<const std::uint32_t> excluded,
                                          std::size_t rank, std::optional<Disk> within) const {
  const Query q = make_query(centers, radius, excluded, within);
  if (rank >= count(0, order_.size(), q)) {
    throw Error(ErrorKind::InvalidArgument, "rank exceeds the admissible count");
  }
  return order_[select(0, order_.size(), q, rank)];
}

void KdTree2D::nearest(std::size_t lo, std::size_t hi, PlanePoint target, const Query& q,
                       std::optional<std::uint32_t>& best, double& best_sq) const {
  if (lo >= hi) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  const Box& b = boxes_[mid];
  if (min_dist_sq(target, b.min_x, b.min_y, b.max_x, b.max_y) > best_sq) return;
  if (classify(b, q) == Region::Inside) return;
  if (admissible(mid, q)) {
    const std::uint32_t idx = order_[mid];
    const double d2 = distance_sq(points_[idx], target);
    if (d2 < best_sq || (d2 == best_sq && (!best || idx < *best))) {
      best = idx;
      best_sq = d2;
    }
  }
  const std::size_t left_lo = lo, left_hi = mid, right_lo = mid + 1, right_hi = hi;
  auto box_sq = [&](std::size_t a, std::size_t z) {
    if (a >= z) return best_sq;
    const Box& c = boxes_[a + (z - a) / 2];
    return min_dist_sq(target, c.min_x, c.min_y, c.max_x, c.max_y);
  };
  if (box_sq(left_lo, left_hi) <= box_sq(right_lo, right_hi)) {
    nearest(left_lo, left_hi, target, q, best, best_sq);
    nearest(right_lo, right_hi, target, q, best, best_sq);
  } else {
    nearest(right_lo, right_hi, target, q, best, best_sq);
    nearest(left_lo, left_hi, target, q, best, best_sq);
  }
}

std::optional<std::uint32_t> KdTree2D::nearest_admissible(
    PlanePoint target, std::span<const PlanePoint> centers, double radius,
    std::span<const std::uint32_t> excluded) const {
  const Query q = make_query(centers, radius, excluded, std::nullopt);
  std::optional<std::uint32_t> best;
  double best_sq = std::numeric_limits<double>::infinity();
  nearest(0, order_.size(), target, q, best, best_sq);
  return best;
}

void KdTree2D::collect(std::size_t lo, std::size_t hi, PlanePoint c, double r2,
                       std::vector<std::uint32_t>& out) const {
  if (lo >= hi) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  const Box& b = boxes_[mid];
  if (min_dist_sq(c, b.min_x, b.min_y, b.max_x, b.max_y) >= r2) return;
  if (max_dist_sq(c, b.min_x, b.min_y, b.max_x, b.max_y) < r2) {
    out.insert(out.end(), order_.begin() + static_cast<std::ptrdiff_t>(lo),
               order_.begin() + static_cast<std::ptrdiff_t>(hi));
    return;
  }
  if (distance_sq(points_[order_[mid]], c) < r2) out.push_back(order_[mid]);
  collect(lo, mid, c, r2, out);
  collect(mid + 1, hi, c, r2, out);
}

std::vector<std::uint32_t> KdTree2D::radius_query(PlanePoint center, double radius) const {
  std::vector<std::uint32_t> out;
  collect(0, order_.size(), center, radius * radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool KdTree2D::check(std::size_t lo, std::size_t hi, int depth) const {
  if (lo >= hi) return true;
  const int axis = depth % 2;
  const std::size_t mid = lo + (hi - lo) / 2;
  const double split = axis_value(points_[order_[mid]], axis);
  const Box& b = boxes_[mid];
  for (std::size_t i = lo; i < hi; ++i) {
    const PlanePoint& p = points_[order_[i]];
    if (p.x < b.min_x || p.x > b.max_x || p.y < b.min_y || p.y > b.max_y) return false;
    if (i < mid && axis_value(p, axis) > split) return false;
    if (i > mid && axis_value(p, axis) < split) return false;
  }
  return check(lo, mid, depth + 1) && check(mid + 1, hi, depth + 1);
}

bool KdTree2D::check_structure() const { return check(0, order_.size(), 0); }

std::vector<std::uint32_t> admissible_query(const KdTree2D& tree,
                                            std::span<const PlanePoint> selected, double d_min,
                                            std::span<const std::uint8_t> mask) {
  if (mask.size() != tree.size()) {
    throw Error(ErrorKind::InvalidArgument, "mask length must equal the pool size");
  }
  std::vector<std::uint8_t> keep(mask.begin(), mask.end());
  for (const auto& c : selected) {
    for (auto idx : tree.radius_query(c, d_min)) keep[idx] = 0;
  }
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

}  // namespace ecm
