#pragma once

// Balanced 2-d tree over a fixed point set, built by recursive median splits
// with alternating axes. Node i of the implicit layout is the median of its
// contiguous range; every node keeps the bounding box of its subtree.
//
// Besides plain radius queries the tree answers the question tuple synthesis
// needs: which points lie at distance >= r from *every* point of a selected
// set. Subtrees are classified as wholly inside one exclusion disk, wholly
// outside all of them, or straddling, so counting and uniform selection
// touch only the straddling boundary.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ecm/constellation.hpp"

namespace ecm {

/// Closed disk; used to restrict admissible queries to a neighbourhood.
struct Disk {
  PlanePoint center;
  double radius = 0.0;
};

class KdTree2D {
 public:
  /// Throws EmptyPool for an empty point set. The tree references `points`
  /// by copy; indices returned are indices into that set.
  explicit KdTree2D(std::span<const PlanePoint> points);

  std::size_t size() const noexcept { return order_.size(); }
  int height() const noexcept { return height_; }
  const PlanePoint& point(std::uint32_t index) const { return points_[index]; }

  /// Point index stored at layout position `pos`.
  std::uint32_t index_at(std::size_t pos) const { return order_[pos]; }
  /// Layout position of point `index`.
  std::uint32_t position_of(std::uint32_t index) const { return position_[index]; }

  /// Indices strictly closer than `radius` to `center`, ascending.
  std::vector<std::uint32_t> radius_query(PlanePoint center, double radius) const;

  /// Number of points at distance >= radius from every center, ignoring the
  /// indices in `excluded`. With `within`, only points inside that disk count.
  std::size_t count_admissible(std::span<const PlanePoint> centers, double radius,
                               std::span<const std::uint32_t> excluded,
                               std::optional<Disk> within = std::nullopt) const;

  /// The `rank`-th admissible point in layout order (0-based). Requires
  /// rank < count_admissible(...) with the same arguments.
  std::uint32_t select_admissible(std::span<const PlanePoint> centers, double radius,
                                  std::span<const std::uint32_t> excluded, std::size_t rank,
                                  std::optional<Disk> within = std::nullopt) const;

  /// Admissible point closest to `target` (lowest index on ties), if any.
  std::optional<std::uint32_t> nearest_admissible(PlanePoint target,
                                                  std::span<const PlanePoint> centers,
                                                  double radius,
                                                  std::span<const std::uint32_t> excluded) const;

  /// Checks the median-split partition and bounding boxes of every node.
  bool check_structure() const;

 private:
  struct Box {
    double min_x, min_y, max_x, max_y;
  };
  enum class Region { Inside, Outside, Straddling };

  struct Query {
    std::span<const PlanePoint> centers;
    double radius_sq;
    std::vector<std::uint32_t> excluded_positions;  // sorted
    std::optional<Disk> within;
    double within_sq = 0.0;
  };

  int build(std::size_t lo, std::size_t hi, int depth);
  Region classify(const Box& box, const Query& q) const;
  bool admissible(std::size_t pos, const Query& q) const;
  std::size_t excluded_in(std::size_t lo, std::size_t hi, const Query& q) const;
  std::size_t count(std::size_t lo, std::size_t hi, const Query& q) const;
  std::size_t select(std::size_t lo, std::size_t hi, const Query& q, std::size_t rank) const;
  void collect(std::size_t lo, std::size_t hi, PlanePoint c, double r2,
               std::vector<std::uint32_t>& out) const;
  bool check(std::size_t lo, std::size_t hi, int depth) const;
  void nearest(std::size_t lo, std::size_t hi, PlanePoint target, const Query& q,
               std::optional<std::uint32_t>& best, double& best_sq) const;
  Query make_query(std::span<const PlanePoint> centers, double radius,
                   std::span<const std::uint32_t> excluded, std::optional<Disk> within) const;

  std::vector<PlanePoint> points_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> position_;
  std::vector<Box> boxes_;  // indexed by the node's median position
  int height_ = 0;
};

/// Every index with mask[i] != 0 whose point is at distance >= d_min from
/// every point in `selected`, ascending. Radius queries around each selected
/// point collect the violators, which are then removed from the mask.
std::vector<std::uint32_t> admissible_query(const KdTree2D& tree,
                                            std::span<const PlanePoint> selected, double d_min,
                                            std::span<const std::uint8_t> mask);

}  // namespace ecm
