#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ecm/kdtree.hpp"
#include "ecm/random_stream.hpp"
#include "support.hpp"

using namespace ecm;

namespace {

// Points on a coarse grid half the time so ties and duplicates are common.
std::vector<PlanePoint> random_points(RandomStream& rng, std::size_t n) {
  const bool grid = rng.uniform_int(2) == 0;
  std::vector<PlanePoint> pts(n);
  for (auto& p : pts) {
    if (grid) {
      p = {static_cast<double>(rng.uniform_int(9)) * 0.25 - 1.0,
           static_cast<double>(rng.uniform_int(9)) * 0.25 - 1.0};
    } else {
      p = {rng.uniform_real() * 2.0 - 1.0, rng.uniform_real() * 2.0 - 1.0};
    }
  }
  return pts;
}

bool admissible_brute(const PlanePoint& p, const std::vector<PlanePoint>& centers, double r) {
  for (const auto& c : centers) {
    if ((p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y) < r * r) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("kdtree") {

TEST_CASE("structure and height") {
  CHECK_THROWS_AS(KdTree2D(std::vector<PlanePoint>{}), Error);
  const KdTree2D one(std::vector<PlanePoint>{{0.5, 0.5}});
  CHECK(one.height() == 1);
  CHECK(one.size() == 1);

  std::vector<PlanePoint> line;
  for (int i = 0; i < 7; ++i) line.push_back({static_cast<double>(i), 0.0});
  const KdTree2D collinear(line);
  CHECK(collinear.height() == 3);
  CHECK(collinear.check_structure());

  RandomStream rng = derive_stream(test::seed_a(), "kd-height");
  for (std::size_t n : {2u, 3u, 100u, 1000u, 4097u}) {
    const KdTree2D t(random_points(rng, n));
    CHECK(t.check_structure());
    CHECK(t.height() <= static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1);
    for (std::uint32_t i = 0; i < n; ++i) REQUIRE(t.index_at(t.position_of(i)) == i);
  }
}

TEST_CASE("admissible_query trivial cases") {
  RandomStream rng = derive_stream(test::seed_a(), "kd-trivial");
  const auto pts = random_points(rng, 200);
  const KdTree2D t(pts);
  const std::vector<std::uint8_t> all(200, 1);
  const std::vector<PlanePoint> origin{{0.0, 0.0}};
  CHECK(admissible_query(t, origin, 0.0, all).size() == 200);
  CHECK(admissible_query(t, origin, 10.0, all).empty());
}

TEST_CASE("admissible_query and radius_query equal brute force on 1000 instances") {
  RandomStream rng = derive_stream(test::seed_b(), "kd-oracle");
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t n = 1 + rng.uniform_int(300);
    const auto pts = random_points(rng, n);
    const KdTree2D t(pts);
    std::vector<PlanePoint> sel(1 + rng.uniform_int(5));
    for (auto& s : sel) {
      s = rng.uniform_int(2) ? pts[rng.uniform_int(n)]
                             : PlanePoint{rng.uniform_real() * 2 - 1, rng.uniform_real() * 2 - 1};
    }
    const double r = rng.uniform_int(4) == 0 ? 0.25 : rng.uniform_real() * 1.2;
    std::vector<std::uint8_t> mask(n);
    for (auto& m : mask) m = rng.uniform_int(5) != 0;

    std::vector<std::uint32_t> expected;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask[i] && admissible_brute(pts[i], sel, r)) expected.push_back(i);
    }
    REQUIRE(admissible_query(t, sel, r, mask) == expected);

    std::vector<std::uint32_t> near;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (distance_sq(pts[i], sel[0]) < r * r) near.push_back(i);
    }
    REQUIRE(t.radius_query(sel[0], r) == near);
  }
}

TEST_CASE("count, select and nearest agree with brute force") {
  RandomStream rng = derive_stream(test::seed_a(), "kd-select");
  for (int inst = 0; inst < 300; ++inst) {
    const std::size_t n = 1 + rng.uniform_int(400);
    const auto pts = random_points(rng, n);
    const KdTree2D t(pts);
    std::vector<PlanePoint> centers;
    std::vector<std::uint32_t> excluded;
    for (std::size_t k = 0, m = rng.uniform_int(4); k < m; ++k) {
      const auto idx = static_cast<std::uint32_t>(rng.uniform_int(n));
      excluded.push_back(idx);
      centers.push_back(pts[idx]);
    }
    const double r = rng.uniform_real() * 0.8;
    std::optional<Disk> within;
    if (rng.uniform_int(2)) {
      within = Disk{{rng.uniform_real() * 2 - 1, rng.uniform_real() * 2 - 1},
                    rng.uniform_real() * 1.5};
    }

    // Admissible indices listed in tree layout order.
    std::vector<std::uint32_t> layout;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::uint32_t idx = t.index_at(pos);
      if (std::find(excluded.begin(), excluded.end(), idx) != excluded.end()) continue;
      if (!admissible_brute(pts[idx], centers, r)) continue;
      if (within && distance_sq(pts[idx], within->center) > within->radius * within->radius) {
        continue;
      }
      layout.push_back(idx);
    }
    REQUIRE(t.count_admissible(centers, r, excluded, within) == layout.size());
    for (std::size_t k = 0; k < layout.size(); k += 1 + layout.size() / 7) {
      REQUIRE(t.select_admissible(centers, r, excluded, k, within) == layout[k]);
    }
    if (!layout.empty()) {
      CHECK_THROWS_AS(t.select_admissible(centers, r, excluded, layout.size(), within), Error);
    }

    const PlanePoint target{rng.uniform_real() * 2 - 1, rng.uniform_real() * 2 - 1};
    std::optional<std::uint32_t> best;
    double best_d = INFINITY;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (std::find(excluded.begin(), excluded.end(), i) != excluded.end()) continue;
      if (!admissible_brute(pts[i], centers, r)) continue;
      const double d = distance_sq(pts[i], target);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    REQUIRE(t.nearest_admissible(target, centers, r, excluded) == best);
  }
}

}  // TEST_SUITE
