#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "ecm/bank_io.hpp"
#include "ecm/curves.hpp"
#include "ecm/tuplegen.hpp"
#include "support.hpp"

using namespace ecm;

namespace {

bool pool_is_normalized(const CandidatePool& pool) {
  const PlanePoint c = centroid(pool.points);
  return std::fabs(c.x) < 1e-12 && std::fabs(c.y) < 1e-12 &&
         std::fabs(average_energy(pool.points) - 1.0) < 1e-12;
}

}  // namespace

TEST_SUITE("tuplegen") {

TEST_CASE("candidate pool: distinct scalars, centred and unit energy") {
  const CurveParams c = secp256k1();
  const CandidatePool pool = gen_candidate_pool(test::seed_a(), 2000, c);
  REQUIRE(pool.size() == 2000);
  REQUIRE(pool.scalars.size() == 2000);
  CHECK(std::set<Scalar>(pool.scalars.begin(), pool.scalars.end()).size() == 2000);
  CHECK(pool_is_normalized(pool));
  CHECK(pool.bounding_area > 0.0);

  const CandidatePool again = gen_candidate_pool(test::seed_a(), 2000, c);
  CHECK(again.scalars == pool.scalars);
  const CandidatePool other = gen_candidate_pool(test::seed_b(), 2000, c);
  CHECK(other.scalars != pool.scalars);
}

TEST_CASE("toy pool with L = n - 1 covers every scalar") {
  const CurveParams c = toy_curve_17();
  const CandidatePool pool = gen_candidate_pool(test::seed_b(), 18, c);
  std::set<long> ks;
  for (const auto& s : pool.scalars) ks.insert(s.value().get_si());
  CHECK(ks.size() == 18);
  CHECK(*ks.begin() == 1);
  CHECK(*ks.rbegin() == 18);
  CHECK(pool_is_normalized(pool));
}

TEST_CASE("pool size errors") {
  const CurveParams c = toy_curve_17();
  try {
    gen_candidate_pool(test::seed_a(), 19, c);
    FAIL("expected PoolTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoolTooSmall);
  }
  CHECK_THROWS_AS(gen_candidate_pool(test::seed_a(), 0, c), Error);
  TupleGenConfig cfg;
  cfg.order = 16;
  cfg.d_min = 0.1;
  cfg.pool_size = 8;
  try {
    generate_tuples(test::seed_a(), secp256k1(), cfg);
    FAIL("expected PoolTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoolTooSmall);
  }
}

TEST_CASE("config validation") {
  TupleGenConfig cfg;
  cfg.pool_size = 100;
  cfg.order = 6;
  CHECK_THROWS_AS(generate_tuples(test::seed_a(), secp256k1(), cfg), Error);
  cfg.order = 4;
  cfg.d_min = 0.0;
  CHECK_THROWS_AS(generate_tuples(test::seed_a(), secp256k1(), cfg), Error);
  cfg.d_min = 1.0;
  cfg.compact_tolerance = -1.0;
  CHECK_THROWS_AS(generate_tuples(test::seed_a(), secp256k1(), cfg), Error);
  CHECK(parse_growth("uniform") == GrowthRule::Uniform);
  CHECK(parse_growth(growth_name(GrowthRule::Compact)) == GrowthRule::Compact);
  CHECK_THROWS_AS(parse_growth("greedy"), Error);
}

TEST_CASE("generated banks validate and are reproducible") {
  const CurveParams c = secp256k1();
  for (GrowthRule rule : {GrowthRule::Compact, GrowthRule::Uniform}) {
    TupleGenConfig cfg;
    cfg.order = 4;
    cfg.d_min = 1.2;
    cfg.n_tuples = 20;
    cfg.pool_size = 3000;
    cfg.growth = rule;
    const GenerationResult r = generate_tuples(test::seed_a(), c, cfg);
    REQUIRE_FALSE(r.exhausted);
    REQUIRE(r.bank.size() == 20);
    CHECK(r.bank.seed_fingerprint == test::seed_a().fingerprint());
    CHECK(r.bank.growth == rule);
    std::set<std::vector<Scalar>> sets;
    for (const auto& t : r.bank.tuples) {
      CHECK(validate_tuple(t, 4, 1.2));
      CHECK(min_pairwise_distance(t.points) >= 1.2);
      std::vector<Scalar> s = t.scalars;
      std::sort(s.begin(), s.end());
      CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
      sets.insert(s);
      // Points are the scalars' lifts, re-centred and re-normalized per tuple.
      std::vector<CurvePoint> curve_pts;
      for (const auto& k : t.scalars) curve_pts.push_back(scalar_mul(k.value(), c.g, c));
      const auto expected = normalize_energy(center(lift_to_plane(curve_pts, c.p())));
      for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(std::fabs(expected[i].x - t.points[i].x) < 1e-9);
        CHECK(std::fabs(expected[i].y - t.points[i].y) < 1e-9);
      }
    }
    CHECK(sets.size() == 20);
    const GenerationResult again = generate_tuples(test::seed_a(), c, cfg);
    CHECK(serialize_bank(again.bank) == serialize_bank(r.bank));
  }
}

TEST_CASE("tuples near the square limit are found with compact growth") {
  TupleGenConfig cfg;
  cfg.order = 4;
  cfg.d_min = std::sqrt(2.0) * 0.97;
  cfg.n_tuples = 50;
  cfg.pool_size = 10000;
  const GenerationResult r = generate_tuples(test::seed_b(), secp256k1(), cfg);
  REQUIRE_FALSE(r.exhausted);
  for (const auto& t : r.bank.tuples) CHECK(validate_tuple(t, 4, cfg.d_min));
}

TEST_CASE("infeasible distance exhausts attempts with an empty bank") {
  TupleGenConfig cfg;
  cfg.order = 4;
  cfg.d_min = 10.0;
  cfg.n_tuples = 5;
  cfg.pool_size = 500;
  cfg.max_attempts = 40;
  const GenerationResult r = generate_tuples(test::seed_a(), secp256k1(), cfg);
  CHECK(r.exhausted);
  CHECK(r.bank.partial);
  CHECK(r.bank.size() == 0);
  CHECK(r.bank.attempts_used == 40);
  CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("validate_tuple rejects broken tuples") {
  TupleGenConfig cfg;
  cfg.order = 4;
  cfg.d_min = 1.0;
  cfg.n_tuples = 1;
  cfg.pool_size = 1000;
  const GenerationResult r = generate_tuples(test::seed_a(), secp256k1(), cfg);
  REQUIRE(r.bank.size() == 1);
  EcmTuple t = r.bank.tuples[0];
  CHECK(validate_tuple(t, 4, 1.0));
  CHECK_FALSE(validate_tuple(t, 8, 1.0));
  CHECK_FALSE(validate_tuple(t, 4, 3.0));
  t.points[0].x += 0.01;
  CHECK_FALSE(validate_tuple(t, 4, 1.0));
}

TEST_CASE("toy curve bank uses the whole group") {
  TupleGenConfig cfg;
  cfg.order = 4;
  cfg.d_min = 0.9;
  cfg.n_tuples = 3;
  cfg.pool_size = 18;
  cfg.growth = GrowthRule::Uniform;
  const GenerationResult r = generate_tuples(test::seed_a(), toy_curve_17(), cfg);
  for (const auto& t : r.bank.tuples) {
    CHECK(validate_tuple(t, 4, 0.9));
    for (const auto& s : t.scalars) CHECK(s.value() < 19);
  }
}

}  // TEST_SUITE
