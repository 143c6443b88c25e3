#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "ecm/curves.hpp"
#include "ecm/ec_core.hpp"
#include "ecm/random_stream.hpp"
#include "support.hpp"

using namespace ecm;

namespace {

// Independent small-integer model of the group law, used as an oracle.
struct Toy {
  std::int64_t p, a, b;

  std::int64_t mod(std::int64_t v) const { return ((v % p) + p) % p; }
  std::int64_t pow(std::int64_t base, std::int64_t e) const {
    std::int64_t r = 1;
    base = mod(base);
    while (e > 0) {
      if (e & 1) r = r * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return r;
  }
  std::int64_t inv(std::int64_t v) const { return pow(v, p - 2); }

  using Pt = std::optional<std::pair<std::int64_t, std::int64_t>>;

  Pt add(Pt P, Pt Q) const {
    if (!P) return Q;
    if (!Q) return P;
    auto [x1, y1] = *P;
    auto [x2, y2] = *Q;
    std::int64_t l;
    if (x1 == x2) {
      if (mod(y1 + y2) == 0) return std::nullopt;
      l = mod((3 * x1 % p * x1 + a) % p * inv(2 * y1));
    } else {
      l = mod(mod(y2 - y1) * inv(mod(x2 - x1)));
    }
    const std::int64_t x3 = mod(l * l - x1 - x2);
    const std::int64_t y3 = mod(l * mod(x1 - x3) - y1);
    return std::make_pair(x3, y3);
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> points() const {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t x = 0; x < p; ++x) {
      for (std::int64_t y = 0; y < p; ++y) {
        if (mod(y * y - (x * x % p * x + a * x + b)) == 0) out.emplace_back(x, y);
      }
    }
    return out;
  }
};

Toy::Pt to_toy(const CurvePoint& P) {
  if (P.is_infinity()) return std::nullopt;
  return std::make_pair(static_cast<std::int64_t>(P.x().value().get_si()),
                        static_cast<std::int64_t>(P.y().value().get_si()));
}

Toy toy_of(const CurveParams& c) {
  return {c.p().get_si(), c.a.value().get_si(), c.b.value().get_si()};
}

bool hasse(std::size_t count, const BigInt& p) {
  const double pp = p.get_d();
  return std::fabs(static_cast<double>(count) - (pp + 1.0)) <= 2.0 * std::sqrt(pp);
}

}  // namespace

TEST_SUITE("ec_core") {

TEST_CASE("field elements stay canonical") {
  const PrimeField f(BigInt(17));
  CHECK(f.element(BigInt(-1)).value() == 16);
  CHECK(f.element(BigInt(35)).value() == 1);
  CHECK(f.add(f.element(BigInt(16)), f.element(BigInt(5))).value() == 4);
  CHECK(f.sub(f.element(BigInt(3)), f.element(BigInt(5))).value() == 15);
  CHECK(f.mul(f.element(BigInt(6)), f.inv(f.element(BigInt(6)))).value() == 1);
  CHECK(f.neg(f.zero()).is_zero());
  CHECK_THROWS_AS(f.inv(f.zero()), Error);
}

TEST_CASE("toy17 enumeration matches the brute-force sweep") {
  const CurveParams c = toy_curve_17();
  const Toy t = toy_of(c);
  const auto pts = enumerate_points(c);
  CHECK(pts.size() == 19);
  CHECK(pts.back().is_infinity());
  std::set<std::pair<std::int64_t, std::int64_t>> got;
  for (const auto& P : pts) {
    if (!P.is_infinity()) got.insert(*to_toy(P));
  }
  const auto expected = t.points();
  CHECK(got == std::set<std::pair<std::int64_t, std::int64_t>>(expected.begin(), expected.end()));
  CHECK(hasse(pts.size(), c.p()));
}

TEST_CASE("p=5 a=1 b=1 obeys the Hasse bound") {
  CurveParams c = CurveParams::make("p5", BigInt(5), BigInt(1), BigInt(1), BigInt(0), BigInt(1),
                                    BigInt(9));
  const auto pts = enumerate_points(c);
  CHECK(hasse(pts.size(), c.p()));
  CHECK(pts.size() == 9);
}

TEST_CASE("singular curves are rejected before enumeration") {
  CurveParams c = CurveParams::make("sing", BigInt(17), BigInt(0), BigInt(0), BigInt(1), BigInt(1),
                                    BigInt(17));
  CHECK(is_singular(c));
  CHECK_THROWS_AS(enumerate_points(c), Error);
  CHECK(validate_curve(c).status == CurveStatus::SingularCurve);
}

TEST_CASE("enumeration refuses large fields") {
  try {
    enumerate_points(secp256k1());
    FAIL("expected FieldTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FieldTooLarge);
  }
}

TEST_CASE("toy17 group law agrees with the oracle on every pair") {
  const CurveParams c = toy_curve_17();
  const Toy t = toy_of(c);
  const auto pts = enumerate_points(c);
  for (const auto& P : pts) {
    for (const auto& Q : pts) {
      const CurvePoint R = point_add(P, Q, c);
      CHECK(to_toy(R) == t.add(to_toy(P), to_toy(Q)));
      CHECK(on_curve(R, c));
      CHECK(R == point_add(Q, P, c));
    }
  }
}

TEST_CASE("toy17 associativity on all triples") {
  const CurveParams c = toy_curve_17();
  const auto pts = enumerate_points(c);
  for (const auto& P : pts) {
    for (const auto& Q : pts) {
      const CurvePoint PQ = point_add(P, Q, c);
      for (const auto& R : pts) {
        REQUIRE(point_add(PQ, R, c) == point_add(P, point_add(Q, R, c), c));
      }
    }
  }
}

TEST_CASE("identity, inverse and doubling of (5,1)") {
  const CurveParams c = toy_curve_17();
  const CurvePoint G = c.g;
  CHECK(point_add(G, CurvePoint::infinity(), c) == G);
  CHECK(point_add(G, negate(G, c), c).is_infinity());
  CHECK(negate(G, c).y().value() == 16);
  // 2G read off the cyclic group generated by (5,1) via the oracle.
  const Toy t = toy_of(c);
  const auto twoG = t.add(to_toy(G), to_toy(G));
  CHECK(to_toy(point_double(G, c)) == twoG);
  CHECK(to_toy(point_add(G, G, c)) == twoG);
  CHECK(*twoG == std::make_pair<std::int64_t, std::int64_t>(6, 3));
}

TEST_CASE("scalar_mul equals repeated addition on both toy curves") {
  for (const CurveParams& c : {toy_curve_17(), toy_curve_10007()}) {
    const Toy t = toy_of(c);
    Toy::Pt acc;
    const long n = c.n.get_si();
    for (long k = 0; k <= n; ++k) {
      REQUIRE(to_toy(scalar_mul(BigInt(k), c.g, c)) == acc);
      acc = t.add(acc, to_toy(c.g));
    }
    CHECK(scalar_mul(c.n, c.g, c).is_infinity());
  }
}

TEST_CASE("toy10007 is a prime-order group within the Hasse bound") {
  const CurveParams c = toy_curve_10007();
  CHECK(validate_curve(c).ok());
  const auto pts = enumerate_points(c);
  CHECK(BigInt(static_cast<unsigned long>(pts.size())) == c.n);
  CHECK(hasse(pts.size(), c.p()));
  for (std::size_t i = 0; i < pts.size(); i += 97) CHECK(on_curve(pts[i], c));
}

TEST_CASE("secp256k1 constants") {
  const CurveParams c = secp256k1();
  CHECK(validate_curve(c).ok());
  CHECK(scalar_mul(BigInt(1), c.g, c) == c.g);
  CHECK(scalar_mul(c.n, c.g, c).is_infinity());
  const CurvePoint two = scalar_mul(BigInt(2), c.g, c);
  CHECK(two.x().value() ==
        BigInt("c6047f9441ed7d6d3045406e95c07cd85c778e4b8cef3ca7abac09b95c709ee5", 16));
  CHECK(two.y().value() ==
        BigInt("1ae168fea63dc339a3c58419466ceaeef7f632653266d0e1236431a950cfe52a", 16));
  CHECK(scalar_mul(c.n - 1, c.g, c) == negate(c.g, c));
}

TEST_CASE("secp256k1 sampled homomorphism, closure and fixed-base table") {
  const CurveParams c = secp256k1();
  const FixedBaseTable table(c);
  RandomStream rng = derive_stream(test::seed_a(), "ec-test");
  for (int i = 0; i < 8; ++i) {
    const BigInt k1 = rng.uniform_big(c.n / 2) + 1;
    const BigInt k2 = rng.uniform_big(c.n / 2) + 1;
    const CurvePoint P1 = scalar_mul(k1, c.g, c);
    const CurvePoint P2 = scalar_mul(k2, c.g, c);
    CHECK(on_curve(P1, c));
    CHECK(scalar_mul(k1 + k2, c.g, c) == point_add(P1, P2, c));
    CHECK(table.mul(k1) == P1);
    const CurvePoint P3 = scalar_mul(rng.uniform_big(c.n), c.g, c);
    CHECK(point_add(point_add(P1, P2, c), P3, c) == point_add(P1, point_add(P2, P3, c), c));
    CHECK(P1.x().value() < c.p());
    CHECK(P1.x().value() >= 0);
  }
}

TEST_CASE("scalar and curve validation errors") {
  const CurveParams c = toy_curve_17();
  CHECK_THROWS_AS(Scalar(BigInt(0), c.n), Error);
  CHECK_THROWS_AS(Scalar(c.n, c.n), Error);
  CHECK_NOTHROW(Scalar(BigInt(1), c.n));

  CurveParams off = CurveParams::make("off", BigInt(17), BigInt(2), BigInt(2), BigInt(5),
                                      BigInt(2), BigInt(19));
  CHECK(validate_curve(off).status == CurveStatus::BasePointOffCurve);
  CurveParams wrong = CurveParams::make("wrong", BigInt(17), BigInt(2), BigInt(2), BigInt(5),
                                        BigInt(1), BigInt(23));
  CHECK(validate_curve(wrong).status == CurveStatus::WrongOrder);
  try {
    require_valid_curve(wrong);
    FAIL("expected WrongOrder");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongOrder);
  }

  const CurvePoint bad(c.field.element(BigInt(5)), c.field.element(BigInt(2)));
  try {
    point_add_checked(bad, c.g, c);
    FAIL("expected PointOffCurve");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PointOffCurve);
  }
}

}  // TEST_SUITE
