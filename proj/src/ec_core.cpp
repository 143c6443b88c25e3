#include "ecm/ec_core.hpp"

#include <cstdint>
#include <algorithm>

namespace ecm {

// ---------------------------------------------------------------------------
// PrimeField

PrimeField::PrimeField(BigInt p) : p_(std::move(p)) {
  if (p_ < 2) throw Error(ErrorKind::InvalidArgument, "field modulus must be >= 2");
}

FieldElement PrimeField::element(const BigInt& v) const {
  BigInt r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), p_.get_mpz_t());
  return FieldElement(std::move(r));
}

FieldElement PrimeField::add(const FieldElement& a, const FieldElement& b) const {
  BigInt r = a.value_ + b.value_;
  if (r >= p_) r -= p_;
  return FieldElement(std::move(r));
}

FieldElement PrimeField::sub(const FieldElement& a, const FieldElement& b) const {
  BigInt r = a.value_ - b.value_;
  if (r < 0) r += p_;
  return FieldElement(std::move(r));
}

FieldElement PrimeField::mul(const FieldElement& a, const FieldElement& b) const {
  BigInt r = a.value_ * b.value_;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
  return FieldElement(std::move(r));
}

FieldElement PrimeField::neg(const FieldElement& a) const {
  if (a.is_zero()) return a;
  return FieldElement(p_ - a.value_);
}

FieldElement PrimeField::inv(const FieldElement& a) const {
  BigInt r;
  if (a.is_zero() || mpz_invert(r.get_mpz_t(), a.value_.get_mpz_t(), p_.get_mpz_t()) == 0) {
    throw Error(ErrorKind::InvalidArgument, "element has no inverse modulo p");
  }
  return FieldElement(std::move(r));
}

// ---------------------------------------------------------------------------
// Curve parameters and validation

CurveParams CurveParams::make(std::string name, const BigInt& p, const BigInt& a, const BigInt& b,
                              const BigInt& gx, const BigInt& gy, const BigInt& n) {
  CurveParams params;
  params.name = std::move(name);
  params.field = PrimeField(p);
  params.a = params.field.element(a);
  params.b = params.field.element(b);
  params.g = CurvePoint(params.field.element(gx), params.field.element(gy));
  params.n = n;
  return params;
}

Scalar::Scalar(BigInt k, const BigInt& n) : k_(std::move(k)) {
  if (k_ < 1 || k_ >= n) throw Error(ErrorKind::InvalidScalar, "scalar must satisfy 1 <= k < n");
}

bool is_singular(const CurveParams& params) {
  const PrimeField& f = params.field;
  const FieldElement a3 = f.mul(f.mul(params.a, params.a), params.a);
  const FieldElement b2 = f.mul(params.b, params.b);
  const FieldElement disc = f.add(f.mul(f.element(4), a3), f.mul(f.element(27), b2));
  return disc.is_zero();
}

namespace {

FieldElement curve_rhs(const FieldElement& x, const CurveParams& params) {
  const PrimeField& f = params.field;
  return f.add(f.mul(f.add(f.mul(x, x), params.a), x), params.b);
}

}  // namespace

bool on_curve(const CurvePoint& point, const CurveParams& params) {
  if (point.is_infinity()) return true;
  const PrimeField& f = params.field;
  return f.mul(point.y(), point.y()) == curve_rhs(point.x(), params);
}

CurveCheck validate_curve(const CurveParams& params) {
  if (params.p() <= 3 || mpz_probab_prime_p(params.p().get_mpz_t(), 40) == 0) {
    return {CurveStatus::FieldNotPrime, "p must be a prime greater than 3"};
  }
  if (is_singular(params)) {
    return {CurveStatus::SingularCurve, "discriminant 4a^3 + 27b^2 vanishes mod p"};
  }
  if (params.g.is_infinity() || !on_curve(params.g, params)) {
    return {CurveStatus::BasePointOffCurve, "G does not satisfy the curve equation"};
  }
  if (params.n < 2 || mpz_probab_prime_p(params.n.get_mpz_t(), 40) == 0) {
    return {CurveStatus::WrongOrder, "n must be prime"};
  }
  if (!scalar_mul(params.n, params.g, params).is_infinity()) {
    return {CurveStatus::WrongOrder, "n*G is not the point at infinity"};
  }
  return {};
}

void require_valid_curve(const CurveParams& params) {
  const CurveCheck check = validate_curve(params);
  switch (check.status) {
    case CurveStatus::Ok: return;
    case CurveStatus::SingularCurve: throw Error(ErrorKind::SingularCurve, check.message);
    case CurveStatus::BasePointOffCurve: throw Error(ErrorKind::BasePointOffCurve, check.message);
    case CurveStatus::WrongOrder: throw Error(ErrorKind::WrongOrder, check.message);
    case CurveStatus::FieldNotPrime: throw Error(ErrorKind::CurveInvalid, check.message);
  }
}

// ---------------------------------------------------------------------------
// Group law

CurvePoint negate(const CurvePoint& point, const CurveParams& params) {
  if (point.is_infinity()) return point;
  return CurvePoint(point.x(), params.field.neg(point.y()));
}

CurvePoint point_double(const CurvePoint& point, const CurveParams& params) {
  if (point.is_infinity() || point.y().is_zero()) return CurvePoint::infinity();
  const PrimeField& f = params.field;
  const FieldElement x2 = f.mul(point.x(), point.x());
  const FieldElement num = f.add(f.add(f.add(x2, x2), x2), params.a);
  const FieldElement lambda = f.mul(num, f.inv(f.add(point.y(), point.y())));
  const FieldElement x3 = f.sub(f.sub(f.mul(lambda, lambda), point.x()), point.x());
  const FieldElement y3 = f.sub(f.mul(lambda, f.sub(point.x(), x3)), point.y());
  return CurvePoint(x3, y3);
}

CurvePoint point_add(const CurvePoint& lhs, const CurvePoint& rhs, const CurveParams& params) {
#ifndef NDEBUG
  if (!on_curve(lhs, params) || !on_curve(rhs, params)) {
    throw Error(ErrorKind::PointOffCurve, "point_add input fails the curve equation");
  }
#endif
  if (lhs.is_infinity()) return rhs;
  if (rhs.is_infinity()) return lhs;
  const PrimeField& f = params.field;
  if (lhs.x() == rhs.x()) {
    if (lhs.y() == rhs.y()) return point_double(lhs, params);
    return CurvePoint::infinity();
  }
  const FieldElement lambda = f.mul(f.sub(rhs.y(), lhs.y()), f.inv(f.sub(rhs.x(), lhs.x())));
  const FieldElement x3 = f.sub(f.sub(f.mul(lambda, lambda), lhs.x()), rhs.x());
  const FieldElement y3 = f.sub(f.mul(lambda, f.sub(lhs.x(), x3)), lhs.y());
  return CurvePoint(x3, y3);
}

CurvePoint point_add_checked(const CurvePoint& lhs, const CurvePoint& rhs,
                             const CurveParams& params) {
  if (!on_curve(lhs, params) || !on_curve(rhs, params)) {
    throw Error(ErrorKind::PointOffCurve, "point_add input fails the curve equation");
  }
  return point_add(lhs, rhs, params);
}

CurvePoint scalar_mul(const BigInt& k, const CurvePoint& point, const CurveParams& params) {
  if (k < 0) throw Error(ErrorKind::InvalidScalar, "negative scalar");
  CurvePoint acc;
  const auto bits = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2));
  if (k == 0) return acc;
  for (long i = bits - 1; i >= 0; --i) {
    acc = point_double(acc, params);
    if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) acc = point_add(acc, point, params);
  }
  return acc;
}

CurvePoint scalar_mul(const Scalar& k, const CurvePoint& point, const CurveParams& params) {
  return scalar_mul(k.value(), point, params);
}

std::vector<CurvePoint> enumerate_points(const CurveParams& params, std::uint64_t p_bound) {
  if (is_singular(params)) throw Error(ErrorKind::SingularCurve, "cannot enumerate a singular curve");
  if (params.p() > BigInt(std::to_string(p_bound))) {
    throw Error(ErrorKind::FieldTooLarge, "p exceeds the enumeration bound");
  }
  const std::uint64_t p = params.p().get_ui();
  // One square root per quadratic residue; -1 marks non-residues.
  std::vector<std::int64_t> root(p, -1);
  for (std::uint64_t y = 0; y < p; ++y) {
    const std::uint64_t r = y * y % p;
    if (root[r] < 0) root[r] = static_cast<std::int64_t>(y);
  }
  const std::uint64_t a = params.a.value().get_ui();
  const std::uint64_t b = params.b.value().get_ui();
  const PrimeField& f = params.field;
  std::vector<CurvePoint> points;
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t rhs = ((x * x % p * x) % p + a * x % p + b) % p;
    if (root[rhs] < 0) continue;
    const auto y = static_cast<std::uint64_t>(root[rhs]);
    if (y == 0) {
      points.emplace_back(f.element(BigInt(std::to_string(x))), f.zero());
      continue;
    }
    const std::uint64_t lo = std::min(y, p - y);
    points.emplace_back(f.element(BigInt(std::to_string(x))), f.element(BigInt(std::to_string(lo))));
    points.emplace_back(f.element(BigInt(std::to_string(x))),
                        f.element(BigInt(std::to_string(p - lo))));
  }
  points.push_back(CurvePoint::infinity());
  return points;
}

// ---------------------------------------------------------------------------
// Fixed-base table

FixedBaseTable::FixedBaseTable(const CurveParams& params) : params_(params) {
  const auto bits = mpz_sizeinbase(params_.n.get_mpz_t(), 2);
  const std::size_t count = (bits + kWindowBits - 1) / kWindowBits;
  windows_.resize(count);
  CurvePoint base = params_.g;
  for (std::size_t w = 0; w < count; ++w) {
    auto& window = windows_[w];
    window[0] = CurvePoint::infinity();
    for (int d = 1; d < kWindowSize; ++d) window[d] = point_add(window[d - 1], base, params_);
    for (int i = 0; i < kWindowBits; ++i) base = point_double(base, params_);
  }
}

CurvePoint FixedBaseTable::mul(const BigInt& k) const {
  if (k < 0) throw Error(ErrorKind::InvalidScalar, "negative scalar");
  BigInt reduced;
  mpz_mod(reduced.get_mpz_t(), k.get_mpz_t(), params_.n.get_mpz_t());
  std::vector<unsigned char> bytes(windows_.size() + 1, 0);
  std::size_t written = 0;
  mpz_export(bytes.data(), &written, -1, 1, 0, 0, reduced.get_mpz_t());
  CurvePoint acc;
  for (std::size_t w = 0; w < written && w < windows_.size(); ++w) {
    if (bytes[w] != 0) acc = point_add(acc, windows_[w][bytes[w]], params_);
  }
  return acc;
}

}  // namespace ecm
