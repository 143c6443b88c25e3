#pragma once

// Prime-field and short-Weierstrass elliptic-curve arithmetic in affine
// coordinates. Everything here is a pure function of immutable values.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ecm/error.hpp"

namespace ecm {

using BigInt = mpz_class;

/// Element of F_p, always held in canonical form 0 <= value < p.
class FieldElement {
 public:
  FieldElement() = default;

  const BigInt& value() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_ == 0; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.value_ == b.value_;
  }

 private:
  friend class PrimeField;
  explicit FieldElement(BigInt v) : value_(std::move(v)) {}

  BigInt value_{0};
};

class PrimeField {
 public:
  explicit PrimeField(BigInt p);

  const BigInt& modulus() const noexcept { return p_; }

  /// Reduces any integer (negative included) into [0, p).
  FieldElement element(const BigInt& v) const;
  FieldElement zero() const { return FieldElement(BigInt(0)); }

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  /// Throws InvalidArgument for zero.
  FieldElement inv(const FieldElement& a) const;

 private:
  BigInt p_;
};

class CurvePoint {
 public:
  /// The point at infinity.
  CurvePoint() = default;
  CurvePoint(FieldElement x, FieldElement y) : infinity_(false), x_(std::move(x)), y_(std::move(y)) {}

  static CurvePoint infinity() { return CurvePoint(); }

  bool is_infinity() const noexcept { return infinity_; }
  const FieldElement& x() const noexcept { return x_; }
  const FieldElement& y() const noexcept { return y_; }

  friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
    if (a.infinity_ || b.infinity_) return a.infinity_ == b.infinity_;
    return a.x_ == b.x_ && a.y_ == b.y_;
  }

 private:
  bool infinity_ = true;
  FieldElement x_;
  FieldElement y_;
};

/// y^2 = x^3 + a x + b over F_p with base point G of order n.
struct CurveParams {
  std::string name;
  PrimeField field{BigInt(2)};
  FieldElement a;
  FieldElement b;
  CurvePoint g;
  BigInt n;

  /// Reduces the raw integers into the field; does not validate.
  static CurveParams make(std::string name, const BigInt& p, const BigInt& a, const BigInt& b,
                          const BigInt& gx, const BigInt& gy, const BigInt& n);

  const BigInt& p() const noexcept { return field.modulus(); }
};

/// Nonzero scalar strictly below the group order.
class Scalar {
 public:
  /// Throws InvalidScalar unless 1 <= k < n.
  Scalar(BigInt k, const BigInt& n);

  const BigInt& value() const noexcept { return k_; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.k_ == b.k_; }
  friend bool operator<(const Scalar& a, const Scalar& b) { return a.k_ < b.k_; }

 private:
  BigInt k_;
};

enum class CurveStatus { Ok, FieldNotPrime, SingularCurve, BasePointOffCurve, WrongOrder };

struct CurveCheck {
  CurveStatus status = CurveStatus::Ok;
  std::string message;

  bool ok() const noexcept { return status == CurveStatus::Ok; }
};

bool is_singular(const CurveParams& params);
bool on_curve(const CurvePoint& point, const CurveParams& params);

/// Accepts iff p is an odd prime > 3, the curve is non-singular, G lies on it
/// and n*G is the point at infinity with n prime.
CurveCheck validate_curve(const CurveParams& params);

/// Throws the matching Error when validate_curve rejects.
void require_valid_curve(const CurveParams& params);

CurvePoint negate(const CurvePoint& point, const CurveParams& params);

/// Chord-and-tangent group law. Inputs are verified against the curve
/// equation in debug builds only; see point_add_checked.
CurvePoint point_add(const CurvePoint& lhs, const CurvePoint& rhs, const CurveParams& params);

/// point_add with unconditional PointOffCurve checks on both inputs.
CurvePoint point_add_checked(const CurvePoint& lhs, const CurvePoint& rhs,
                             const CurveParams& params);

CurvePoint point_double(const CurvePoint& point, const CurveParams& params);

/// Left-to-right double-and-add. k = 0 yields infinity.
CurvePoint scalar_mul(const BigInt& k, const CurvePoint& point, const CurveParams& params);
CurvePoint scalar_mul(const Scalar& k, const CurvePoint& point, const CurveParams& params);

inline constexpr std::uint64_t kDefaultEnumerationBound = 1'000'000;

/// Every affine point plus infinity (last). Throws SingularCurve or
/// FieldTooLarge when p exceeds the bound.
std::vector<CurvePoint> enumerate_points(const CurveParams& params,
                                         std::uint64_t p_bound = kDefaultEnumerationBound);

/// Precomputed multiples d * 2^(8w) * G for fast fixed-base multiplication.
/// Produces exactly scalar_mul(k, G) with one affine addition per nonzero
/// scalar byte instead of a full double-and-add chain.
class FixedBaseTable {
 public:
  explicit FixedBaseTable(const CurveParams& params);

  CurvePoint mul(const BigInt& k) const;

 private:
  static constexpr int kWindowBits = 8;
  static constexpr int kWindowSize = 1 << kWindowBits;

  CurveParams params_;
  std::vector<std::array<CurvePoint, kWindowSize>> windows_;
};

}  // namespace ecm
