#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecm {

enum class ErrorKind {
  SingularCurve,
  BasePointOffCurve,
  WrongOrder,
  PointOffCurve,
  FieldTooLarge,
  InvalidScalar,
  CurveInvalid,
  InfinityPoint,
  EmptyInput,
  DegenerateAllZero,
  TooFewPoints,
  UnsupportedOrder,
  EmptyPool,
  PoolTooSmall,
  ConstraintInfeasible,
  LengthNotDivisible,
  ScheduleTooShort,
  BankMismatch,
  NoSamples,
  IoFailure,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ecm
