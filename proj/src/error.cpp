#include "ecm/error.hpp"

namespace ecm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularCurve: return "SingularCurve";
    case ErrorKind::BasePointOffCurve: return "BasePointOffCurve";
    case ErrorKind::WrongOrder: return "WrongOrder";
    case ErrorKind::PointOffCurve: return "PointOffCurve";
    case ErrorKind::FieldTooLarge: return "FieldTooLarge";
    case ErrorKind::InvalidScalar: return "InvalidScalar";
    case ErrorKind::CurveInvalid: return "CurveInvalid";
    case ErrorKind::InfinityPoint: return "InfinityPoint";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateAllZero: return "DegenerateAllZero";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::EmptyPool: return "EmptyPool";
    case ErrorKind::PoolTooSmall: return "PoolTooSmall";
    case ErrorKind::ConstraintInfeasible: return "ConstraintInfeasible";
    case ErrorKind::LengthNotDivisible: return "LengthNotDivisible";
    case ErrorKind::ScheduleTooShort: return "ScheduleTooShort";
    case ErrorKind::BankMismatch: return "BankMismatch";
    case ErrorKind::NoSamples: return "NoSamples";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ecm
