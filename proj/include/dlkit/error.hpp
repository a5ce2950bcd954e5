#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dlkit {

enum class ErrorCode {
  DivisionByZero,
  SpecMismatch,
  NonCoprimeModuli,
  ZeroPolynomial,
  BoundTooLarge,
  NotInSubgroup,
  CapExceeded,
  DegenerateCollision,
  BadFactorization,
  TimeBudgetExceeded,
  RankDeficient,
  CompositeTrouble,
  InvalidDivisor,
  InvalidCurve,
  NonSmoothNorm,
  RamifiedPlace,
  DescentStuck,
  BoundsViolated,
  SingularSystem,
  DomainError,
  ParseError,
  VerificationFailed,
  AmbiguousOrder,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::NonCoprimeModuli: return "NonCoprimeModuli";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::BoundTooLarge: return "BoundTooLarge";
    case ErrorCode::NotInSubgroup: return "NotInSubgroup";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::DegenerateCollision: return "DegenerateCollision";
    case ErrorCode::BadFactorization: return "BadFactorization";
    case ErrorCode::TimeBudgetExceeded: return "TimeBudgetExceeded";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::CompositeTrouble: return "CompositeTrouble";
    case ErrorCode::InvalidDivisor: return "InvalidDivisor";
    case ErrorCode::InvalidCurve: return "InvalidCurve";
    case ErrorCode::NonSmoothNorm: return "NonSmoothNorm";
    case ErrorCode::RamifiedPlace: return "RamifiedPlace";
    case ErrorCode::DescentStuck: return "DescentStuck";
    case ErrorCode::BoundsViolated: return "BoundsViolated";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::AmbiguousOrder: return "AmbiguousOrder";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dlkit
