#pragma once

#include <stdexcept>
#include <string>

namespace khbound {

// Error taxonomy for the whole pipeline. Validation failures map to CLI
// exit code 2, cross-check failures to 3, budget exhaustion to 4.
enum class ErrorKind {
  range_violation,
  gcd_violation,
  sum_violation,
  too_small,
  path_budget_exceeded,
  not_unimodular,
  dimension_mismatch,
  engine_disagreement,
  cross_check_failure,
  sweep_failure,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

struct ValidationError : Error {
  using Error::Error;
};

struct RangeViolation : ValidationError {
  explicit RangeViolation(const std::string& msg)
      : ValidationError(ErrorKind::range_violation, msg) {}
};

struct GcdViolation : ValidationError {
  explicit GcdViolation(const std::string& msg)
      : ValidationError(ErrorKind::gcd_violation, msg) {}
};

struct SumViolation : ValidationError {
  explicit SumViolation(const std::string& msg)
      : ValidationError(ErrorKind::sum_violation, msg) {}
};

struct TooSmall : ValidationError {
  explicit TooSmall(const std::string& msg)
      : ValidationError(ErrorKind::too_small, msg) {}
};

struct PathBudgetExceeded : Error {
  explicit PathBudgetExceeded(const std::string& msg)
      : Error(ErrorKind::path_budget_exceeded, msg) {}
};

struct NotUnimodular : Error {
  explicit NotUnimodular(const std::string& msg)
      : Error(ErrorKind::not_unimodular, msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg)
      : Error(ErrorKind::dimension_mismatch, msg) {}
};

struct EngineDisagreement : Error {
  explicit EngineDisagreement(const std::string& msg)
      : Error(ErrorKind::engine_disagreement, msg) {}
};

struct CrossCheckFailure : Error {
  explicit CrossCheckFailure(const std::string& msg)
      : Error(ErrorKind::cross_check_failure, msg) {}
};

struct SweepFailure : Error {
  explicit SweepFailure(const std::string& msg)
      : Error(ErrorKind::sweep_failure, msg) {}
};

// Shell exit code for an error, per the CLI contract.
inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::range_violation:
    case ErrorKind::gcd_violation:
    case ErrorKind::sum_violation:
    case ErrorKind::too_small:
      return 2;
    case ErrorKind::engine_disagreement:
    case ErrorKind::cross_check_failure:
    case ErrorKind::sweep_failure:
      return 3;
    case ErrorKind::path_budget_exceeded:
      return 4;
    default:
      return 1;
  }
}

}  // namespace khbound
