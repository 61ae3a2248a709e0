#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ucover {

enum class ErrorCode {
  NonSymmetric,
  NonReflexive,
  NotNested,
  HausdorffViolated,
  AsymmetricMatrix,
  NonDecreasingRadii,
  UnknownPoint,
  BadScale,
  BadScalePair,
  EmptyChain,
  ScaleMismatch,
  EndpointMismatch,
  OutsideComponent,
  NotALoop,
  NotAChain,
  BudgetExhausted,
  NotAPermutation,
  GroupTooLarge,
  NotFaithful,
  ProductTooLarge,
  DimensionMismatch,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every validating operation in the library.
///
/// `index` carries the offending scale index (1-based) or point index when
/// the error names one, and -1 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, int index = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  int index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  int index_;
};

}  // namespace ucover
