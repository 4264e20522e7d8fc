#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nncpdf {

enum class ErrorKind {
  NotNormalized,
  NegativeMass,
  ShapeMismatch,
  UnknownVariable,
  OverlappingSets,
  CyclicFactorization,
  RowNotNormalized,
  StateSpaceTooLarge,
  SchemaError,
  IndexOutOfRange,
  InvalidCut,
  WrongForm,
  WrongN,
  SearchSpaceTooLarge,
  NoFeasibleStart,
  SideConditionViolated,
  UnsupportedLabeling,
  NotAffineInB,
  UnassignedAtom,
  TooManyInequalities,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and tests)
// can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nncpdf
