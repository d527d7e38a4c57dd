#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace domkit {

enum class ErrorKind {
  NotReflexive,
  NotAntisymmetric,
  NotTransitive,
  DuplicateElement,
  UnknownElement,
  NotDirected,
  BudgetExceeded,
  EmptyIndex,
  NotMonotone,
  Mismatch,
  NotSection,
  NotDeflation,
  NotInjective,
  NoAdjoint,
  IndexNotDirected,
  MissingEdge,
  FunctorialityFailure,
  ConeInvalid,
  LubUndefined,
  NotStrict,
  NotNatural,
  NotSieve,
  SyntaxError,
  MultipleVariables,
  UnknownConstant,
  NoStarterEp,
  NotPointed,
  DifferentChains,
  ParseError,
  IoError,
  InternalFailure,
};

std::string_view to_string(ErrorKind kind);

// Every failure carries the kind plus the minimal witnesses (element ids,
// index triples, ...) that exhibit it.
class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorKind kind, const std::string& message,
              std::vector<std::string> witnesses = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& witnesses() const noexcept { return witnesses_; }

 private:
  ErrorKind kind_;
  std::vector<std::string> witnesses_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message,
                       std::vector<std::string> witnesses = {});

}  // namespace domkit
