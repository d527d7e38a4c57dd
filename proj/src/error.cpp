#include "domkit/error.hpp"

namespace domkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotReflexive: return "NotReflexive";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::NotTransitive: return "NotTransitive";
    case ErrorKind::DuplicateElement: return "DuplicateElement";
    case ErrorKind::UnknownElement: return "UnknownElement";
    case ErrorKind::NotDirected: return "NotDirected";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::EmptyIndex: return "EmptyIndex";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::Mismatch: return "Mismatch";
    case ErrorKind::NotSection: return "NotSection";
    case ErrorKind::NotDeflation: return "NotDeflation";
    case ErrorKind::NotInjective: return "NotInjective";
    case ErrorKind::NoAdjoint: return "NoAdjoint";
    case ErrorKind::IndexNotDirected: return "IndexNotDirected";
    case ErrorKind::MissingEdge: return "MissingEdge";
    case ErrorKind::FunctorialityFailure: return "FunctorialityFailure";
    case ErrorKind::ConeInvalid: return "ConeInvalid";
    case ErrorKind::LubUndefined: return "LubUndefined";
    case ErrorKind::NotStrict: return "NotStrict";
    case ErrorKind::NotNatural: return "NotNatural";
    case ErrorKind::NotSieve: return "NotSieve";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::MultipleVariables: return "MultipleVariables";
    case ErrorKind::UnknownConstant: return "UnknownConstant";
    case ErrorKind::NoStarterEp: return "NoStarterEp";
    case ErrorKind::NotPointed: return "NotPointed";
    case ErrorKind::DifferentChains: return "DifferentChains";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InternalFailure: return "InternalFailure";
  }
  return "Unknown";
}

namespace {

std::string render(ErrorKind kind, const std::string& message,
                   const std::vector<std::string>& witnesses) {
  std::string out(to_string(kind));
  if (!witnesses.empty()) {
    out += "(";
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
      if (i) out += ", ";
      out += witnesses[i];
    }
    out += ")";
  }
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

DomainError::DomainError(ErrorKind kind, const std::string& message,
                         std::vector<std::string> witnesses)
    : std::runtime_error(render(kind, message, witnesses)),
      kind_(kind),
      witnesses_(std::move(witnesses)) {}

void fail(ErrorKind kind, const std::string& message, std::vector<std::string> witnesses) {
  throw DomainError(kind, message, std::move(witnesses));
}

}  // namespace domkit
