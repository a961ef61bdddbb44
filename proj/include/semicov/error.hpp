#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semicov {

enum class ErrorKind {
  NonIntegerDegree,
  DegreeTooSmall,
  NotACovering,
  DegreeMismatch,
  MaxIterExceeded,
  NoRelator,
  NotInvariant,
  Overfull,
  Clash,
  FiberNotMonotone,
  BaseEscapes,
  OutOfDomain,
  BaseNotInvertible,
  OrbitEscapes,
  BandNotInvariant,
  DisplacementDiverges,
  NotFixed,
  BranchCollision,
  ImageNotGraph,
  NotMonotoneBase,
  NotFree,
  NoExpansion,
  BranchAmbiguity,
  EndpointOutsideK,
  BadParams,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

// Every library failure is reported through this exception; the kind is what
// callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace semicov
