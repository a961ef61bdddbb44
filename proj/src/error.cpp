#include "semicov/error.hpp"

namespace semicov {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonIntegerDegree: return "NonIntegerDegree";
    case ErrorKind::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorKind::NotACovering: return "NotACovering";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorKind::NoRelator: return "NoRelator";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::Overfull: return "Overfull";
    case ErrorKind::Clash: return "Clash";
    case ErrorKind::FiberNotMonotone: return "FiberNotMonotone";
    case ErrorKind::BaseEscapes: return "BaseEscapes";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::BaseNotInvertible: return "BaseNotInvertible";
    case ErrorKind::OrbitEscapes: return "OrbitEscapes";
    case ErrorKind::BandNotInvariant: return "BandNotInvariant";
    case ErrorKind::DisplacementDiverges: return "DisplacementDiverges";
    case ErrorKind::NotFixed: return "NotFixed";
    case ErrorKind::BranchCollision: return "BranchCollision";
    case ErrorKind::ImageNotGraph: return "ImageNotGraph";
    case ErrorKind::NotMonotoneBase: return "NotMonotoneBase";
    case ErrorKind::NotFree: return "NotFree";
    case ErrorKind::NoExpansion: return "NoExpansion";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::EndpointOutsideK: return "EndpointOutsideK";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace semicov
