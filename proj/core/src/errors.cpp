#include "capax/errors.hpp"

namespace capax {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDomain: return "invalid-domain";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Quadrature: return "quadrature";
    case ErrorKind::OutOfContract: return "out-of-contract";
    case ErrorKind::DomainOfDefinition: return "domain";
    case ErrorKind::LevelNotStarshaped: return "level-not-starshaped";
    case ErrorKind::Extraction: return "extraction";
    case ErrorKind::UndefinedNormal: return "undefined-normal";
    case ErrorKind::Clearance: return "clearance";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

}  // namespace capax
