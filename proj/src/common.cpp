#include "pnflab/common.hpp"

namespace pnf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvex: return "NonConvex";
    case ErrorKind::NonPositive: return "NonPositive";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::Dimension: return "Dimension";
    case ErrorKind::ConventionViolation: return "ConventionViolation";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::DegenerateBeta: return "DegenerateBeta";
    case ErrorKind::NonMeanConvex: return "NonMeanConvex";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorKind::IncompatibleData: return "IncompatibleData";
    case ErrorKind::VariantMismatch: return "VariantMismatch";
    case ErrorKind::NonConvexInput: return "NonConvexInput";
    case ErrorKind::GaussMapInversion: return "GaussMapInversion";
    case ErrorKind::ContainmentViolated: return "ContainmentViolated";
    case ErrorKind::DiameterCertificateFailed: return "DiameterCertificateFailed";
    case ErrorKind::TruncatedTrace: return "TruncatedTrace";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace pnf
