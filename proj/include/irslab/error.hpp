#pragma once

#include <stdexcept>
#include <string>

namespace irslab {

enum class ErrorKind {
  InvalidArgument,
  InvalidPoint,
  NearIdealImage,
  UnboundedRegion,
  InconsistentCurveSystem,
  ConstructionFailed,
  DiscretenessCheckFailed,
  FrontierOverflow,
  DomainNotStabilized,
  UnboundedDomain,
  TruncationIncomplete,
  RejectionStall,
  RadiusMismatch,
  Parse,
  Overflow,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::InvalidPoint: return "invalid point";
    case ErrorKind::NearIdealImage: return "near-ideal image";
    case ErrorKind::UnboundedRegion: return "unbounded region";
    case ErrorKind::InconsistentCurveSystem: return "inconsistent curve system";
    case ErrorKind::ConstructionFailed: return "construction failed";
    case ErrorKind::DiscretenessCheckFailed: return "discreteness check failed";
    case ErrorKind::FrontierOverflow: return "frontier overflow";
    case ErrorKind::DomainNotStabilized: return "domain not stabilized";
    case ErrorKind::UnboundedDomain: return "unbounded domain";
    case ErrorKind::TruncationIncomplete: return "truncation incomplete";
    case ErrorKind::RejectionStall: return "rejection stall";
    case ErrorKind::RadiusMismatch: return "radius mismatch";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Overflow: return "integer overflow";
  }
  return "unknown error";
}

}  // namespace irslab
