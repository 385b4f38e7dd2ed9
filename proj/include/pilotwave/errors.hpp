#pragma once

#include <stdexcept>
#include <string>

namespace pilotwave {

// Failure taxonomy shared across modules. Validation errors map to CLI
// exit code 1, numerical failures to exit code 2.
enum class Errc {
  // parameter / input validation
  NormViolation,
  DegenerateAB,
  NonPositive,
  BadDomain,
  BadInput,
  // domain and field evaluation
  OutOfBox,
  SlitSingularity,
  NodeEncountered,
  // numerics
  StencilFailure,
  StepUnderflow,
  FieldFailure,
  MaxStepsExceeded,
  QuadratureFailure,
  GridTooCoarse,
  NoCrossingInBox,
  TooManyFailures,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NormViolation: return "NormViolation";
    case Errc::DegenerateAB: return "DegenerateAB";
    case Errc::NonPositive: return "NonPositive";
    case Errc::BadDomain: return "BadDomain";
    case Errc::BadInput: return "BadInput";
    case Errc::OutOfBox: return "OutOfBox";
    case Errc::SlitSingularity: return "SlitSingularity";
    case Errc::NodeEncountered: return "NodeEncountered";
    case Errc::StencilFailure: return "StencilFailure";
    case Errc::StepUnderflow: return "StepUnderflow";
    case Errc::FieldFailure: return "FieldFailure";
    case Errc::MaxStepsExceeded: return "MaxStepsExceeded";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::NoCrossingInBox: return "NoCrossingInBox";
    case Errc::TooManyFailures: return "TooManyFailures";
  }
  return "UnknownError";
}

inline bool is_validation_error(Errc c) {
  switch (c) {
    case Errc::NormViolation:
    case Errc::DegenerateAB:
    case Errc::NonPositive:
    case Errc::BadDomain:
    case Errc::BadInput:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pilotwave
