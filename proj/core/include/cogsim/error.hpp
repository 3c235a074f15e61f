#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cogsim {

enum class ErrorCode {
  UnknownBiasCode,
  MalformedTriggerId,
  ConfigError,
  ScenarioInvalid,
  StateInconsistent,
  SessionComplete,
  ParseError,
  AmbiguousMapping,
  UnknownTechniqueRisk,
  UnknownTechniquePrior,
  SalienceConfigEmpty,
  NotNormalized,
  HorizonEmpty,
  InsufficientGroups,
  NoGroundTruth,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map them to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// True for codes that describe bad input rather than a runtime failure.
bool is_validation_error(ErrorCode code);

}  // namespace cogsim
