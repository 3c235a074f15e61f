#include "cogsim/bias.hpp"
#include "cogsim/error.hpp"

namespace cogsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownBiasCode: return "UnknownBiasCode";
    case ErrorCode::MalformedTriggerId: return "MalformedTriggerId";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
    case ErrorCode::StateInconsistent: return "StateInconsistent";
    case ErrorCode::SessionComplete: return "SessionComplete";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AmbiguousMapping: return "AmbiguousMapping";
    case ErrorCode::UnknownTechniqueRisk: return "UnknownTechniqueRisk";
    case ErrorCode::UnknownTechniquePrior: return "UnknownTechniquePrior";
    case ErrorCode::SalienceConfigEmpty: return "SalienceConfigEmpty";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::HorizonEmpty: return "HorizonEmpty";
    case ErrorCode::InsufficientGroups: return "InsufficientGroups";
    case ErrorCode::NoGroundTruth: return "NoGroundTruth";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownBiasCode:
    case ErrorCode::MalformedTriggerId:
    case ErrorCode::ConfigError:
    case ErrorCode::ScenarioInvalid:
    case ErrorCode::ParseError:
    case ErrorCode::SalienceConfigEmpty:
    case ErrorCode::NotNormalized:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(BiasKind b) {
  switch (b) {
    case BiasKind::LossAversion: return "LossAversion";
    case BiasKind::BaseRateNeglect: return "BaseRateNeglect";
    case BiasKind::Confirmation: return "Confirmation";
    case BiasKind::SunkCost: return "SunkCost";
    case BiasKind::Availability: return "Availability";
  }
  return "?";
}

std::optional<BiasKind> bias_from_string(std::string_view name) {
  for (BiasKind b : kAllBiases) {
    if (to_string(b) == name) return b;
  }
  return std::nullopt;
}

char bias_letter(BiasKind b) {
  switch (b) {
    case BiasKind::LossAversion: return 'L';
    case BiasKind::BaseRateNeglect: return 'B';
    case BiasKind::Confirmation: return 'C';
    case BiasKind::SunkCost: return 'S';
    case BiasKind::Availability: return 'A';
  }
  return '?';
}

std::optional<BiasKind> bias_from_letter(char letter) {
  switch (letter) {
    case 'B': return BiasKind::BaseRateNeglect;
    case 'L': return BiasKind::LossAversion;
    case 'A': return BiasKind::Availability;
    case 'C': return BiasKind::Confirmation;
    case 'S': return BiasKind::SunkCost;
    default: return std::nullopt;
  }
}

}  // namespace cogsim
