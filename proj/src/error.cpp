#include "rasesim/error.hpp"

namespace rasesim {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::DanglingEndpoint: return "DanglingEndpoint";
    case Errc::Disconnected: return "Disconnected";
    case Errc::NonPositiveCapacity: return "NonPositiveCapacity";
    case Errc::InvalidValue: return "InvalidValue";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::UnknownHost: return "UnknownHost";
    case Errc::UnknownLink: return "UnknownLink";
    case Errc::InsufficientCpu: return "InsufficientCpu";
    case Errc::InsufficientMemory: return "InsufficientMemory";
    case Errc::InsufficientBandwidth: return "InsufficientBandwidth";
    case Errc::OverRelease: return "OverRelease";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateVnfType: return "DuplicateVnfType";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::UnknownVnf: return "UnknownVnf";
    case Errc::InvalidSfcr: return "InvalidSfcr";
    case Errc::NoPath: return "NoPath";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::GeneCountMismatch: return "GeneCountMismatch";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::NotAccepted: return "NotAccepted";
    case Errc::InconsistentScheme: return "InconsistentScheme";
    case Errc::UnknownSfc: return "UnknownSfc";
    case Errc::NoSamples: return "NoSamples";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string format_message(Errc code, const std::string& subject, const std::string& detail) {
  std::string msg{to_string(code)};
  msg += '(';
  msg += subject;
  msg += ')';
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}

}  // namespace

Error::Error(Errc code, std::string subject, std::string detail)
    : std::runtime_error(format_message(code, subject, detail)),
      code_(code),
      subject_(std::move(subject)) {}

}  // namespace rasesim
