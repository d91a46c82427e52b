#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rasesim {

/// Error kinds raised by the library. Each names the contract that was
/// violated; the offending element travels in Error::subject().
enum class Errc {
  // topology
  DuplicateId,
  DanglingEndpoint,
  Disconnected,
  NonPositiveCapacity,
  InvalidValue,
  UnknownNode,
  UnknownHost,
  UnknownLink,
  InsufficientCpu,
  InsufficientMemory,
  InsufficientBandwidth,
  OverRelease,
  // catalog
  ParseError,
  DuplicateVnfType,
  InvalidProfile,
  UnknownVnf,
  InvalidSfcr,
  // routing / solver
  NoPath,
  EmptyInput,
  InvalidParams,
  GeneCountMismatch,
  // engine
  MalformedHeader,
  NotAccepted,
  InconsistentScheme,
  // telemetry
  UnknownSfc,
  NoSamples,
  // experiment
  ConfigError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string subject, std::string detail = {});

  Errc code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  Errc code_;
  std::string subject_;
};

}  // namespace rasesim
