#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prodfreq {

// Stable error taxonomy. Codes are part of the CLI contract: they appear in
// the machine-readable error object on stderr and must not be renamed.
enum class ErrorCode {
  FormatError,
  EmptyLog,
  DegenerateLog,
  UnknownActivity,
  UnknownSelector,
  ResolutionError,
  DomainError,
  InsufficientData,
  UnidentifiableAlpha,
  WeightError,
  ParameterError,
  UndefinedMetric,
  DegeneratePolynomial,
  ConversionError,
  TopologyError,
  SchemaError,
  InputError,
  UnitError,
  PairingError,
  IoError,
  UsageError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Error(ErrorCode code, std::string message,
        std::vector<std::pair<std::string, std::string>> details)
      : std::runtime_error(std::move(message)),
        code_(code),
        details_(std::move(details)) {}

  ErrorCode code() const { return code_; }
  const std::vector<std::pair<std::string, std::string>>& details() const {
    return details_;
  }

 private:
  ErrorCode code_;
  std::vector<std::pair<std::string, std::string>> details_;
};

}  // namespace prodfreq
