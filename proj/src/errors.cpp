#include "prodfreq/errors.hpp"

namespace prodfreq {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FormatError: return "format_error";
    case ErrorCode::EmptyLog: return "empty_log";
    case ErrorCode::DegenerateLog: return "degenerate_log";
    case ErrorCode::UnknownActivity: return "unknown_activity";
    case ErrorCode::UnknownSelector: return "unknown_selector";
    case ErrorCode::ResolutionError: return "resolution_error";
    case ErrorCode::DomainError: return "domain_error";
    case ErrorCode::InsufficientData: return "insufficient_data";
    case ErrorCode::UnidentifiableAlpha: return "unidentifiable_alpha";
    case ErrorCode::WeightError: return "weight_error";
    case ErrorCode::ParameterError: return "parameter_error";
    case ErrorCode::UndefinedMetric: return "undefined_metric";
    case ErrorCode::DegeneratePolynomial: return "degenerate_polynomial";
    case ErrorCode::ConversionError: return "conversion_error";
    case ErrorCode::TopologyError: return "topology_error";
    case ErrorCode::SchemaError: return "schema_error";
    case ErrorCode::InputError: return "input_error";
    case ErrorCode::UnitError: return "unit_error";
    case ErrorCode::PairingError: return "pairing_error";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::UsageError: return "usage_error";
  }
  return "unknown_error";
}

}  // namespace prodfreq
