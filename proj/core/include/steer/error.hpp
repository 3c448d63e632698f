#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace steer {

/// Stable machine identifiers for every failure the engine can report.
/// The string form (see code_name) is part of the HTTP and CLI contract.
enum class ErrorCode {
  // ingestion / schema
  MissingColumn,
  UnparseableCell,
  UnknownLabel,
  EmptyFile,
  InvalidSchema,
  // dataset operations
  UnknownFeature,
  InvertedRange,
  EmptySelection,
  InvalidConfiguration,
  // model
  InvalidHyperparameters,
  TooFewRows,
  SingleClassData,
  DimensionMismatch,
  SchemaMismatch,
  InvalidArtifact,
  // explanations
  TooManyFeatures,
  EmptyBackground,
  EmptyDataset,
  // guardrails
  GuardrailMinFeatures,
  GuardrailMinRows,
  GuardrailMaxRowDrop,
  // corrections
  StaleIssue,
  UnknownKind,
  InvalidPlan,
  // steering
  StaleBaseVersion,
  UnknownVersion,
  UnknownProject,
  // persistence
  CorruptObject,
  DanglingReference,
  JournalParseError,
  StoreLocked,
  IoError,
  // service
  InvalidRequest,
  NotFound,
  Internal,
};

std::string_view code_name(ErrorCode code) noexcept;

/// HTTP status for a code: 400 validation, 404 unknown resource,
/// 409 stale state or guardrail, 500 internal.
int http_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        nlohmann::json details = nullptr)
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  nlohmann::json details_;
};

}  // namespace steer
