#include "steer/error.hpp"

namespace steer {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn: return "missing_column";
    case ErrorCode::UnparseableCell: return "unparseable_cell";
    case ErrorCode::UnknownLabel: return "unknown_label";
    case ErrorCode::EmptyFile: return "empty_file";
    case ErrorCode::InvalidSchema: return "invalid_schema";
    case ErrorCode::UnknownFeature: return "unknown_feature";
    case ErrorCode::InvertedRange: return "inverted_range";
    case ErrorCode::EmptySelection: return "empty_selection";
    case ErrorCode::InvalidConfiguration: return "invalid_configuration";
    case ErrorCode::InvalidHyperparameters: return "invalid_hyperparameters";
    case ErrorCode::TooFewRows: return "too_few_rows";
    case ErrorCode::SingleClassData: return "single_class_data";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::SchemaMismatch: return "schema_mismatch";
    case ErrorCode::InvalidArtifact: return "invalid_artifact";
    case ErrorCode::TooManyFeatures: return "too_many_features";
    case ErrorCode::EmptyBackground: return "empty_background";
    case ErrorCode::EmptyDataset: return "empty_dataset";
    case ErrorCode::GuardrailMinFeatures: return "min_features";
    case ErrorCode::GuardrailMinRows: return "min_rows";
    case ErrorCode::GuardrailMaxRowDrop: return "max_row_drop";
    case ErrorCode::StaleIssue: return "stale_issue";
    case ErrorCode::UnknownKind: return "unknown_kind";
    case ErrorCode::InvalidPlan: return "invalid_plan";
    case ErrorCode::StaleBaseVersion: return "stale_base_version";
    case ErrorCode::UnknownVersion: return "unknown_version";
    case ErrorCode::UnknownProject: return "unknown_project";
    case ErrorCode::CorruptObject: return "corrupt_object";
    case ErrorCode::DanglingReference: return "dangling_reference";
    case ErrorCode::JournalParseError: return "journal_parse_error";
    case ErrorCode::StoreLocked: return "store_locked";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::InvalidRequest: return "invalid_request";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Internal: return "internal";
  }
  return "internal";
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownProject:
    case ErrorCode::UnknownVersion:
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::StaleBaseVersion:
    case ErrorCode::StaleIssue:
    case ErrorCode::GuardrailMinFeatures:
    case ErrorCode::GuardrailMinRows:
    case ErrorCode::GuardrailMaxRowDrop:
    case ErrorCode::StoreLocked:
      return 409;
    case ErrorCode::CorruptObject:
    case ErrorCode::DanglingReference:
    case ErrorCode::JournalParseError:
    case ErrorCode::IoError:
    case ErrorCode::Internal:
      return 500;
    default:
      return 400;
  }
}

}  // namespace steer
