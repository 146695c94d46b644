#include "coderag/errors.hpp"

#include <utility>

namespace coderag {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedFileType: return "UnsupportedFileType";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::UnresolvedInclude: return "UnresolvedInclude";
    case ErrorCode::CorpusFormat: return "CorpusFormatError";
    case ErrorCode::StaleIndex: return "StaleIndex";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::EmbeddingService: return "EmbeddingServiceError";
    case ErrorCode::UnknownTechnique: return "UnknownTechnique";
    case ErrorCode::ExampleSetMismatch: return "ExampleSetMismatch";
    case ErrorCode::TemplateMismatch: return "TemplateMismatch";
    case ErrorCode::LlmHttp: return "LlmHttpError";
    case ErrorCode::Timeout: return "TimeoutError";
    case ErrorCode::LlmUnavailable: return "LlmUnavailable";
    case ErrorCode::Schema: return "SchemaError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::CoverageGap: return "CoverageGap";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

bool is_configuration_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::UnknownTechnique:
    case ErrorCode::TemplateMismatch:
    case ErrorCode::FingerprintMismatch:
    case ErrorCode::StaleIndex:
    case ErrorCode::EmptyIndex:
    case ErrorCode::LlmUnavailable:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

HttpError::HttpError(ErrorCode code, int status, std::string body_excerpt, const std::string& message)
    : Error(code, message), status_(status), body_excerpt_(std::move(body_excerpt)) {}

}  // namespace coderag
