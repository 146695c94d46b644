#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coderag {

enum class ErrorCode {
  UnsupportedFileType,
  ParseFailure,
  UnresolvedInclude,
  CorpusFormat,
  StaleIndex,
  EmptyIndex,
  EmptyInput,
  DimensionMismatch,
  ZeroVector,
  FingerprintMismatch,
  EmbeddingService,
  UnknownTechnique,
  ExampleSetMismatch,
  TemplateMismatch,
  LlmHttp,
  Timeout,
  LlmUnavailable,
  Schema,
  DuplicateId,
  CoverageGap,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Whether an error stems from bad configuration (CLI exit code 1) rather
/// than bad data (exit code 2).
bool is_configuration_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

/// Upstream HTTP failure with the remote status preserved.
class HttpError : public Error {
 public:
  HttpError(ErrorCode code, int status, std::string body_excerpt, const std::string& message);

  int status() const noexcept { return status_; }
  const std::string& body_excerpt() const noexcept { return body_excerpt_; }

 private:
  int status_;
  std::string body_excerpt_;
};

}  // namespace coderag
