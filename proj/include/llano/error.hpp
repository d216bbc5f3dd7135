#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace llano {

enum class ErrorKind {
  // corpus
  MissingField,
  DuplicateId,
  EncodingError,
  EmptyCorpus,
  MissingAdaptation,
  SizeExceedsCorpus,
  MissingGroupKey,
  MissingSeed,
  // textnorm
  SentinelCollision,
  OrphanSentinel,
  // metrics
  NoWords,
  EmbedderUnavailable,
  DimensionMismatch,
  // prompts
  EmptyText,
  TemplateError,
  // llm
  AuthMissing,
  HttpError,
  ReplayMiss,
  Timeout,
  // pipeline
  ConfigError,
  NoOverlap,
  // shared
  InvalidArgument,
  IoError,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// Usage/input problems map to exit code 2, everything else to 1.
bool is_usage_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace llano
