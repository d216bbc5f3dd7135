#include "llano/error.hpp"

namespace llano {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::EncodingError: return "EncodingError";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::MissingAdaptation: return "MissingAdaptation";
    case ErrorKind::SizeExceedsCorpus: return "SizeExceedsCorpus";
    case ErrorKind::MissingGroupKey: return "MissingGroupKey";
    case ErrorKind::MissingSeed: return "MissingSeed";
    case ErrorKind::SentinelCollision: return "SentinelCollision";
    case ErrorKind::OrphanSentinel: return "OrphanSentinel";
    case ErrorKind::NoWords: return "NoWords";
    case ErrorKind::EmbedderUnavailable: return "EmbedderUnavailable";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyText: return "EmptyText";
    case ErrorKind::TemplateError: return "TemplateError";
    case ErrorKind::AuthMissing: return "AuthMissing";
    case ErrorKind::HttpError: return "HttpError";
    case ErrorKind::ReplayMiss: return "ReplayMiss";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::NoOverlap: return "NoOverlap";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_usage_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AuthMissing:
    case ErrorKind::HttpError:
    case ErrorKind::ReplayMiss:
    case ErrorKind::Timeout:
    case ErrorKind::EmbedderUnavailable:
    case ErrorKind::OrphanSentinel:
      return false;
    default:
      return true;
  }
}

}  // namespace llano
