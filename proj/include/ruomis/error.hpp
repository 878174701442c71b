#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ruomis {

enum class ErrorKind {
  kIo,
  kMalformedRecord,
  kMissingField,
  kDuplicateId,
  kInvalidSelector,
  kFetch,
  kCrawlCycle,
  kConfig,
  kRemote,
  kDuplicateEntry,
  kUnknownPolarity,
  kUnknownTag,
  kEmptyProduct,
  kUnsupportedFormat,
  kEmptyInput,
  kTotalMismatch,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kMalformedRecord: return "MalformedRecord";
    case ErrorKind::kMissingField: return "MissingField";
    case ErrorKind::kDuplicateId: return "DuplicateId";
    case ErrorKind::kInvalidSelector: return "InvalidSelector";
    case ErrorKind::kFetch: return "FetchError";
    case ErrorKind::kCrawlCycle: return "CrawlCycle";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kRemote: return "RemoteError";
    case ErrorKind::kDuplicateEntry: return "DuplicateEntry";
    case ErrorKind::kUnknownPolarity: return "UnknownPolarity";
    case ErrorKind::kUnknownTag: return "UnknownTag";
    case ErrorKind::kEmptyProduct: return "EmptyProduct";
    case ErrorKind::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kTotalMismatch: return "TotalMismatch";
  }
  return "Error";
}

/// Every failure raised by the library. `subject()` carries the offending
/// item (field name, id, url, path, word) and `line()` the 1-based input line
/// when the error came from a line-oriented file.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string subject, std::string message,
        std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(format(kind, subject, message, line)),
        kind_(kind),
        subject_(std::move(subject)),
        line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& subject() const noexcept { return subject_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  static std::string format(ErrorKind kind, const std::string& subject,
                            const std::string& message,
                            std::optional<std::size_t> line) {
    std::string out(to_string(kind));
    if (line) out += " at line " + std::to_string(*line);
    if (!subject.empty()) out += " (" + subject + ")";
    if (!message.empty()) out += ": " + message;
    return out;
  }

  ErrorKind kind_;
  std::string subject_;
  std::optional<std::size_t> line_;
};

}  // namespace ruomis
