#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyfield {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation evaluated outside its mathematical domain (Log 0, non-finite input).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Result would overflow double range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Caller misuse: empty sets, out-of-range indices, unknown names.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A membership weight or tolerance outside its admissible range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Structured document does not match its schema. `path` is a JSON pointer.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)), detail_(what) {}

  const std::string& path() const noexcept { return path_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same error re-rooted under `prefix`, for documents embedded in larger ones.
  ParseError nested_under(const std::string& prefix) const {
    return ParseError(path_ == "/" ? prefix : prefix + path_, detail_);
  }

 private:
  std::string path_;
  std::string detail_;
};

}  // namespace fuzzyfield
