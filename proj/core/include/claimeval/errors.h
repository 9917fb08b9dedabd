#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace claimeval {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data: malformed files, broken references, out-of-range values.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A malformed record in a line-delimited file.
class ParseError : public DataError {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// References that do not resolve (dangling doc_id, unknown claim_id, ...).
class IntegrityError : public DataError {
 public:
  IntegrityError(const std::string& what, std::vector<std::string> offenders);

  const std::vector<std::string>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

/// A metric that has no value for the given input (empty prediction set, ...).
class UndefinedMetricError : public DataError {
 public:
  using DataError::DataError;
};

/// A scoring backend failed to initialise or to answer a request.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration: unknown backend ids, thresholds out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace claimeval
