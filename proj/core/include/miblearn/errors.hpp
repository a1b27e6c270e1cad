#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace miblearn {

enum class ErrorCode {
  // ingestion
  MissingColumn,
  BadValue,
  EmptyFile,
  // dataset operations
  ClassTooSmall,
  UnknownFeature,
  EmptyDataset,
  // synthetic generator
  InvalidConfig,
  // learners
  EmptyCounts,
  SchemaMismatch,
  NoOobVotes,
  // feature selection
  LengthMismatch,
  BadN,
  // metrics
  EmptyInput,
  UnknownLabel,
  MissingSupport,
  EmptyMatrix,
  // everything else
  InvalidArgument,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Rejected CSV cell; keeps the 1-based data row index and the column name.
class BadValueError : public Error {
 public:
  BadValueError(std::size_t row, const std::string& column, const std::string& cell);

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

/// A class has too few instances for a stratified partition.
class ClassTooSmallError : public Error {
 public:
  ClassTooSmallError(const std::string& label, std::size_t count, std::size_t required);

  const std::string& label() const noexcept { return label_; }
  std::size_t count() const noexcept { return count_; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::string label_;
  std::size_t count_;
  std::size_t required_;
};

}  // namespace miblearn
