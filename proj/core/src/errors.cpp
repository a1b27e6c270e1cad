#include "miblearn/errors.hpp"

namespace miblearn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyCounts: return "EmptyCounts";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::NoOobVotes: return "NoOobVotes";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::MissingSupport: return "MissingSupport";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

BadValueError::BadValueError(std::size_t row, const std::string& column,
                             const std::string& cell)
    : Error(ErrorCode::BadValue, "bad value '" + cell + "' in column '" + column +
                                     "', data row " + std::to_string(row)),
      row_(row),
      column_(column) {}

ClassTooSmallError::ClassTooSmallError(const std::string& label, std::size_t count,
                                       std::size_t required)
    : Error(ErrorCode::ClassTooSmall,
            "class '" + label + "' has " + std::to_string(count) +
                " instance(s), needs at least " + std::to_string(required)),
      label_(label),
      count_(count),
      required_(required) {}

}  // namespace miblearn
