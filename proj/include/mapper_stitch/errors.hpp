#ifndef MAPPER_STITCH_ERRORS_HPP
#define MAPPER_STITCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mapper_stitch {

/// Bad input data: unreadable files, missing columns, non-finite cells.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dataset name that does not resolve to a file or a known shape.
class DatasetNotFound : public DataError {
 public:
  using DataError::DataError;
};

/// Caller-supplied parameters outside their documented domain.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal invariant of the composition was violated.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mapper_stitch

#endif
