#pragma once

#include <stdexcept>
#include <string>

namespace banditrec {

// Error families map onto CLI exit codes: input/config problems exit 1,
// everything else exits 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Violated precondition of a public operation (bad dimensions, bad reward, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Linear-model state is no longer SPD or otherwise numerically broken.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A parsed input file violated its schema.
class IngestionError : public Error {
 public:
  IngestionError(const std::string& file, std::size_t line, const std::string& field,
                 const std::string& message)
      : Error(file + ":" + std::to_string(line) + ": field '" + field + "': " + message),
        file_(file),
        line_(line),
        field_(field) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

// An identifier refers to a user, item or arm that does not exist.
class ReferentialError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on an object that is not ready (e.g. unfitted pipeline).
class StateError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace banditrec
