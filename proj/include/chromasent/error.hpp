#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chromasent {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (empty color model, bad flag value, missing path).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be used: undecodable image, non-finite value, out-of-range field.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An image that has no pixels left after preprocessing.
class EmptyImageError : public InputError {
 public:
  using InputError::InputError;
};

/// Malformed row in a tabular input file. Carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : InputError(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Review source failure that survived every retry.
class SourceError : public Error {
 public:
  SourceError(long long company_id, const std::string& what)
      : Error("company " + std::to_string(company_id) + ": " + what), company_id_(company_id) {}

  long long company_id() const noexcept { return company_id_; }

 private:
  long long company_id_;
};

/// Transient remote failure; retried by the fetch loop.
class TransientError : public Error {
 public:
  using Error::Error;
};

/// Remote payload that does not match the expected schema.
class PayloadError : public Error {
 public:
  using Error::Error;
};

/// Pipeline store failure (unwritable directory, schema mismatch, missing stage).
class StoreError : public Error {
 public:
  using Error::Error;
};

}  // namespace chromasent
