#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qsd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model or experiment description violates a structural requirement.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Fugacity or density outside the domain where the product measure exists.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because the state count exceeds the limit.
class SizeLimitError : public Error {
 public:
  SizeLimitError(std::uint64_t count, std::uint64_t limit)
      : Error("state space of size " + std::to_string(count) +
              " exceeds limit " + std::to_string(limit)),
        count_(count),
        limit_(limit) {}

  std::uint64_t count() const noexcept { return count_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t count_;
  std::uint64_t limit_;
};

/// Every harvested trajectory was censored, so no occupation measure exists.
class PhiUndefinedError : public Error {
 public:
  using Error::Error;
};

/// A statistical reduction lacks the data it needs (short window, no mass).
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// A linear solve hit a singular or absorbing substructure.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing an artifact file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsd
