#pragma once

#include <stdexcept>
#include <string>

namespace aeex {

/// Base error. code() is a short upper-case token for machine grepping.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::string code = "VALIDATION")
      : Error(std::move(code), what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::string code = "DOMAIN")
      : Error(std::move(code), what) {}
};

class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error("SINGULARITY", what) {}
};

class ExtrapolationError : public Error {
 public:
  explicit ExtrapolationError(const std::string& what) : Error("EXTRAPOLATION", what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, std::string code = "NUMERIC")
      : Error(std::move(code), what) {}
};

/// Raised by advect when the Courant bound is violated; caller subdivides.
class StepSizeError : public Error {
 public:
  explicit StepSizeError(const std::string& what) : Error("STEP_SIZE", what) {}
};

}  // namespace aeex
