#ifndef COGSEC_ERROR_HPP
#define COGSEC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cogsec {

// Error categories. The CLI maps input-class errors to exit code 2 and
// numerical-class errors to exit code 3.
enum class ErrorClass { input, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

// Bad argument or configuration value.
class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error(ErrorClass::input, what) {}
};

// Config document does not match the schema; `field` is a dotted path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(ErrorClass::input, field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class UnsupportedRule : public Error {
 public:
  explicit UnsupportedRule(const std::string& what) : Error(ErrorClass::input, what) {}
};

class UndefinedRatio : public Error {
 public:
  explicit UndefinedRatio(const std::string& what) : Error(ErrorClass::input, what) {}
};

// Values cannot be normalized into a probability mass (all zero, negative, non-finite).
class DegenerateMass : public Error {
 public:
  explicit DegenerateMass(const std::string& what) : Error(ErrorClass::numerical, what) {}
};

// Prior and likelihood have disjoint support. `index` is the position in a
// sequential chain, or -1 for a single update.
class DegenerateEvidence : public Error {
 public:
  explicit DegenerateEvidence(const std::string& what, long index = -1)
      : Error(ErrorClass::numerical, index < 0 ? what : what + " (update " + std::to_string(index) + ")"),
        index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

class DegenerateProfile : public Error {
 public:
  explicit DegenerateProfile(const std::string& what) : Error(ErrorClass::numerical, what) {}
};

class FitFailure : public Error {
 public:
  explicit FitFailure(const std::string& what) : Error(ErrorClass::numerical, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(ErrorClass::numerical, what) {}
};

// Wraps a module error with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.error_class(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace cogsec

#endif  // COGSEC_ERROR_HPP
