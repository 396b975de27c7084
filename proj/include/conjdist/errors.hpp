#pragma once

#include <stdexcept>
#include <string>

namespace conjdist {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input is valid but exceeds a supported cap (e.g. degree > 6).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Work volume too large for the requested computation.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, double attempted_volume)
      : std::runtime_error(what), attempted_volume_(attempted_volume) {}
  double attempted_volume() const { return attempted_volume_; }

 private:
  double attempted_volume_;
};

/// A numerical routine produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid command-line or config-file input; names the offending field.
class UsageError : public std::invalid_argument {
 public:
  UsageError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace conjdist
