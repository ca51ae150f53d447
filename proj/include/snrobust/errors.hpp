#ifndef SNROBUST_ERRORS_HPP
#define SNROBUST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace snrobust {

// Invalid parameter values (sigma <= 0, non-finite inputs, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature failed to reach the requested tolerance.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matrix inverse was requested past the condition-number guard.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double condition_number)
      : std::runtime_error(what), condition_number_(condition_number) {}
  double condition_number() const { return condition_number_; }

 private:
  double condition_number_;
};

// Bad or degenerate data (zero variance, too few rows, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (empty bounds box, bad flags, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Series or iteration failed to converge within its cap.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An optimizer drove a parameter to the edge of its domain.
class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File / parsing problems surfaced by the CLI layer.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace snrobust

#endif  // SNROBUST_ERRORS_HPP
