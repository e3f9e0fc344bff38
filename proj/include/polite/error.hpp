#pragma once

#include <stdexcept>
#include <string>

namespace polite {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The adaptive integrator could not continue; `last_time` is the last accepted time.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_time)
      : std::runtime_error(what), last_time_(last_time) {}
  double last_time() const noexcept { return last_time_; }

 private:
  double last_time_;
};

/// No event crossing was found before the search horizon.
class NoCrossingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Period-lattice continuation could not be made unambiguous.
class ContinuationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polite
