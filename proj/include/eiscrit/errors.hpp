#pragma once

#include <stdexcept>
#include <string>

namespace eiscrit {

// Bad argument (odd weight, im <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested error bound could not be certified within the budget.
class CertificationError : public std::runtime_error {
 public:
  CertificationError(const std::string& what, long double best_bound)
      : std::runtime_error(what), best_bound_(best_bound) {}
  long double best_bound() const { return best_bound_; }

 private:
  long double best_bound_;
};

// A computed fact disagrees with a proved count or sign law.
class ContradictionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eiscrit
