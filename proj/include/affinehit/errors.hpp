#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace affinehit {

/// A precondition on the inputs of a formula was violated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series or iteration did not reach the requested accuracy.
///
/// Carries the best available partial result so callers can still report it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double partial_value,
                   double achieved_bound, std::size_t terms)
      : std::runtime_error(what),
        partial_value_(partial_value),
        achieved_bound_(achieved_bound),
        terms_(terms) {}

  double partial_value() const noexcept { return partial_value_; }
  double achieved_bound() const noexcept { return achieved_bound_; }
  std::size_t terms() const noexcept { return terms_; }

 private:
  double partial_value_;
  double achieved_bound_;
  std::size_t terms_;
};

/// The inputs are valid but no closed-form evaluation is available for them.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

[[noreturn]] inline void fail_domain(const std::string& what) {
  throw DomainError(what);
}

inline void require(bool condition, const char* what) {
  if (!condition) fail_domain(what);
}

}  // namespace detail
}  // namespace affinehit
