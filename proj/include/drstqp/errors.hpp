#pragma once

#include <stdexcept>
#include <string>

namespace drstqp {

/// Invalid argument or parameter outside its stated domain.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative routine exhausted its iteration budget.
class NoConvergence : public std::runtime_error {
 public:
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix argument violated a required definiteness property.
class NotPsd : public DomainError {
 public:
  explicit NotPsd(const std::string& what) : DomainError(what) {}
};

class NotPd : public DomainError {
 public:
  explicit NotPd(const std::string& what) : DomainError(what) {}
};

/// Matrix must be strictly copositive (min of the form over the simplex > 0).
class NotCopositive : public DomainError {
 public:
  explicit NotCopositive(const std::string& what) : DomainError(what) {}
};

/// Monte-Carlo Orlicz-norm estimation found no stable finite bracket.
class Diverged : public std::runtime_error {
 public:
  explicit Diverged(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace drstqp
