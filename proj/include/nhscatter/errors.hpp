#pragma once

#include <stdexcept>
#include <string>

namespace nhs {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation precondition (E <= 0, negative width, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// E equals a real barrier height, so mu = 0 and u+/u- diverge.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// M = |m22|^2 vanished exactly; T and R are infinite.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Newton refinement failed. Carries the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_e, double best_v,
                   double best_residual)
      : Error(what),
        best_e_(best_e),
        best_v_(best_v),
        best_residual_(best_residual) {}

  double best_e() const { return best_e_; }
  double best_v() const { return best_v_; }
  double best_residual() const { return best_residual_; }

 private:
  double best_e_;
  double best_v_;
  double best_residual_;
};

/// Richardson pair disagreement too large to trust the finite differences.
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// Conic discriminant is not negative, so the level sets are not ellipses.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

/// Requested contour level is under the cancellation floor or outside the
/// quadratic basin.
class LevelOutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Ray search could not bracket the level crossing.
class NonBracketingError : public Error {
 public:
  using Error::Error;
};

/// Least-squares conic is not an ellipse.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

}  // namespace nhs
