#pragma once

#include <stdexcept>
#include <string>

namespace spdcfc {

/// Input outside the mathematical domain of an operation (negative radius,
/// NaN, wavelength outside a Sellmeier validity range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thin-lens geometry with the object inside the focal length.
class NoRealImageError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical quadrature that did not reach its target after refinement.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double coarse, double fine)
      : std::runtime_error(what), coarse_(coarse), fine_(fine) {}

  double coarse() const noexcept { return coarse_; }
  double fine() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

}  // namespace spdcfc
