#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace carnot {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or indices that do not fit together (dimension mismatch, index out of range).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside its domain (non-positive temperature, sigma outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A named type invariant does not hold for the supplied data.
class InvariantError : public Error {
 public:
  InvariantError(std::string invariant, const std::string& what)
      : Error(what), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Density matrix does not commute with its Hamiltonian.
class StationarityError : public Error {
 public:
  StationarityError(double commutator_norm, const std::string& what)
      : Error(what), commutator_norm_(commutator_norm) {}

  double commutator_norm() const noexcept { return commutator_norm_; }

 private:
  double commutator_norm_;
};

/// Coupling tuple is not in canonical orientation (E_H^m > E_H^n).
class CanonicalizationError : public Error {
 public:
  using Error::Error;
};

/// Raised by extremal-channel search and the saturating-engine builder.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not settle at the requested resolution.
class ConvergenceError : public Error {
 public:
  ConvergenceError(double coarse, double fine, const std::string& what)
      : Error(what), coarse_(coarse), fine_(fine) {}

  double coarse() const noexcept { return coarse_; }
  double fine() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

/// Two internal evaluation routes disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace carnot
