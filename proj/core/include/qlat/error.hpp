#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qlat {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible shapes (matrix sizes, subsystem splits).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant; the message carries the achieved
/// deviation.
class InvariantError : public Error {
 public:
  InvariantError(const std::string& what, double deviation)
      : Error(what + " (deviation " + std::to_string(deviation) + ")"),
        deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

/// An iterative routine failed to reach its target accuracy.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The requested operation is not available for this kind of operand.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Constraints admit no (interior) solution.  `evidence` holds the
/// quantity that decided it: the violated range, or the growing
/// multiplier norms of a diverging dual iteration.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::string kind, std::vector<double> evidence)
      : Error(what), kind_(std::move(kind)), evidence_(std::move(evidence)) {}
  const std::string& kind() const noexcept { return kind_; }
  const std::vector<double>& evidence() const noexcept { return evidence_; }

 private:
  std::string kind_;
  std::vector<double> evidence_;
};

}  // namespace qlat
