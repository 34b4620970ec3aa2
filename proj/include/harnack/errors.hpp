#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace harnack {

using Complex = std::complex<double>;

// Base of every error thrown by the library. `kind()` is a stable
// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Input outside the domain of an operation (|z| >= 1 for a disk metric, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
  DomainError(std::string kind, const std::string& what) : Error(std::move(kind), what) {}
};

// Evaluation at one of the omitted points 0, 1.
class PunctureError : public DomainError {
 public:
  explicit PunctureError(const std::string& what) : DomainError("puncture", what) {}
};

// Möbius map evaluated at its pole.
class SingularEvaluationError : public DomainError {
 public:
  explicit SingularEvaluationError(const std::string& what) : DomainError("singular", what) {}
};

// Integral of rho(-r) dr reaching the divergent endpoint r = 0.
class DivergenceError : public DomainError {
 public:
  explicit DivergenceError(const std::string& what) : DomainError("divergence", what) {}
};

// Adaptive quadrature did not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double value, double achieved_error)
      : Error("accuracy", what), value_(value), achieved_error_(achieved_error) {}
  double value() const noexcept { return value_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double value_;
  double achieved_error_;
};

// Broken invariant inside the library (should be unreachable).
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error("internal", what) {}
};

// Chain of holomorphic disks whose joints do not match.
class MalformedChainError : public Error {
 public:
  MalformedChainError(const std::string& what, std::size_t joint)
      : Error("malformed_chain", what), joint_(joint) {}
  std::size_t joint() const noexcept { return joint_; }

 private:
  std::size_t joint_;
};

// A sampled precondition (range, positivity, omitted values, hypotheses)
// failed. `witness` holds the offending point(s) as flat reals.
class AuditError : public Error {
 public:
  AuditError(const std::string& what, std::vector<double> witness)
      : Error("audit", what), witness_(std::move(witness)) {}
  AuditError(std::string kind, const std::string& what, std::vector<double> witness)
      : Error(std::move(kind), what), witness_(std::move(witness)) {}
  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  std::vector<double> witness_;
};

// Logarithm branch jumps along a sample path.
class BranchError : public AuditError {
 public:
  BranchError(const std::string& what, Complex location)
      : AuditError("branch", what, {location.real(), location.imag()}) {}
};

class InjectivityError : public AuditError {
 public:
  InjectivityError(const std::string& what, std::vector<double> witness)
      : AuditError("injectivity", what, std::move(witness)) {}
};

class NormalizationError : public AuditError {
 public:
  NormalizationError(const std::string& what, std::vector<double> witness)
      : AuditError("normalization", what, std::move(witness)) {}
};

class HypothesisError : public AuditError {
 public:
  HypothesisError(const std::string& what, std::vector<double> witness)
      : AuditError("hypothesis", what, std::move(witness)) {}
};

// Corrupt or inconsistent persisted data (cache files).
class DataIntegrityError : public Error {
 public:
  DataIntegrityError(const std::string& what, std::string file)
      : Error("data_integrity", what), file_(std::move(file)) {}
  const std::string& file() const noexcept { return file_; }

 private:
  std::string file_;
};

}  // namespace harnack
