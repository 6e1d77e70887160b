#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lrlab {

/// Precondition violated by the caller (overlapping regions, bad sizes, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds what a code path can represent (qubit count, dense size).
class CapabilityError : public std::runtime_error {
 public:
  CapabilityError(const std::string& what, std::string dimension, long requested, long limit)
      : std::runtime_error(what + " (" + dimension + " = " + std::to_string(requested) +
                           ", limit " + std::to_string(limit) + ")"),
        dimension_(std::move(dimension)),
        requested_(requested),
        limit_(limit) {}

  const std::string& dimension() const { return dimension_; }
  long requested() const { return requested_; }
  long limit() const { return limit_; }

 private:
  std::string dimension_;
  long requested_;
  long limit_;
};

/// An iterative method stopped without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

/// Step-halving failed; carries the last two iterates (coarse, fine).
class IntegratorConvergenceError : public ConvergenceError {
 public:
  IntegratorConvergenceError(const std::string& what, double difference,
                             Eigen::VectorXcd coarse, Eigen::VectorXcd fine)
      : ConvergenceError(what, difference), coarse_(std::move(coarse)), fine_(std::move(fine)) {}

  const Eigen::VectorXcd& coarse() const { return coarse_; }
  const Eigen::VectorXcd& fine() const { return fine_; }

 private:
  Eigen::VectorXcd coarse_;
  Eigen::VectorXcd fine_;
};

}  // namespace lrlab
