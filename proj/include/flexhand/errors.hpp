#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace flexhand {

/// Thrown when an iterative solver exhausts its iteration budget.
/// Carries the best iterate seen so far and its residual norm.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, Eigen::VectorXd best_iterate,
                     double residual_norm)
      : std::runtime_error(what),
        best_iterate_(std::move(best_iterate)),
        residual_norm_(residual_norm) {}

  const Eigen::VectorXd& bestIterate() const { return best_iterate_; }
  double residualNorm() const { return residual_norm_; }

 private:
  Eigen::VectorXd best_iterate_;
  double residual_norm_;
};

/// Thrown when a residual or Jacobian evaluation produces NaN/Inf.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a file cannot be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by file loaders; carries the offending location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::string file, int line)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

}  // namespace flexhand
