#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace csbp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedDegree : public Error {
 public:
  explicit UnsupportedDegree(int degree)
      : Error("unsupported operator degree " + std::to_string(degree) + " (supported: 1..6)"),
        degree_(degree) {}
  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

class MeshTooSmall : public Error {
 public:
  explicit MeshTooSmall(int elements)
      : Error("periodic mesh needs at least 2 elements, got " + std::to_string(elements)) {}
};

/// Power iteration ran out of iterations; carries the last singular value estimate.
class IterationLimit : public Error {
 public:
  IterationLimit(int iterations, double last_estimate)
      : Error("power iteration did not converge in " + std::to_string(iterations) + " iterations"),
        last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class PostBreaking : public Error {
 public:
  PostBreaking(double t, double breaking_time)
      : Error("t = " + std::to_string(t) + " is at or past the breaking time " +
              std::to_string(breaking_time)) {}
};

class Divergence : public Error {
 public:
  explicit Divergence(std::size_t step, int elements = 0)
      : Error("non-finite state detected at step " + std::to_string(step) +
              (elements > 0 ? " on the mesh with " + std::to_string(elements) + " elements" : "")),
        step_(step),
        elements_(elements) {}
  std::size_t step() const noexcept { return step_; }
  /// Failing mesh, 0 when unknown.
  int elements() const noexcept { return elements_; }

 private:
  std::size_t step_;
  int elements_;
};

class InvalidCoefficient : public Error {
 public:
  using Error::Error;
};

class BlowUpDomain : public Error {
 public:
  BlowUpDomain(double t, double t_star)
      : Error("t = " + std::to_string(t) + " is outside the existence interval [0, " +
              std::to_string(t_star) + ")"),
        t_star_(t_star) {}
  double t_star() const noexcept { return t_star_; }

 private:
  double t_star_;
};

class OracleRange : public Error {
 public:
  using Error::Error;
};

class EnvelopeNotApplicable : public Error {
 public:
  EnvelopeNotApplicable(std::size_t index, double t, double t_star)
      : Error("sample " + std::to_string(index) + " at t = " + std::to_string(t) +
              " lies beyond the envelope blow-up time " + std::to_string(t_star)),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace csbp
