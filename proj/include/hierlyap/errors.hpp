#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hierlyap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Linear system singular or Lyapunov solution not positive definite.
class NoSolution : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class GainError : public Error {
 public:
  using Error::Error;
};

// A subsystem fails the local stability assumptions (Hurwitz A, positive decay).
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(std::size_t subsystem, const std::string& what)
      : Error("subsystem " + std::to_string(subsystem + 1) + ": " + what),
        subsystem_(subsystem) {}

  // 0-based index of the offending subsystem.
  std::size_t subsystem() const noexcept { return subsystem_; }

 private:
  std::size_t subsystem_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(double last_finite_time, const std::string& what)
      : Error(what), last_finite_time_(last_finite_time) {}
  double last_finite_time() const noexcept { return last_finite_time_; }

 private:
  double last_finite_time_;
};

}  // namespace hierlyap
