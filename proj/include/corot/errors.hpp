#pragma once

#include <stdexcept>
#include <string>

namespace corot {

// Configuration / input validation problems. CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical aborts. CLI maps these to exit code 3.
struct NumericalAbort : std::runtime_error {
  explicit NumericalAbort(const std::string& msg) : std::runtime_error(msg) {}
};

// e^{-gamma} reached zero while sweeping the constraint outward, i.e. the
// coupling times the enclosed energy hit the conical bound alpha*E/(2*pi) -> 1.
struct DeficitAngleExceeded : NumericalAbort {
  DeficitAngleExceeded(double t, double r)
      : NumericalAbort("deficit-angle bound reached at t=" + std::to_string(t) +
                       ", r=" + std::to_string(r)),
        t(t), r(r) {}
  double t, r;
};

struct CflViolation : NumericalAbort {
  CflViolation(double t, double speed, double dt, double dr)
      : NumericalAbort("CFL violated at t=" + std::to_string(t) +
                       ": speed=" + std::to_string(speed) +
                       ", dt/dr=" + std::to_string(dt / dr)),
        t(t) {}
  double t;
};

struct BoundaryTime : std::runtime_error {
  explicit BoundaryTime(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConeExitsGrid : std::runtime_error {
  explicit ConeExitsGrid(const std::string& msg) : std::runtime_error(msg) {}
};

struct CharacteristicExitsGrid : std::runtime_error {
  explicit CharacteristicExitsGrid(const std::string& msg) : std::runtime_error(msg) {}
};

struct FrameUnavailable : std::runtime_error {
  explicit FrameUnavailable(const std::string& msg) : std::runtime_error(msg) {}
};

struct BracketInvalid : std::runtime_error {
  BracketInvalid(const std::string& msg, const std::string& low_verdict,
                 const std::string& high_verdict)
      : std::runtime_error(msg), low_verdict(low_verdict), high_verdict(high_verdict) {}
  std::string low_verdict, high_verdict;
};

struct NonFiniteField : NumericalAbort {
  NonFiniteField(const std::string& field, double t, int index)
      : NumericalAbort("non-finite " + field + " at t=" + std::to_string(t) +
                       ", grid index " + std::to_string(index)),
        index(index) {}
  int index;
};

}  // namespace corot
