#pragma once

// Error taxonomy shared across the library. Each condition gets its own type
// so callers can catch precisely; the what() string always starts with the
// error's name followed by a diagnostic.

#include <stdexcept>
#include <string>

namespace bounce {

struct Error : std::runtime_error {
  explicit Error(const std::string& name, const std::string& detail)
      : std::runtime_error(name + ": " + detail) {}
};

// A queried or produced robot pose lies outside free space.
struct InvalidPose : Error {
  explicit InvalidPose(const std::string& d) : Error("InvalidPose", d) {}
};

// A push was requested on a surface that is not a pushable object face.
struct NotPushable : Error {
  explicit NotPushable(const std::string& d) : Error("NotPushable", d) {}
};

// A policy invoked a primitive missing from the robot's capability set.
struct PrimitiveUnavailable : Error {
  explicit PrimitiveUnavailable(const std::string& d) : Error("PrimitiveUnavailable", d) {}
};

// A subroutine exceeded its internal stage allowance.
struct StageBudgetExceeded : Error {
  explicit StageBudgetExceeded(const std::string& d) : Error("StageBudgetExceeded", d) {}
};

// A sweep finished without sighting the requested feature.
struct NotVisible : Error {
  explicit NotVisible(const std::string& d) : Error("NotVisible", d) {}
};

// Cycle formulas evaluated at a tangent/cotangent pole.
struct SingularParameters : Error {
  explicit SingularParameters(const std::string& d) : Error("SingularParameters", d) {}
};

// Fixed-point denominator vanished: the affine map has no unique fixed point.
struct DegenerateDenominator : Error {
  explicit DegenerateDenominator(const std::string& d) : Error("DegenerateDenominator", d) {}
};

// No parameter in the scanned family yields a stable, feasible cycle.
struct NoStableCycle : Error {
  explicit NoStableCycle(const std::string& d) : Error("NoStableCycle", d) {}
};

// Cross-checked sample sets disagree where they must agree.
struct InconsistentSamples : Error {
  explicit InconsistentSamples(const std::string& d) : Error("InconsistentSamples", d) {}
};

// A run configuration (file or command-line value) failed to parse or named
// an unknown key; the diagnostic names the offending token.
struct ConfigError : Error {
  explicit ConfigError(const std::string& d) : Error("ConfigError", d) {}
};

}  // namespace bounce
