#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cgks {

using Index = std::int32_t;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr int kNumVars = 5;

/// Conserved variables (rho, rho*u, rho*v, rho*w, rho*E) per unit volume.
using Conserved = Eigen::Matrix<double, kNumVars, 1>;

/// Row d holds the derivative of every conserved variable along axis d.
using ConservedGrad = Eigen::Matrix<double, 3, kNumVars>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a state has non-positive density or internal energy.
class NonPhysicalState : public std::runtime_error {
 public:
  NonPhysicalState(const std::string& what, int component)
      : std::runtime_error(what), component_(component) {}

  /// 0 for density, 4 for internal energy.
  int component() const noexcept { return component_; }

 private:
  int component_;
};

/// Raised for malformed or inconsistent mesh input.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the time integrator hits a non-physical cell average.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Index cell, double time)
      : std::runtime_error(what), cell_(cell), time_(time) {}
  Index cell() const noexcept { return cell_; }
  double time() const noexcept { return time_; }

 private:
  Index cell_;
  double time_;
};

inline double pressure(const Conserved& w, double gamma) {
  const double kinetic = 0.5 * (w[1] * w[1] + w[2] * w[2] + w[3] * w[3]) / w[0];
  return (gamma - 1.0) * (w[4] - kinetic);
}

inline bool is_physical(const Conserved& w, double gamma) {
  return std::isfinite(w[0]) && std::isfinite(w[4]) && w[0] > 0.0 && pressure(w, gamma) > 0.0;
}

inline Conserved primitive_to_conserved(double rho, const Vec3& u, double p, double gamma) {
  Conserved w;
  w << rho, rho * u.x(), rho * u.y(), rho * u.z(), p / (gamma - 1.0) + 0.5 * rho * u.squaredNorm();
  return w;
}

inline Vec3 velocity(const Conserved& w) { return Vec3(w[1], w[2], w[3]) / w[0]; }

inline double sound_speed(const Conserved& w, double gamma) {
  return std::sqrt(gamma * pressure(w, gamma) / w[0]);
}

}  // namespace cgks
