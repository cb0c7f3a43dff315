#pragma once
#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace aimkit {

using Vec3 = Eigen::Vector3d;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Mat3 = Eigen::Matrix3d;

namespace units {
/// 1 angstrom in bohr (CODATA).
inline constexpr double bohr_per_angstrom = 1.8897261254578281;
/// 1 bohr in angstrom, as used by the empirical shell exponent rule.
inline constexpr double bohr_in_angstrom = 0.529177210903;
} // namespace units

inline constexpr double pi = 3.14159265358979323846;

/// Invalid user input or inconsistent arguments.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An iterative procedure hit its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, broken invariants, or ill-posed numerics.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace aimkit
