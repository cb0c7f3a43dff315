#pragma once
#include <aimkit/core.h>
#include <aimkit/grid.h>
#include <span>
#include <vector>

namespace aimkit {

/// Charge, dipole and Cartesian second moment (not traceless).
struct AtomicMoments {
  double q{0.0};
  Vec3 p{Vec3::Zero()};
  Mat3 Q{Mat3::Zero()};
};

/// Moments of f sampled on atom a's grid, taken about `origin`.
AtomicMoments atomic_moments(const grid::AtomicGridSet &grids, int a,
                             std::span<const double> f, const Vec3 &origin);
/// Same, about the nucleus R_a.
AtomicMoments atomic_moments(const grid::AtomicGridSet &grids, int a,
                             std::span<const double> f);

/// Real Racah multipoles Q_lm = int f C_lm(r - origin), flat_index order.
std::vector<double> spherical_moments(const grid::AtomicGridSet &grids, int a,
                                      std::span<const double> f, int lmax,
                                      const Vec3 &origin);

/// Spherical l = 2 block (m = -2..2) of a Cartesian second moment.
std::vector<double> quadrupole_spherical(const Mat3 &Q);

/// Buckingham traceless quadrupole (3 Q - tr(Q) I) / 2.
Mat3 traceless_quadrupole(const Mat3 &Q);

} // namespace aimkit
