#include <aimkit/harmonics.h>
#include <aimkit/moments.h>
#include <cmath>
#include <fmt/core.h>

namespace aimkit {

AtomicMoments atomic_moments(const grid::AtomicGridSet &grids, int a,
                             std::span<const double> f, const Vec3 &origin) {
  const auto &g = grids.atom(a);
  const int nr = g.radial.size(), ns = g.angular.size();
  if (static_cast<int>(f.size()) != nr * ns)
    throw ValidationError(
        fmt::format("atom {}: sample count does not match the grid", a));
  // Local moments about the grid center; axial grids stand for their
  // azimuthal average, so x and y average out.
  const bool axial = g.angular.kind == grid::AngularKind::axial;
  double q = 0.0;
  Vec3 p = Vec3::Zero();
  Mat3 Q = Mat3::Zero();
  for (int i = 0; i < nr; ++i) {
    const double r = g.radial.nodes[i];
    const double wr = 4.0 * pi * g.radial.weights[i] * r * r;
    double qi = 0.0;
    Vec3 pi_ = Vec3::Zero();
    Mat3 Qi = Mat3::Zero();
    for (int j = 0; j < ns; ++j) {
      const double w = g.angular.weights[j] * f[i * ns + j];
      if (w == 0.0)
        continue;
      const Vec3 u = r * g.angular.points[j];
      qi += w;
      if (axial) {
        pi_.z() += w * u.z();
        const double t = 0.5 * w * (u.x() * u.x() + u.y() * u.y());
        Qi(0, 0) += t;
        Qi(1, 1) += t;
        Qi(2, 2) += w * u.z() * u.z();
      } else {
        pi_ += w * u;
        Qi += w * u * u.transpose();
      }
    }
    q += wr * qi;
    p += wr * pi_;
    Q += wr * Qi;
  }
  const Vec3 c = g.center - origin;
  AtomicMoments m;
  m.q = q;
  m.p = p + q * c;
  m.Q = Q + p * c.transpose() + c * p.transpose() + q * c * c.transpose();
  return m;
}

AtomicMoments atomic_moments(const grid::AtomicGridSet &grids, int a,
                             std::span<const double> f) {
  return atomic_moments(grids, a, f, grids.atom(a).center);
}

std::vector<double> spherical_moments(const grid::AtomicGridSet &grids, int a,
                                      std::span<const double> f, int lmax,
                                      const Vec3 &origin) {
  const auto &g = grids.atom(a);
  const int nr = g.radial.size(), ns = g.angular.size();
  if (static_cast<int>(f.size()) != nr * ns)
    throw ValidationError(
        fmt::format("atom {}: sample count does not match the grid", a));
  const bool axial = g.angular.kind == grid::AngularKind::axial;
  if (axial && (origin - g.center).norm() > 1e-12)
    throw ValidationError(
        "spherical moments on axial grids are only defined about the center");
  const int nb = harmonics::block_size(lmax);
  std::vector<double> out(nb, 0.0), c(nb);
  for (int i = 0; i < nr; ++i) {
    const double r = g.radial.nodes[i];
    const double wr = 4.0 * pi * g.radial.weights[i] * r * r;
    for (int j = 0; j < ns; ++j) {
      const double w = wr * g.angular.weights[j] * f[i * ns + j];
      if (w == 0.0)
        continue;
      harmonics::regular_real(lmax, g.point(i, j) - origin, c);
      for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) {
          const int k = harmonics::flat_index(l, m);
          if (!axial || m == 0)
            out[k] += w * c[k];
        }
    }
  }
  return out;
}

std::vector<double> quadrupole_spherical(const Mat3 &Q) {
  const double s3 = std::sqrt(3.0);
  return {s3 * Q(0, 1), s3 * Q(1, 2), Q(2, 2) - 0.5 * (Q(0, 0) + Q(1, 1)),
          s3 * Q(0, 2), 0.5 * s3 * (Q(0, 0) - Q(1, 1))};
}

Mat3 traceless_quadrupole(const Mat3 &Q) {
  return 1.5 * Q - 0.5 * Q.trace() * Mat3::Identity();
}

} // namespace aimkit
