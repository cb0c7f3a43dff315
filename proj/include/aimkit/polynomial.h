#pragma once
#include <aimkit/core.h>
#include <vector>

namespace aimkit {

/// Dense polynomial in (x, y, z) with total degree <= degree().
class Polynomial3 {
public:
  explicit Polynomial3(int degree = 0);

  static Polynomial3 constant(double c);
  static Polynomial3 variable(int axis); // 0 = x, 1 = y, 2 = z
  /// |r|^l Y_l^m with orthonormal real Y (see harmonics.h conventions).
  static const Polynomial3 &real_solid_harmonic(int l, int m);

  int degree() const { return degree_; }
  double coefficient(int a, int b, int c) const;
  double &coefficient(int a, int b, int c);

  Polynomial3 operator+(const Polynomial3 &o) const;
  Polynomial3 operator-(const Polynomial3 &o) const;
  Polynomial3 operator*(const Polynomial3 &o) const;
  Polynomial3 operator*(double s) const;

  /// q(u) = p(u + d).
  Polynomial3 shifted(const Vec3 &d) const;

  double evaluate(const Vec3 &r) const;

  /// Integral over R^3 of p(u) exp(-exponent |u|^2).
  double gaussian_integral(double exponent) const;

private:
  int index(int a, int b, int c) const {
    return (a * (degree_ + 1) + b) * (degree_ + 1) + c;
  }
  int degree_;
  std::vector<double> coef_;
};

} // namespace aimkit
