#include <aimkit/dma.h>
#include <aimkit/harmonics.h>
#include <aimkit/polynomial.h>
#include <cmath>
#include <map>
#include <mutex>

namespace aimkit {

Polynomial3::Polynomial3(int degree)
    : degree_(degree),
      coef_((degree + 1) * (degree + 1) * (degree + 1), 0.0) {
  if (degree < 0)
    throw ValidationError("negative polynomial degree");
}

Polynomial3 Polynomial3::constant(double c) {
  Polynomial3 p(0);
  p.coef_[0] = c;
  return p;
}

Polynomial3 Polynomial3::variable(int axis) {
  Polynomial3 p(1);
  p.coefficient(axis == 0, axis == 1, axis == 2) = 1.0;
  return p;
}

double Polynomial3::coefficient(int a, int b, int c) const {
  if (a < 0 || b < 0 || c < 0 || a + b + c > degree_)
    return 0.0;
  return coef_[index(a, b, c)];
}

double &Polynomial3::coefficient(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0 || a + b + c > degree_)
    throw ValidationError("monomial exceeds polynomial degree");
  return coef_[index(a, b, c)];
}

Polynomial3 Polynomial3::operator+(const Polynomial3 &o) const {
  Polynomial3 r(std::max(degree_, o.degree_));
  for (int a = 0; a <= r.degree_; ++a)
    for (int b = 0; a + b <= r.degree_; ++b)
      for (int c = 0; a + b + c <= r.degree_; ++c)
        r.coefficient(a, b, c) = coefficient(a, b, c) + o.coefficient(a, b, c);
  return r;
}

Polynomial3 Polynomial3::operator-(const Polynomial3 &o) const {
  return *this + o * -1.0;
}

Polynomial3 Polynomial3::operator*(double s) const {
  Polynomial3 r(*this);
  for (auto &c : r.coef_)
    c *= s;
  return r;
}

Polynomial3 Polynomial3::operator*(const Polynomial3 &o) const {
  Polynomial3 r(degree_ + o.degree_);
  for (int a = 0; a <= degree_; ++a)
    for (int b = 0; a + b <= degree_; ++b)
      for (int c = 0; a + b + c <= degree_; ++c) {
        const double x = coef_[index(a, b, c)];
        if (x == 0.0)
          continue;
        for (int d = 0; d <= o.degree_; ++d)
          for (int e = 0; d + e <= o.degree_; ++e)
            for (int f = 0; d + e + f <= o.degree_; ++f) {
              const double y = o.coef_[o.index(d, e, f)];
              if (y != 0.0)
                r.coef_[r.index(a + d, b + e, c + f)] += x * y;
            }
      }
  return r;
}

Polynomial3 Polynomial3::shifted(const Vec3 &d) const {
  using harmonics::binomial;
  Polynomial3 r(degree_);
  for (int a = 0; a <= degree_; ++a)
    for (int b = 0; a + b <= degree_; ++b)
      for (int c = 0; a + b + c <= degree_; ++c) {
        const double x = coef_[index(a, b, c)];
        if (x == 0.0)
          continue;
        for (int i = 0; i <= a; ++i)
          for (int j = 0; j <= b; ++j)
            for (int k = 0; k <= c; ++k) {
              r.coef_[r.index(i, j, k)] +=
                  x * binomial(a, i) * binomial(b, j) * binomial(c, k) *
                  std::pow(d.x(), a - i) * std::pow(d.y(), b - j) *
                  std::pow(d.z(), c - k);
            }
      }
  return r;
}

double Polynomial3::evaluate(const Vec3 &r) const {
  double sum = 0.0;
  for (int a = 0; a <= degree_; ++a)
    for (int b = 0; a + b <= degree_; ++b)
      for (int c = 0; a + b + c <= degree_; ++c) {
        const double x = coef_[index(a, b, c)];
        if (x != 0.0)
          sum += x * std::pow(r.x(), a) * std::pow(r.y(), b) *
                 std::pow(r.z(), c);
      }
  return sum;
}

double Polynomial3::gaussian_integral(double exponent) const {
  // int_{-inf}^{inf} t^q e^{-p t^2} dt = 2 I_q / p^{(q+1)/2}, zero for odd q
  std::vector<double> g(degree_ + 1, 0.0);
  for (int q = 0; q <= degree_; q += 2)
    g[q] = 2.0 * dma::gamma_integral(q) / std::pow(exponent, 0.5 * (q + 1));
  double sum = 0.0;
  for (int a = 0; a <= degree_; a += 2)
    for (int b = 0; a + b <= degree_; b += 2)
      for (int c = 0; a + b + c <= degree_; c += 2)
        sum += coef_[index(a, b, c)] * g[a] * g[b] * g[c];
  return sum;
}

const Polynomial3 &Polynomial3::real_solid_harmonic(int l, int m) {
  static std::mutex lock;
  static std::map<std::pair<int, int>, Polynomial3> cache;
  std::lock_guard guard(lock);
  if (auto it = cache.find({l, m}); it != cache.end())
    return it->second;
  if (l < 0 || std::abs(m) > l)
    throw ValidationError("invalid harmonic index");

  const int am = std::abs(m);
  const auto x = variable(0), y = variable(1), z = variable(2);
  const auto r2 = x * x + y * y + z * z;
  // Legendre part: recurrence in z and r^2 (see harmonics.cpp)
  Polynomial3 prev2 = constant(0.0), prev1 = constant(1.0);
  double dfact = 1.0;
  for (int k = 1; k <= am; ++k)
    dfact *= (2 * k - 1);
  prev1 = constant(dfact); // P_{am}^{am}
  Polynomial3 legendre = prev1;
  if (l > am) {
    Polynomial3 cur = z * (2 * am + 1) * prev1; // l = am + 1
    prev2 = prev1;
    prev1 = cur;
    for (int k = am + 2; k <= l; ++k) {
      cur = (z * prev1 * (2 * k - 1) - r2 * prev2 * (k + am - 1)) *
            (1.0 / (k - am));
      prev2 = prev1;
      prev1 = cur;
    }
    legendre = prev1;
  }
  // Real/imaginary parts of (x + i y)^am
  Polynomial3 re = constant(1.0), im = constant(0.0);
  for (int k = 0; k < am; ++k) {
    Polynomial3 nre = re * x - im * y;
    Polynomial3 nim = im * x + re * y;
    re = nre;
    im = nim;
  }
  Polynomial3 result(l);
  const double norm = harmonics::legendre_norm(l, am);
  if (m == 0)
    result = legendre * norm;
  else if (m > 0)
    result = legendre * re * (std::sqrt(2.0) * norm);
  else
    result = legendre * im * (std::sqrt(2.0) * norm);
  // Trim to degree l (products above can carry a larger nominal degree)
  Polynomial3 trimmed(l);
  for (int a = 0; a <= l; ++a)
    for (int b = 0; a + b <= l; ++b)
      for (int c = 0; a + b + c <= l; ++c)
        trimmed.coefficient(a, b, c) = result.coefficient(a, b, c);
  return cache.emplace(std::make_pair(l, m), std::move(trimmed)).first->second;
}

} // namespace aimkit
