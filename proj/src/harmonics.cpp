#include <aimkit/harmonics.h>
#include <cmath>

namespace aimkit::harmonics {

namespace {

// Fills pi_lm(l, m) = r^(l-m) d^m P_l / dx^m evaluated at z / r, a polynomial
// in z and r^2, for 0 <= m <= l <= lmax.
void legendre_polys(int lmax, double z, double r2, std::vector<double> &out) {
  const int n = lmax + 1;
  out.assign(n * n, 0.0);
  auto at = [&](int l, int m) -> double & { return out[l * n + m]; };
  double dfact = 1.0;
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0)
      dfact *= (2 * m - 1);
    at(m, m) = dfact;
    if (m + 1 <= lmax)
      at(m + 1, m) = (2 * m + 1) * z * dfact;
    for (int l = m + 2; l <= lmax; ++l) {
      at(l, m) = ((2 * l - 1) * z * at(l - 1, m) -
                  (l + m - 1) * r2 * at(l - 2, m)) /
                 (l - m);
    }
  }
}

void check_lm(int l, int m) {
  if (l < 0 || std::abs(m) > l)
    throw ValidationError("invalid harmonic index");
}

} // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n || n < 0)
    return 0.0;
  double result = 1.0;
  for (int i = 1; i <= k; ++i)
    result = result * (n - k + i) / i;
  return std::round(result);
}

double multipole_factor(int l) { return std::sqrt(4.0 * pi / (2 * l + 1)); }

double legendre_norm(int l, int m) {
  m = std::abs(m);
  double ratio = 1.0; // (l-m)! / (l+m)!
  for (int k = l - m + 1; k <= l + m; ++k)
    ratio /= k;
  return std::sqrt((2 * l + 1) / (4.0 * pi) * ratio);
}

void real_solid_harmonics(int lmax, const Vec3 &r, std::span<double> out) {
  if (static_cast<int>(out.size()) < block_size(lmax))
    throw ValidationError("output span too small for harmonics block");
  thread_local std::vector<double> pl, cm, sm;
  legendre_polys(lmax, r.z(), r.squaredNorm(), pl);
  const int n = lmax + 1;
  // cos/sin parts of (x + i y)^m
  cm.resize(n);
  sm.resize(n);
  cm[0] = 1.0;
  sm[0] = 0.0;
  for (int m = 1; m <= lmax; ++m) {
    cm[m] = cm[m - 1] * r.x() - sm[m - 1] * r.y();
    sm[m] = sm[m - 1] * r.x() + cm[m - 1] * r.y();
  }
  for (int l = 0; l <= lmax; ++l) {
    out[flat_index(l, 0)] = legendre_norm(l, 0) * pl[l * n];
    for (int m = 1; m <= l; ++m) {
      const double f = std::sqrt(2.0) * legendre_norm(l, m) * pl[l * n + m];
      out[flat_index(l, m)] = f * cm[m];
      out[flat_index(l, -m)] = f * sm[m];
    }
  }
}

double real_solid_harmonic(int l, int m, const Vec3 &r) {
  check_lm(l, m);
  std::vector<double> buf(block_size(l));
  real_solid_harmonics(l, r, buf);
  return buf[flat_index(l, m)];
}

double real_solid_harmonic(const HarmonicIndex &idx, const Vec3 &r) {
  return real_solid_harmonic(idx.l, idx.m, r);
}

std::complex<double> complex_solid_harmonic(int l, int m, const Vec3 &r) {
  check_lm(l, m);
  std::vector<std::complex<double>> buf(block_size(l));
  regular_complex(l, r, buf);
  return buf[flat_index(l, m)] / multipole_factor(l);
}

void regular_real(int lmax, const Vec3 &r, std::span<double> out) {
  real_solid_harmonics(lmax, r, out);
  for (int l = 0; l <= lmax; ++l) {
    const double k = multipole_factor(l);
    for (int m = -l; m <= l; ++m)
      out[flat_index(l, m)] *= k;
  }
}

void regular_complex(int lmax, const Vec3 &r,
                     std::span<std::complex<double>> out) {
  if (static_cast<int>(out.size()) < block_size(lmax))
    throw ValidationError("output span too small for harmonics block");
  std::vector<double> pl;
  legendre_polys(lmax, r.z(), r.squaredNorm(), pl);
  const int n = lmax + 1;
  std::vector<std::complex<double>> xm(n);
  xm[0] = 1.0;
  const std::complex<double> xy(r.x(), r.y());
  for (int m = 1; m <= lmax; ++m)
    xm[m] = xm[m - 1] * xy;
  for (int l = 0; l <= lmax; ++l) {
    const double k = multipole_factor(l);
    for (int m = 0; m <= l; ++m) {
      const double f = k * legendre_norm(l, m) * pl[l * n + m];
      const std::complex<double> plus = f * xm[m];
      const double phase = (m % 2 == 0) ? 1.0 : -1.0;
      out[flat_index(l, m)] = phase * plus;
      if (m > 0)
        out[flat_index(l, -m)] = std::conj(plus);
    }
  }
}

std::vector<double> complex_to_real(std::span<const std::complex<double>> q,
                                    int lmax) {
  if (static_cast<int>(q.size()) != block_size(lmax))
    throw ValidationError("incomplete multipole block");
  std::vector<double> out(q.size());
  const double s = 1.0 / std::sqrt(2.0);
  for (int l = 0; l <= lmax; ++l) {
    out[flat_index(l, 0)] = q[flat_index(l, 0)].real();
    for (int m = 1; m <= l; ++m) {
      const double phase = (m % 2 == 0) ? 1.0 : -1.0;
      const auto &qp = q[flat_index(l, m)];
      const auto &qn = q[flat_index(l, -m)];
      out[flat_index(l, m)] = (qn.real() + phase * qp.real()) * s;
      out[flat_index(l, -m)] = (phase * qp.imag() - qn.imag()) * s;
    }
  }
  return out;
}

std::vector<std::complex<double>> real_to_complex(std::span<const double> q,
                                                  int lmax) {
  if (static_cast<int>(q.size()) != block_size(lmax))
    throw ValidationError("incomplete multipole block");
  std::vector<std::complex<double>> out(q.size());
  const double s = 1.0 / std::sqrt(2.0);
  for (int l = 0; l <= lmax; ++l) {
    out[flat_index(l, 0)] = q[flat_index(l, 0)];
    for (int m = 1; m <= l; ++m) {
      const double phase = (m % 2 == 0) ? 1.0 : -1.0;
      const double c = q[flat_index(l, m)];
      const double sn = q[flat_index(l, -m)];
      out[flat_index(l, m)] = phase * s * std::complex<double>(c, sn);
      out[flat_index(l, -m)] = s * std::complex<double>(c, -sn);
    }
  }
  return out;
}

} // namespace aimkit::harmonics
