#include <aimkit/grid.h>
#include <aimkit/harmonics.h>
#include <aimkit/polynomial.h>
#include <catch2/catch_amalgamated.hpp>
#include <random>

using namespace aimkit;
using namespace aimkit::harmonics;
using Catch::Approx;

namespace {

// Hand-written l <= 2 real harmonics (no Condon-Shortley phase).
double explicit_real(int l, int m, const Vec3 &r) {
  const double x = r.x(), y = r.y(), z = r.z(), r2 = r.squaredNorm();
  const double n = std::sqrt((2.0 * l + 1.0) / (4.0 * pi));
  if (l == 0)
    return n;
  if (l == 1)
    return n * (m == 1 ? x : m == -1 ? y : z);
  switch (m) {
  case -2: return n * std::sqrt(3.0) * x * y;
  case -1: return n * std::sqrt(3.0) * y * z;
  case 0: return n * 0.5 * (3.0 * z * z - r2);
  case 1: return n * std::sqrt(3.0) * x * z;
  default: return n * 0.5 * std::sqrt(3.0) * (x * x - y * y);
  }
}

Vec3 random_point(std::mt19937 &gen) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(gen), u(gen), u(gen)};
}

} // namespace

TEST_CASE("real solid harmonics match explicit low-order formulas") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 r = random_point(gen);
    for (int l = 0; l <= 2; ++l)
      for (int m = -l; m <= l; ++m)
        CHECK(real_solid_harmonic(l, m, r) ==
              Approx(explicit_real(l, m, r)).margin(1e-14));
  }
}

TEST_CASE("l = 0 is constant and l = 1, m = 0 is z-aligned") {
  CHECK(real_solid_harmonic(0, 0, Vec3(3, -1, 2)) ==
        Approx(1.0 / std::sqrt(4.0 * pi)));
  CHECK(real_solid_harmonic(0, 0, Vec3::Zero()) ==
        Approx(1.0 / std::sqrt(4.0 * pi)));
  CHECK(real_solid_harmonic(1, 0, Vec3(0, 0, 2)) ==
        Approx(2.0 * std::sqrt(3.0 / (4.0 * pi))));
  CHECK(real_solid_harmonic(3, 1, Vec3::Zero()) == 0.0);
}

TEST_CASE("real harmonics are orthonormal under Lebedev quadrature") {
  const auto ang = grid::build_angular(170);
  const int lmax = 6;
  const int nb = block_size(lmax);
  Mat G = Mat::Zero(nb, nb);
  std::vector<double> y(nb);
  for (int j = 0; j < ang.size(); ++j) {
    real_solid_harmonics(lmax, ang.points[j], y);
    for (int p = 0; p < nb; ++p)
      for (int q = 0; q < nb; ++q)
        G(p, q) += ang.weights[j] * y[p] * y[q];
  }
  // mean over the sphere = delta / (4 pi)
  CHECK((4.0 * pi * G - Mat::Identity(nb, nb)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("solid harmonic polynomials agree with direct evaluation") {
  std::mt19937 gen(11);
  for (int l = 0; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) {
      const auto &p = Polynomial3::real_solid_harmonic(l, m);
      for (int t = 0; t < 5; ++t) {
        const Vec3 r = random_point(gen);
        CHECK(p.evaluate(r) ==
              Approx(real_solid_harmonic(l, m, r)).margin(1e-12));
      }
    }
}

TEST_CASE("complex harmonics: Condon-Shortley phase and conjugation") {
  const Vec3 r(0.3, -0.7, 0.5);
  // Y_1^1 = -sqrt(3/8pi) (x + i y)
  const auto y11 = complex_solid_harmonic(1, 1, r);
  CHECK(y11.real() == Approx(-std::sqrt(3.0 / (8.0 * pi)) * r.x()));
  CHECK(y11.imag() == Approx(-std::sqrt(3.0 / (8.0 * pi)) * r.y()));
  for (int l = 0; l <= 5; ++l)
    for (int m = 1; m <= l; ++m) {
      const auto a = complex_solid_harmonic(l, -m, r);
      const auto b = std::pow(-1.0, m) * std::conj(complex_solid_harmonic(l, m, r));
      CHECK(std::abs(a - b) < 1e-13);
    }
}

TEST_CASE("complex/real multipole transform") {
  const int lmax = 5;
  std::mt19937 gen(3);
  std::normal_distribution<double> n01;

  SECTION("round trip is the identity") {
    std::vector<double> q(block_size(lmax));
    for (auto &v : q)
      v = n01(gen);
    const auto c = real_to_complex(q, lmax);
    const auto back = complex_to_real(c, lmax);
    for (std::size_t i = 0; i < q.size(); ++i)
      CHECK(back[i] == Approx(q[i]).margin(1e-14));
  }

  SECTION("pure real m = 0 entries pass through") {
    std::vector<std::complex<double>> c(block_size(lmax));
    for (int l = 0; l <= lmax; ++l)
      c[flat_index(l, 0)] = n01(gen);
    const auto r = complex_to_real(c, lmax);
    for (int l = 0; l <= lmax; ++l) {
      CHECK(r[flat_index(l, 0)] == c[flat_index(l, 0)].real());
      for (int m = 1; m <= l; ++m) {
        CHECK(r[flat_index(l, m)] == 0.0);
        CHECK(r[flat_index(l, -m)] == 0.0);
      }
    }
  }

  SECTION("point charge moments agree in both bases") {
    // Q_lm = q C_lm(d) for a point charge at d
    const double q = 1.7;
    const Vec3 d(0.4, -0.9, 1.3);
    std::vector<double> real(block_size(lmax));
    std::vector<std::complex<double>> cplx(block_size(lmax));
    regular_real(lmax, d, real);
    regular_complex(lmax, d, cplx);
    for (auto &v : real)
      v *= q;
    for (auto &v : cplx)
      v *= q;
    const auto from_complex = complex_to_real(cplx, lmax);
    for (std::size_t i = 0; i < real.size(); ++i)
      CHECK(from_complex[i] == Approx(real[i]).margin(1e-13));
    CHECK(real[flat_index(1, 0)] == Approx(q * d.z()));
    CHECK(real[flat_index(1, 1)] == Approx(q * d.x()));
    CHECK(real[flat_index(1, -1)] == Approx(q * d.y()));
  }
}

TEST_CASE("Racah factor and binomials") {
  CHECK(multipole_factor(0) == Approx(std::sqrt(4.0 * pi)));
  CHECK(multipole_factor(1) == Approx(std::sqrt(4.0 * pi / 3.0)));
  CHECK(binomial(6, 2) == 15.0);
  CHECK(binomial(3, 5) == 0.0);
  CHECK(binomial(3, -1) == 0.0);
}

TEST_CASE("polynomial shift and Gaussian integral") {
  // (x + 1)^2 exp(-a r^2) integrates to (1/(2a) + 1) (pi/a)^{3/2}
  const double a = 1.3;
  const auto p = Polynomial3::variable(0) * Polynomial3::variable(0);
  const auto q = p.shifted(Vec3(1, 0, 0));
  CHECK(q.evaluate(Vec3(0.5, 2, 3)) == Approx(2.25));
  CHECK(q.gaussian_integral(a) ==
        Approx((1.0 / (2.0 * a) + 1.0) * std::pow(pi / a, 1.5)).epsilon(1e-14));
}
