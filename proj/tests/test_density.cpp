#include "test_util.h"
#include <aimkit/density.h>
#include <aimkit/grid.h>
#include <catch2/catch_amalgamated.hpp>

using namespace aimkit;
using Catch::Approx;

namespace {

AnalyticDensity gaussian_pair() {
  AnalyticDensity d;
  d.terms.push_back({AnalyticTerm::Kind::gaussian_s, Vec3::Zero(), 0.1, 1.0});
  d.terms.push_back(
      {AnalyticTerm::Kind::gaussian_s, Vec3(0, 0, 1.131), 0.5, 1.0});
  return d;
}

double gauss(double a, const Vec3 &r) {
  return std::pow(a / pi, 1.5) * std::exp(-a * r.squaredNorm());
}

} // namespace

TEST_CASE("analytic peak values") {
  AnalyticDensity g{{{AnalyticTerm::Kind::gaussian_s, Vec3::Zero(), 1.0, 1.0}}};
  CHECK(eval_density(g, Vec3::Zero()) == Approx(0.1795871221251665));
  AnalyticDensity s{{{AnalyticTerm::Kind::slater_s, Vec3::Zero(), 2.0, 1.0}}};
  CHECK(eval_density(s, Vec3::Zero()) == Approx(1.0 / pi));
  const double expected = std::pow(0.1 / pi, 1.5) +
                          std::pow(0.5 / pi, 1.5) * std::exp(-0.5 * 1.131 * 1.131);
  CHECK(eval_density(gaussian_pair(), Vec3::Zero()) == Approx(expected).epsilon(1e-15));
}

TEST_CASE("analytic total charges") {
  AnalyticDensity g{{{AnalyticTerm::Kind::gaussian_s, Vec3(1, 2, 3), 0.7, 1.0}}};
  CHECK(total_charge(g) == 1.0);
  CHECK(total_charge(gaussian_pair()) == 2.0);
  AnalyticDensity s{{{AnalyticTerm::Kind::slater_s, Vec3::Zero(), 1.7, 3.5}}};
  CHECK(total_charge(s) == 3.5);
  // quadrature cross-check of the Slater normalization
  const auto rad = grid::build_radial(400, 60.0);
  double q = 0.0;
  for (int i = 0; i < rad.size(); ++i)
    q += 4 * pi * rad.weights[i] * rad.nodes[i] * rad.nodes[i] *
         s.terms[0].value(Vec3(0, 0, rad.nodes[i]));
  CHECK(q == Approx(3.5).epsilon(1e-12));
}

TEST_CASE("analytic densities are nonnegative") {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-10, 10);
  AnalyticDensity d = gaussian_pair();
  d.terms.push_back({AnalyticTerm::Kind::slater_s, Vec3(1, 1, 1), 3.0, 0.5});
  for (int i = 0; i < 10000; ++i)
    REQUIRE(eval_density(d, Vec3(u(gen), u(gen), u(gen))) >= 0.0);
}

TEST_CASE("validation rejects malformed inputs") {
  AnalyticDensity bad{{{AnalyticTerm::Kind::gaussian_s, Vec3::Zero(), -1.0, 1.0}}};
  CHECK_THROWS_AS(validate(bad), ValidationError);
  AnalyticDensity neg{{{AnalyticTerm::Kind::gaussian_s, Vec3::Zero(), 1.0, -1.0}}};
  CHECK_THROWS_AS(validate(neg), ValidationError);
  CHECK_THROWS_AS(PrimitiveGaussian::make(Vec3::Zero(), 1, 2, 1.0), ValidationError);
  CHECK_THROWS_AS(PrimitiveGaussian::make(Vec3::Zero(), 0, 0, 0.0), ValidationError);
  GtoDensity d;
  d.primitives.push_back(PrimitiveGaussian::make(Vec3::Zero(), 0, 0, 1.0));
  d.P = Mat::Identity(2, 2);
  CHECK_THROWS_AS(validate(d), ValidationError);
  auto t = testutil::synthetic_gto();
  t.P(0, 1) += 0.1;
  CHECK_THROWS_AS(validate(t), ValidationError);
  Atom atom{"X", 0, Vec3::Zero()};
  CHECK_THROWS_AS(validate(atom), ValidationError);
}

TEST_CASE("primitives are L2-normalized") {
  for (int l = 0; l <= 3; ++l)
    for (int m = -l; m <= l; ++m) {
      const auto p = PrimitiveGaussian::make(Vec3(0.1, 0.2, 0.3), l, m, 1.3);
      CHECK(overlap(p, p) == Approx(1.0).epsilon(1e-13));
      const double q = testutil::box_integrate(
          [&](const Vec3 &r) { return p.value(r) * p.value(r); },
          p.center, 6.0, 80);
      CHECK(q == Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("GTO total charge matches quadrature") {
  const auto d = testutil::synthetic_gto();
  CHECK(total_charge(d) == Approx(2.0).epsilon(1e-14));
  const double q = testutil::box_integrate(
      [&](const Vec3 &r) { return eval_density(d, r); }, Vec3(0.15, -0.1, 0.7),
      9.0, 100);
  CHECK(q == Approx(total_charge(d)).epsilon(1e-6));
}

TEST_CASE("GTO density is clamped at zero") {
  // chi_0 chi_0 - chi_1 chi_1 with equal functions is zero up to round-off
  GtoDensity d;
  d.primitives.push_back(PrimitiveGaussian::make(Vec3::Zero(), 0, 0, 1.0));
  d.primitives.push_back(PrimitiveGaussian::make(Vec3::Zero(), 0, 0, 1.0));
  d.P = Mat::Zero(2, 2);
  d.P(0, 0) = 1.0;
  d.P(1, 1) = -1.0;
  CHECK(eval_density(d, Vec3(0.3, 0.1, 0.0)) == 0.0);
}

TEST_CASE("contracted shells expand to primitive matrices") {
  SECTION("identity contraction leaves P unchanged") {
    ContractedShell s{0, Vec3::Zero(), 0, {1.2}, {1.0}};
    Mat P(1, 1);
    P << 0.8;
    const auto d = to_primitive_matrix(std::span(&s, 1), P);
    REQUIRE(d.P.rows() == 1);
    CHECK(d.P(0, 0) == Approx(0.8));
  }
  SECTION("two-primitive s shell gives the c_i c_j block") {
    ContractedShell s{0, Vec3::Zero(), 0, {3.0, 0.5}, {0.4, 0.7}};
    Mat P(1, 1);
    P << 1.0;
    const auto d = to_primitive_matrix(std::span(&s, 1), P);
    REQUIRE(d.P.rows() == 2);
    CHECK(d.P(0, 0) == Approx(0.16));
    CHECK(d.P(0, 1) == Approx(0.28));
    CHECK(d.P(1, 1) == Approx(0.49));
    for (const Vec3 r : {Vec3(0, 0, 0), Vec3(0.3, 0.1, -0.2), Vec3(1, 1, 1)}) {
      const double chi = 0.4 * d.primitives[0].value(r) + 0.7 * d.primitives[1].value(r);
      CHECK(eval_density(d, r) == Approx(chi * chi).epsilon(1e-14));
    }
  }
  SECTION("zero matrix stays zero") {
    std::vector<ContractedShell> s{{0, Vec3::Zero(), 1, {1.0, 0.3}, {0.5, 0.5}}};
    const auto d = to_primitive_matrix(s, Mat::Zero(3, 3));
    CHECK(d.P.rows() == 6);
    CHECK(d.P.cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("dimension mismatch is rejected") {
    std::vector<ContractedShell> s{{0, Vec3::Zero(), 1, {1.0}, {1.0}}};
    CHECK(contracted_count(s) == 3);
    CHECK_THROWS_AS(to_primitive_matrix(s, Mat::Zero(2, 2)), ValidationError);
  }
}

TEST_CASE("Gaussian product centers") {
  const auto a = PrimitiveGaussian::make(Vec3::Zero(), 0, 0, 1.0);
  const auto b = PrimitiveGaussian::make(Vec3(0, 0, 1), 0, 0, 3.0);
  const auto t = product_center(a, b);
  CHECK(t.center.isApprox(Vec3(0, 0, 0.75)));
  CHECK(t.prefactor == Approx(std::exp(-0.75)));
  CHECK(t.exponent == 4.0);

  const auto c = PrimitiveGaussian::make(Vec3(2, 0, 0), 0, 0, 1.0);
  CHECK(product_center(a, c).center.isApprox(Vec3(1, 0, 0)));
  const auto same = product_center(a, a);
  CHECK(same.prefactor == 1.0);
  CHECK(same.center == a.center);

  // exp(-a|r-A|^2) exp(-b|r-B|^2) = K exp(-(a+b)|r-P|^2)
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> u(-3, 3);
  const auto p = PrimitiveGaussian::make(Vec3(0.2, -0.5, 0.1), 2, 1, 0.8);
  const auto q = PrimitiveGaussian::make(Vec3(-1.0, 0.4, 1.2), 1, -1, 1.7);
  const auto pq = product_center(p, q);
  for (int i = 0; i < 100; ++i) {
    const Vec3 r(u(gen), u(gen), u(gen));
    const double lhs = std::exp(-p.exponent * (r - p.center).squaredNorm()) *
                       std::exp(-q.exponent * (r - q.center).squaredNorm());
    const double rhs =
        pq.prefactor * std::exp(-pq.exponent * (r - pq.center).squaredNorm());
    CHECK(lhs == Approx(rhs).epsilon(1e-12));
  }
  CHECK(gauss(1.0, Vec3::Zero()) == Approx(std::pow(pi, -1.5)));
}
