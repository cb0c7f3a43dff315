#include <aimkit/grid.h>
#include <aimkit/harmonics.h>
#include <catch2/catch_amalgamated.hpp>
#include <random>

using namespace aimkit;
using namespace aimkit::grid;
using Catch::Approx;

namespace {

double radial_integral(const RadialGrid &g, const std::function<double(double)> &f) {
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i)
    s += g.weights[i] * f(g.nodes[i]);
  return s;
}

double zeta(double a, double r) { return std::pow(a / pi, 1.5) * std::exp(-a * r * r); }

} // namespace

TEST_CASE("Gauss-Legendre radial exactness") {
  const auto g1 = build_radial(4, 1.0);
  CHECK(radial_integral(g1, [](double) { return 1.0; }) == Approx(1.0).epsilon(1e-15));
  const auto g2 = build_radial(4, 2.0);
  CHECK(radial_integral(g2, [](double r) { return r * r * r; }) ==
        Approx(4.0).epsilon(1e-14));
  CHECK(radial_integral(g2, [](double r) { return std::pow(r, 7); }) ==
        Approx(32.0).epsilon(1e-14));
  for (int i = 1; i < g2.size(); ++i)
    CHECK(g2.nodes[i] > g2.nodes[i - 1]);
  CHECK(g2.nodes.front() > 0.0);
  CHECK(g2.nodes.back() < 2.0);
}

TEST_CASE("radial grids integrate a normalized Gaussian") {
  for (double a : {0.1, 1.0, 7.0}) {
    const auto g = build_radial(100, 10.0 / std::sqrt(a));
    CHECK(radial_integral(g, [&](double r) { return 4 * pi * r * r * zeta(a, r); }) ==
          Approx(1.0).epsilon(1e-10));
  }
  const auto lg = build_radial(200, 12.0, RadialKind::log);
  CHECK(lg.kind == RadialKind::log);
  CHECK(radial_integral(lg, [](double) { return 1.0; }) == Approx(12.0).epsilon(1e-12));
  CHECK(radial_integral(lg, [&](double r) { return 4 * pi * r * r * zeta(1.0, r); }) ==
        Approx(1.0).epsilon(1e-10));
}

TEST_CASE("invalid radial and angular requests") {
  CHECK_THROWS_AS(build_radial(1, 1.0), ValidationError);
  CHECK_THROWS_AS(build_radial(10, 0.0), ValidationError);
  CHECK_THROWS_AS(build_angular(7), ValidationError);
  CHECK_THROWS_AS(build_angular(0, AngularKind::axial), ValidationError);
}

TEST_CASE("Lebedev rules: weights, unit vectors and exactness") {
  for (int order : lebedev_orders()) {
    const auto g = build_angular(order);
    REQUIRE(g.size() == order);
    double wsum = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      wsum += g.weights[j];
      REQUIRE(g.points[j].norm() == Approx(1.0).epsilon(1e-14));
    }
    CHECK(wsum == Approx(1.0).epsilon(1e-13));
    const int lmax = g.degree;
    std::vector<double> y(harmonics::block_size(lmax));
    std::vector<double> mean(y.size(), 0.0);
    for (int j = 0; j < g.size(); ++j) {
      harmonics::real_solid_harmonics(lmax, g.points[j], y);
      for (std::size_t k = 0; k < y.size(); ++k)
        mean[k] += g.weights[j] * y[k];
    }
    CHECK(mean[0] == Approx(1.0 / std::sqrt(4 * pi)).epsilon(1e-13));
    double worst = 0.0;
    for (std::size_t k = 1; k < y.size(); ++k)
      worst = std::max(worst, std::abs(mean[k]));
    INFO("order " << order << " degree " << lmax);
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("spherical averages") {
  const auto leb = build_angular(110);
  std::vector<double> f(leb.size());

  for (auto &v : f)
    v = 2.5;
  CHECK(spherical_average(leb, f) == Approx(2.5).epsilon(1e-14));

  for (int j = 0; j < leb.size(); ++j)
    f[j] = leb.points[j].z();
  CHECK(std::abs(spherical_average(leb, f)) < 1e-15);

  for (int j = 0; j < leb.size(); ++j)
    f[j] = 0.5 * (3 * std::pow(leb.points[j].z(), 2) - 1);
  CHECK(std::abs(spherical_average(leb, f)) < 1e-13);

  std::vector<double> g(leb.size()), h(leb.size());
  for (int j = 0; j < leb.size(); ++j) {
    g[j] = std::exp(leb.points[j].x());
    h[j] = 1.0 / (2.0 + leb.points[j].y());
    f[j] = 2.0 * g[j] - 3.0 * h[j];
  }
  CHECK(spherical_average(leb, f) ==
        Approx(2.0 * spherical_average(leb, g) - 3.0 * spherical_average(leb, h))
            .epsilon(1e-14));

  std::vector<double> short_f(3);
  CHECK_THROWS_AS(spherical_average(leb, short_f), ValidationError);
}

TEST_CASE("off-center Gaussian average has the sinh closed form") {
  const double a = 0.8, r = 1.3, d = 0.9;
  const double x = 2 * a * r * d;
  const double exact = std::exp(-a * (r * r + d * d)) * std::sinh(x) / x;
  const auto leb = build_angular(590);
  const auto ax = build_angular(40, AngularKind::axial);
  auto avg = [&](const AngularGrid &g) {
    std::vector<double> f(g.size());
    for (int j = 0; j < g.size(); ++j)
      f[j] = std::exp(-a * (r * g.points[j] - Vec3(0, 0, d)).squaredNorm());
    return spherical_average(g, f);
  };
  CHECK(avg(leb) == Approx(exact).epsilon(1e-12));
  CHECK(avg(ax) == Approx(exact).epsilon(1e-12));
  CHECK(std::abs(avg(leb) - avg(ax)) < 1e-10);
}

TEST_CASE("radial interpolation") {
  const std::vector<double> nodes{0.5, 1.0, 2.0, 4.0};
  const std::vector<double> vals{3.0, 2.0, 1.0, 0.5};
  const double rmax = 5.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    CHECK(interpolate_radial(nodes, vals, rmax, nodes[i]) == vals[i]);
  CHECK(interpolate_radial(nodes, vals, rmax, 1.5) == Approx(1.5));
  CHECK(interpolate_radial(nodes, vals, rmax, 0.1) == 3.0);
  CHECK(interpolate_radial(nodes, vals, rmax, 4.5) == 0.5);
  CHECK(interpolate_radial(nodes, vals, rmax, 5.0001) == 0.0);
}

TEST_CASE("atomic grid integration") {
  std::vector<Atom> atoms{{"H", 1, Vec3::Zero()}};
  AnalyticDensity d{{{AnalyticTerm::Kind::gaussian_s, Vec3::Zero(), 1.2, 1.0}}};
  GridSpec spec;
  spec.base.nr = 120;
  spec.base.rmax = 12.0;
  spec.base.order = 50;
  const AtomicGridSet grids(atoms, d, spec);
  CHECK(grids.atom(0).samples.size() == 120u * 50u);
  CHECK(integrate_atom(grids, 0, grids.samples(0)) == Approx(1.0).epsilon(1e-8));
  std::vector<double> zero(grids.samples(0).size(), 0.0);
  CHECK(integrate_atom(grids, 0, zero) == 0.0);
  std::vector<double> wrong(5);
  CHECK_THROWS_AS(integrate_atom(grids, 0, wrong), ValidationError);
  const auto avg = shell_averages(grids, 0, grids.samples(0));
  for (int i = 0; i < 120; i += 17)
    CHECK(avg[i] == Approx(zeta(1.2, grids.atom(0).radial.nodes[i])).epsilon(1e-12));
}

TEST_CASE("per-atom grid overrides and axial validation") {
  std::vector<Atom> atoms{{"H", 1, Vec3::Zero()}, {"H", 1, Vec3(0, 0, 1.4)}};
  AnalyticDensity d{{{AnalyticTerm::Kind::gaussian_s, Vec3::Zero(), 1.0, 1.0}}};
  GridSpec spec;
  spec.base.nr = 40;
  spec.base.order = 26;
  spec.per_atom[1] = spec.base;
  spec.per_atom[1].nr = 60;
  const AtomicGridSet grids(atoms, d, spec);
  CHECK(grids.atom(0).radial.size() == 40);
  CHECK(grids.atom(1).radial.size() == 60);

  spec.base.angular = AngularKind::axial;
  spec.base.order = 20;
  spec.per_atom.clear();
  CHECK_NOTHROW(AtomicGridSet(atoms, d, spec));
  atoms[1].position = Vec3(0.1, 0, 1.4);
  CHECK_THROWS_AS(AtomicGridSet(atoms, d, spec), ValidationError);
}
