#include "lebedev_data.h"
#include <aimkit/grid.h>
#include <algorithm>
#include <cmath>
#include <fmt/core.h>

namespace aimkit::grid {

void gauss_legendre(int n, std::vector<double> &nodes,
                    std::vector<double> &weights) {
  if (n < 1)
    throw ValidationError("Gauss-Legendre rule needs at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1)
      p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    nodes[n / 2] = 0.0;
}

RadialGrid build_radial(int n, double rmax, RadialKind kind) {
  if (n < 2)
    throw ValidationError(fmt::format("radial grid needs n >= 2 (got {})", n));
  if (!(rmax > 0.0) || !std::isfinite(rmax))
    throw ValidationError("radial grid needs rmax > 0");
  std::vector<double> t, w;
  gauss_legendre(n, t, w);
  RadialGrid g;
  g.rmax = rmax;
  g.kind = kind;
  g.nodes.resize(n);
  g.weights.resize(n);
  const double e1 = std::exp(1.0) - 1.0;
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (t[i] + 1.0); // [0, 1]
    const double ws = 0.5 * w[i];
    if (kind == RadialKind::gauss_legendre) {
      g.nodes[i] = rmax * s;
      g.weights[i] = rmax * ws;
    } else {
      g.nodes[i] = rmax * (std::exp(s) - 1.0) / e1;
      g.weights[i] = ws * rmax * std::exp(s) / e1;
    }
  }
  return g;
}

std::vector<int> lebedev_orders() {
  std::vector<int> out;
  for (int k = 0; k < detail::lebedev_table_count; ++k)
    out.push_back(detail::lebedev_tables[k].npoints);
  return out;
}

AngularGrid build_angular(int order, AngularKind kind) {
  AngularGrid g;
  g.kind = kind;
  g.order = order;
  if (kind == AngularKind::axial) {
    if (order < 1)
      throw ValidationError("axial angular grid needs at least one point");
    std::vector<double> x, w;
    gauss_legendre(order, x, w);
    for (int j = 0; j < order; ++j) {
      const double ct = x[j];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      g.points.emplace_back(st, 0.0, ct);
      g.weights.push_back(0.5 * w[j]);
    }
    g.degree = 2 * order - 1;
    return g;
  }
  for (int k = 0; k < detail::lebedev_table_count; ++k) {
    const auto &table = detail::lebedev_tables[k];
    if (table.npoints != order)
      continue;
    for (int j = 0; j < order; ++j) {
      const double *p = table.data + 4 * j;
      g.points.emplace_back(p[0], p[1], p[2]);
      g.weights.push_back(p[3]);
    }
    g.degree = table.degree;
    return g;
  }
  std::string supported;
  for (int n : lebedev_orders())
    supported += fmt::format(" {}", n);
  throw ValidationError(fmt::format(
      "unsupported Lebedev order {} (supported:{})", order, supported));
}

double spherical_average(const AngularGrid &grid, std::span<const double> f) {
  if (static_cast<int>(f.size()) != grid.size())
    throw ValidationError(fmt::format(
        "spherical_average: {} values for {} angular nodes", f.size(),
        grid.size()));
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    sum += grid.weights[j] * f[j];
  return sum;
}

double interpolate_radial(std::span<const double> nodes,
                          std::span<const double> values, double rmax,
                          double r) {
  const std::size_t n = nodes.size();
  if (n == 0 || r > rmax)
    return 0.0;
  if (r <= nodes[0])
    return values[0];
  if (r >= nodes[n - 1])
    return values[n - 1];
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  const std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
  const std::size_t lo = hi - 1;
  const double t = (r - nodes[lo]) / (nodes[hi] - nodes[lo]);
  return values[lo] + t * (values[hi] - values[lo]);
}

double interpolate_radial(const RadialGrid &grid,
                          std::span<const double> values, double r) {
  return interpolate_radial(grid.nodes, values, grid.rmax, r);
}

const AtomGridSpec &GridSpec::for_atom(int a) const {
  if (auto it = per_atom.find(a); it != per_atom.end())
    return it->second;
  return base;
}

AtomicGridSet::AtomicGridSet(std::span<const Atom> atoms,
                             const DensityModel &density, const GridSpec &spec)
    : spec_(spec) {
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const auto &s = spec.for_atom(static_cast<int>(a));
    if (s.angular == AngularKind::axial &&
        atoms[a].position.head<2>().cwiseAbs().maxCoeff() > 1e-12)
      throw ValidationError(fmt::format(
          "axial grids need every atom on the z axis (atom {} is not)", a));
    AtomGrid g;
    g.center = atoms[a].position;
    g.radial = build_radial(s.nr, s.rmax, s.radial);
    g.angular = build_angular(s.order, s.angular);
    g.samples.resize(g.npoints());
    const int nr = g.radial.size(), ns = g.angular.size();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < ns; ++j)
        g.samples[i * ns + j] = eval_density(density, g.point(i, j));
    grids_.push_back(std::move(g));
  }
}

double AtomicGridSet::max_sample() const {
  double m = 0.0;
  for (const auto &g : grids_)
    for (double v : g.samples)
      m = std::max(m, v);
  return m;
}

std::vector<double> shell_averages(const AtomicGridSet &grids, int a,
                                   std::span<const double> f) {
  const auto &g = grids.atom(a);
  const int nr = g.radial.size(), ns = g.angular.size();
  if (static_cast<int>(f.size()) != nr * ns)
    throw ValidationError(fmt::format(
        "atom {}: {} samples for a {}x{} grid", a, f.size(), nr, ns));
  std::vector<double> avg(nr);
  for (int i = 0; i < nr; ++i)
    avg[i] = spherical_average(g.angular, f.subspan(i * ns, ns));
  return avg;
}

double integrate_atom(const AtomicGridSet &grids, int a,
                      std::span<const double> f) {
  const auto &g = grids.atom(a);
  const auto avg = shell_averages(grids, a, f);
  double sum = 0.0;
  for (int i = 0; i < g.radial.size(); ++i)
    sum += g.radial.weights[i] * g.radial.nodes[i] * g.radial.nodes[i] * avg[i];
  return 4.0 * pi * sum;
}

} // namespace aimkit::grid
