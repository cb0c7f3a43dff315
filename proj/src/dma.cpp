#include <aimkit/dma.h>
#include <aimkit/harmonics.h>
#include <aimkit/polynomial.h>
#include <array>
#include <cmath>
#include <fmt/core.h>
#include <fstream>
#include <sstream>

namespace aimkit::dma {

using harmonics::block_size;
using harmonics::flat_index;

double gamma_integral(int q) {
  if (q < 0)
    throw ValidationError("gamma_integral needs q >= 0");
  double v = (q % 2 == 0) ? 0.5 * std::sqrt(pi) : 0.5;
  for (int k = (q % 2 == 0) ? 2 : 3; k <= q; k += 2)
    v *= 0.5 * (k - 1);
  return v;
}

MultipoleSeries MultipoleSeries::zero(const Vec3 &center, int lmax) {
  MultipoleSeries s;
  s.center = center;
  s.lmax = lmax;
  s.q.assign(block_size(lmax), 0.0);
  return s;
}

double MultipoleSeries::at(int l, int m) const {
  return q.at(flat_index(l, m));
}

double &MultipoleSeries::at(int l, int m) { return q.at(flat_index(l, m)); }

std::complex<double> ComplexSeries::at(int l, int m) const {
  return q.at(flat_index(l, m));
}

ComplexSeries to_complex(const MultipoleSeries &s) {
  ComplexSeries c;
  c.center = s.center;
  c.lmax = s.lmax;
  c.q = harmonics::real_to_complex(s.q, s.lmax);
  return c;
}

MultipoleSeries to_real(const ComplexSeries &s) {
  MultipoleSeries r;
  r.center = s.center;
  r.lmax = s.lmax;
  r.q = harmonics::complex_to_real(s.q, s.lmax);
  return r;
}

MultipoleSeries natural_multipoles(const ProductTerm &term, double population,
                                   int lmax) {
  if (lmax < 0)
    throw ValidationError("lmax must be >= 0");
  auto out = MultipoleSeries::zero(term.center, lmax);
  const double scale = population * term.prefactor * term.norm_product;
  if (scale == 0.0)
    return out;
  const auto pmu = Polynomial3::real_solid_harmonic(term.l_mu, term.m_mu)
                       .shifted(term.offset_mu);
  const auto pnu = Polynomial3::real_solid_harmonic(term.l_nu, term.m_nu)
                       .shifted(term.offset_nu);
  const auto product = pmu * pnu;
  const int ltop = std::min(lmax, term.l_mu + term.l_nu);
  for (int l = 0; l <= ltop; ++l) {
    const double K = harmonics::multipole_factor(l);
    for (int m = -l; m <= l; ++m) {
      const auto &C = Polynomial3::real_solid_harmonic(l, m);
      out.at(l, m) = scale * K * (C * product).gaussian_integral(term.exponent);
    }
  }
  return out;
}

ComplexSeries m2m_translate(const ComplexSeries &series,
                            const Vec3 &new_center, int lmax_out) {
  if (lmax_out < 0)
    throw ValidationError("lmax must be >= 0");
  ComplexSeries out;
  out.center = new_center;
  out.lmax = lmax_out;
  out.q.assign(block_size(lmax_out), 0.0);
  const Vec3 d = series.center - new_center;
  std::vector<std::complex<double>> C(block_size(lmax_out));
  harmonics::regular_complex(lmax_out, d, C);
  for (int l = 0; l <= lmax_out; ++l)
    for (int m = -l; m <= l; ++m) {
      std::complex<double> sum = 0.0;
      for (int lp = 0; lp <= std::min(l, series.lmax); ++lp)
        for (int mp = -lp; mp <= lp; ++mp) {
          const int dl = l - lp, dm = m - mp;
          if (std::abs(dm) > dl)
            continue;
          const double c = std::sqrt(harmonics::binomial(l + m, lp + mp) *
                                     harmonics::binomial(l - m, lp - mp));
          sum += c * C[flat_index(dl, dm)] * series.q[flat_index(lp, mp)];
        }
      out.q[flat_index(l, m)] = sum;
    }
  return out;
}

MultipoleSeries m2m_translate(const MultipoleSeries &series,
                              const Vec3 &new_center, int lmax_out) {
  return to_real(m2m_translate(to_complex(series), new_center, lmax_out));
}

std::string to_string(Strategy s) {
  return s == Strategy::stone ? "stone" : "vigne-maeder";
}

Strategy strategy_from_string(const std::string &name) {
  if (name == "stone")
    return Strategy::stone;
  if (name == "vigne-maeder" || name == "vigne_maeder")
    return Strategy::vigne_maeder;
  throw ValidationError(fmt::format("unknown redistribution strategy '{}'", name));
}

void validate(const SiteSet &sites) {
  if (sites.positions.empty())
    throw ValidationError("site set is empty");
  if (sites.labels.size() != sites.positions.size())
    throw ValidationError("site labels and positions differ in count");
  for (int i = 0; i < sites.size(); ++i) {
    if (!sites.positions[i].allFinite())
      throw ValidationError(fmt::format("site {} is not finite", i));
    for (int j = 0; j < i; ++j)
      if ((sites.positions[i] - sites.positions[j]).norm() <= site_tolerance)
        throw ValidationError(
            fmt::format("sites {} and {} coincide", sites.labels[j],
                        sites.labels[i]));
  }
}

std::vector<double> redistribution_weights(Strategy strategy,
                                           const Vec3 &natural_center,
                                           const SiteSet &sites) {
  const int n = sites.size();
  if (n == 0)
    throw ValidationError("site set is empty");
  std::vector<double> dist(n), w(n, 0.0);
  for (int j = 0; j < n; ++j)
    dist[j] = (sites.positions[j] - natural_center).norm();
  for (int j = 0; j < n; ++j)
    if (dist[j] <= site_tolerance) {
      w[j] = 1.0;
      return w;
    }
  if (strategy == Strategy::stone) {
    const double dmin = *std::min_element(dist.begin(), dist.end());
    int q = 0;
    for (int j = 0; j < n; ++j)
      q += dist[j] - dmin <= site_tolerance;
    for (int j = 0; j < n; ++j)
      if (dist[j] - dmin <= site_tolerance)
        w[j] = 1.0 / q;
    return w;
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j)
    total += 1.0 / dist[j];
  for (int j = 0; j < n; ++j)
    w[j] = (1.0 / dist[j]) / total;
  return w;
}

double covalent_radius(int Z) {
  // angstrom, Z = 1..54
  static const std::array<double, 54> radii = {
      0.31, 0.28, 1.28, 0.96, 0.84, 0.76, 0.71, 0.66, 0.57, 0.58, 1.66,
      1.41, 1.21, 1.11, 1.07, 1.05, 1.02, 1.06, 2.03, 1.76, 1.70, 1.60,
      1.53, 1.39, 1.39, 1.32, 1.26, 1.24, 1.32, 1.22, 1.22, 1.20, 1.19,
      1.20, 1.20, 1.16, 2.20, 1.95, 1.90, 1.75, 1.64, 1.54, 1.47, 1.46,
      1.42, 1.39, 1.45, 1.44, 1.42, 1.39, 1.39, 1.38, 1.39, 1.40};
  const double r = (Z >= 1 && Z <= 54) ? radii[Z - 1] : 1.50;
  return r * units::bohr_per_angstrom;
}

SiteSet atom_sites(std::span<const Atom> atoms) {
  SiteSet s;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    s.positions.push_back(atoms[a].position);
    s.labels.push_back(fmt::format("{}{}", atoms[a].symbol, a + 1));
  }
  return s;
}

SiteSet atom_and_bond_sites(std::span<const Atom> atoms) {
  SiteSet s = atom_sites(atoms);
  for (std::size_t a = 0; a < atoms.size(); ++a)
    for (std::size_t b = a + 1; b < atoms.size(); ++b) {
      const double d = (atoms[a].position - atoms[b].position).norm();
      if (d < 1.3 * (covalent_radius(atoms[a].Z) + covalent_radius(atoms[b].Z))) {
        s.positions.push_back(0.5 * (atoms[a].position + atoms[b].position));
        s.labels.push_back(fmt::format("bond{}-{}", a + 1, b + 1));
      }
    }
  return s;
}

SiteSet read_site_file(const std::string &path, double scale) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError(fmt::format("cannot open site file {}", path));
  SiteSet s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    std::istringstream ss(line);
    std::string label;
    double x, y, z;
    if (!(ss >> label >> x >> y >> z))
      throw ValidationError(
          fmt::format("{}:{}: expected '<label> <x> <y> <z>'", path, lineno));
    s.labels.push_back(label);
    s.positions.emplace_back(scale * x, scale * y, scale * z);
  }
  validate(s);
  return s;
}

namespace {

struct PairContribution {
  std::vector<std::pair<int, std::vector<double>>> terms;
  bool translated{false};
};

} // namespace

DmaResult run_dma(const GtoDensity &density, const SiteSet &sites,
                  Strategy strategy, int lmax, kernels::Exec exec) {
  validate(density);
  validate(sites);
  if (lmax < 0)
    throw ValidationError("lmax must be >= 0");
  DmaResult res;
  for (const auto &p : sites.positions)
    res.sites.push_back(MultipoleSeries::zero(p, lmax));

  const int n = static_cast<int>(density.primitives.size());
  std::vector<std::pair<int, int>> pairs;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = mu; nu < n; ++nu)
      if (density.P(mu, nu) != 0.0)
        pairs.emplace_back(mu, nu);
  res.pairs = static_cast<int>(pairs.size());
  for (const auto &[mu, nu] : pairs)
    res.max_pair_l = std::max(res.max_pair_l, density.primitives[mu].l +
                                                  density.primitives[nu].l);
  res.truncated = res.max_pair_l > lmax;

  auto map = [&](int k) {
    const auto [mu, nu] = pairs[k];
    const auto term = product_center(density.primitives[mu],
                                     density.primitives[nu], mu, nu);
    const double pop = (mu == nu ? 1.0 : 2.0) * density.P(mu, nu);
    const auto natural = natural_multipoles(term, pop, lmax);
    const auto w = redistribution_weights(strategy, term.center, sites);
    PairContribution out;
    ComplexSeries cnat;
    bool have_complex = false;
    for (int j = 0; j < sites.size(); ++j) {
      if (w[j] == 0.0)
        continue;
      std::vector<double> q;
      if ((sites.positions[j] - term.center).norm() <= site_tolerance) {
        q = natural.q;
      } else {
        if (!have_complex) {
          cnat = to_complex(natural);
          have_complex = true;
        }
        q = to_real(m2m_translate(cnat, sites.positions[j], lmax)).q;
        out.translated = true;
      }
      for (auto &v : q)
        v *= w[j];
      out.terms.emplace_back(j, std::move(q));
    }
    return out;
  };
  auto reduce = [&](PairContribution &&c) {
    res.translated += c.translated;
    for (auto &[j, q] : c.terms)
      for (std::size_t k = 0; k < q.size(); ++k)
        res.sites[j].q[k] += q[k];
  };
  kernels::ordered_map_reduce<PairContribution>(res.pairs, map, reduce, exec);
  return res;
}

std::vector<MultipoleSeries> natural_series(const GtoDensity &density,
                                            int lmax) {
  std::vector<MultipoleSeries> out;
  const int n = static_cast<int>(density.primitives.size());
  for (int mu = 0; mu < n; ++mu)
    for (int nu = mu; nu < n; ++nu) {
      if (density.P(mu, nu) == 0.0)
        continue;
      const auto term = product_center(density.primitives[mu],
                                       density.primitives[nu], mu, nu);
      out.push_back(natural_multipoles(
          term, (mu == nu ? 1.0 : 2.0) * density.P(mu, nu), lmax));
    }
  return out;
}

double esp_multipole(std::span<const MultipoleSeries> sites,
                     const Vec3 &point) {
  double v = 0.0;
  std::vector<double> C;
  for (const auto &s : sites) {
    const Vec3 u = point - s.center;
    const double r = u.norm();
    if (r <= site_tolerance)
      throw ValidationError("ESP point coincides with a multipole site");
    C.resize(block_size(s.lmax));
    harmonics::regular_real(s.lmax, u, C);
    const double r2 = r * r;
    double rpow = r; // |u|^{2l+1}
    for (int l = 0; l <= s.lmax; ++l) {
      double acc = 0.0;
      for (int m = -l; m <= l; ++m)
        acc += s.q[flat_index(l, m)] * C[flat_index(l, m)];
      v += acc / rpow;
      rpow *= r2;
    }
  }
  return v;
}

EspValue esp_exact(const DensityModel &density,
                   const grid::AtomicGridSet &grids, const Vec3 &point) {
  const int M = grids.atom_count();
  for (int a = 0; a < M; ++a)
    if (grids.atom(a).angular.kind == grid::AngularKind::axial)
      throw ValidationError("exact ESP needs full angular grids");
  EspValue out;
  for (int a = 0; a < M; ++a) {
    const auto &g = grids.atom(a);
    const int nr = g.radial.size(), ns = g.angular.size();
    double total = 0.0;
    for (int i = 0; i < nr; ++i) {
      const double r = g.radial.nodes[i];
      double shell = 0.0;
      for (int j = 0; j < ns; ++j) {
        const double rho = g.samples[i * ns + j];
        if (rho == 0.0)
          continue;
        const Vec3 x = g.point(i, j);
        const double own = (x - g.center).squaredNorm();
        bool owned = true;
        for (int b = 0; b < M && owned; ++b) {
          if (b == a)
            continue;
          const double other = (x - grids.atom(b).center).squaredNorm();
          owned = b < a ? own < other : own <= other;
        }
        if (!owned)
          continue;
        const double d = (x - point).norm();
        if (d < 1e-12)
          continue;
        shell += g.angular.weights[j] * rho / d;
      }
      total += 4.0 * pi * g.radial.weights[i] * r * r * shell;
    }
    out.value += total;
  }
  out.reliable = eval_density(density, point) <= 1e-8;
  return out;
}

} // namespace aimkit::dma
