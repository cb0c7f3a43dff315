#pragma once
#include <aimkit/core.h>
#include <aimkit/density.h>
#include <aimkit/grid.h>
#include <aimkit/kernels.h>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace aimkit::dma {

/// I_q = Gamma((q + 1)/2) / 2 = int_0^inf u^q exp(-u^2) du.
double gamma_integral(int q);

/// Real multipoles Q_lm = int rho C_lm(r - center), flat_index order, with
/// C_lm the Racah-normalized real regular harmonics.
struct MultipoleSeries {
  Vec3 center{Vec3::Zero()};
  int lmax{0};
  std::vector<double> q;

  static MultipoleSeries zero(const Vec3 &center, int lmax);
  double at(int l, int m) const;
  double &at(int l, int m);
};

struct ComplexSeries {
  Vec3 center{Vec3::Zero()};
  int lmax{0};
  std::vector<std::complex<double>> q;

  std::complex<double> at(int l, int m) const;
};

ComplexSeries to_complex(const MultipoleSeries &s);
MultipoleSeries to_real(const ComplexSeries &s);

/// Multipoles of population * chi_mu chi_nu about its natural center.
/// Coefficients above l_mu + l_nu are exact zeros.
MultipoleSeries natural_multipoles(const ProductTerm &term, double population,
                                   int lmax);

/// Re-expansion about new_center; exact when lmax_out >= series.lmax.
ComplexSeries m2m_translate(const ComplexSeries &series,
                            const Vec3 &new_center, int lmax_out);
MultipoleSeries m2m_translate(const MultipoleSeries &series,
                              const Vec3 &new_center, int lmax_out);

enum class Strategy { stone, vigne_maeder };
std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string &name);

struct SiteSet {
  std::vector<Vec3> positions;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(positions.size()); }
};

void validate(const SiteSet &sites);

/// Coincidence and equidistance tolerance (bohr).
inline constexpr double site_tolerance = 1e-10;

std::vector<double> redistribution_weights(Strategy strategy,
                                           const Vec3 &natural_center,
                                           const SiteSet &sites);

/// One site per atom.
SiteSet atom_sites(std::span<const Atom> atoms);
/// Atom sites plus midpoints of pairs closer than 1.3 x the sum of covalent
/// radii.
SiteSet atom_and_bond_sites(std::span<const Atom> atoms);
/// Lines "<label> <x> <y> <z>"; coordinates multiplied by `scale`.
SiteSet read_site_file(const std::string &path, double scale = 1.0);

double covalent_radius(int Z); // bohr

struct DmaResult {
  std::vector<MultipoleSeries> sites;
  bool truncated{false}; // some pair carried l_mu + l_nu > lmax
  int max_pair_l{0};
  int pairs{0};
  int translated{0};
};

DmaResult run_dma(const GtoDensity &density, const SiteSet &sites,
                  Strategy strategy, int lmax,
                  kernels::Exec exec = kernels::Exec::parallel);

/// Natural-center series of every primitive pair (no redistribution).
std::vector<MultipoleSeries> natural_series(const GtoDensity &density,
                                            int lmax);

/// sum_j sum_lm Q_lm^j C_lm(u) / |u|^{2l+1}, u = point - S_j.
double esp_multipole(std::span<const MultipoleSeries> sites,
                     const Vec3 &point);

struct EspValue {
  double value{0.0};
  bool reliable{true}; // false inside the density (penetration region)
};

/// Quadrature of rho(r') / |r - r'| over the atomic grids, each grid point
/// owned by its nearest atom.
EspValue esp_exact(const DensityModel &density, const grid::AtomicGridSet &grids,
                   const Vec3 &point);

} // namespace aimkit::dma
