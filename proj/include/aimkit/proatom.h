#pragma once
#include <aimkit/core.h>
#include <aimkit/grid.h>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace aimkit {

/// Radial function known at nodes; interpolated piecewise-linearly, zero
/// beyond rmax.
struct Tabulated {
  std::vector<double> nodes;
  std::vector<double> values;
  double rmax{0.0};
};

/// sum_k c_k (a_k/pi)^{3/2} exp(-a_k r^2)
struct GaussianExpansion {
  std::vector<double> exponents;
  std::vector<double> coefficients;
};

/// sum_k c_k a_k^3/(8 pi) exp(-a_k r)
struct SlaterShells {
  std::vector<double> exponents;
  std::vector<double> coefficients;
};

using ProAtomModel = std::variant<Tabulated, GaussianExpansion, SlaterShells>;

void validate(const Tabulated &t);
void validate(const GaussianExpansion &g);
void validate(const SlaterShells &s);
void validate(const ProAtomModel &p);

double evaluate(const Tabulated &t, double r);
double evaluate(const GaussianExpansion &g, double r);
double evaluate(const SlaterShells &s, double r);
double evaluate(const ProAtomModel &p, double r);

/// 4 pi int r^2 rho0(r) dr; exact for the interpolant of a Tabulated model.
double charge(const ProAtomModel &p);

/// Normalized shell functions.
inline double gaussian_shell(double exponent, double r) {
  return std::pow(exponent / pi, 1.5) * std::exp(-exponent * r * r);
}
inline double slater_shell(double exponent, double r) {
  return exponent * exponent * exponent / (8.0 * pi) * std::exp(-exponent * r);
}

/// Integer-charge reference densities rho0_{Z,n} of one element.
struct HirshfeldITable {
  int Z{1};
  std::map<int, Tabulated> by_n;

  int nmax() const;
};

/// Linear interpolation in the electron count between tables floor(n) and
/// ceil(n); saturates at nmax; a missing n = 0 entry is the zero density.
Tabulated hirshfeld_i_interpolate(double n, const HirshfeldITable &table);

struct ProAtomFile {
  int Z{1};
  int n{0};
  Tabulated table;
};

/// Text format: "# proatom Z=<int> n=<int>" then "<r> <value>" lines.
ProAtomFile read_proatom_file(const std::string &path);
void write_proatom_file(const std::string &path, const ProAtomFile &file);

/// n * a^3/(8 pi) exp(-a r) tabulated on `radial` for n = 0..nmax.
HirshfeldITable synthetic_slater_family(int Z, double exponent, int nmax,
                                        const grid::RadialGrid &radial);

} // namespace aimkit
