#pragma once
#include <aimkit/core.h>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace aimkit {

struct Atom {
  std::string symbol;
  int Z{1};
  Vec3 position{Vec3::Zero()}; // bohr
};

void validate(const Atom &atom);

/// chi(r) = norm * R_l^m(r - center) * exp(-exponent |r - center|^2), with
/// R_l^m the real solid harmonic; norm makes chi L2-normalized.
struct PrimitiveGaussian {
  Vec3 center{Vec3::Zero()};
  int l{0};
  int m{0};
  double exponent{1.0};
  double norm{1.0};
  int atom{-1}; // owning atom index, -1 when not attached

  static PrimitiveGaussian make(const Vec3 &center, int l, int m,
                                double exponent, int atom = -1);
  double value(const Vec3 &r) const;
};

/// L2 normalization constant of |r|^l Y_l^m exp(-exponent r^2).
double primitive_norm(int l, double exponent);

/// rho(r) = sum_{mu,nu} P_{mu nu} chi_mu(r) chi_nu(r).
struct GtoDensity {
  std::vector<PrimitiveGaussian> primitives;
  Mat P;
};

struct AnalyticTerm {
  enum class Kind { gaussian_s, slater_s };
  Kind kind{Kind::gaussian_s};
  Vec3 center{Vec3::Zero()};
  double exponent{1.0};
  double coefficient{1.0};

  /// c (a/pi)^{3/2} exp(-a|r-C|^2)  or  c a^3/(8 pi) exp(-a|r-C|)
  double value(const Vec3 &r) const;
};

struct AnalyticDensity {
  std::vector<AnalyticTerm> terms;
};

using DensityModel = std::variant<AnalyticDensity, GtoDensity>;

void validate(const PrimitiveGaussian &p);
void validate(const GtoDensity &d);
void validate(const AnalyticDensity &d);
void validate(const DensityModel &d);

/// Values below this magnitude from the GTO quadratic form are treated as
/// round-off and clamped to zero.
inline constexpr double density_clamp = 1e-14;

double eval_density(const AnalyticDensity &d, const Vec3 &r);
double eval_density(const GtoDensity &d, const Vec3 &r);
double eval_density(const DensityModel &d, const Vec3 &r);

/// Exact integral of the density.
double total_charge(const AnalyticDensity &d);
double total_charge(const GtoDensity &d);
double total_charge(const DensityModel &d);

/// Overlap integral <chi_a | chi_b>.
double overlap(const PrimitiveGaussian &a, const PrimitiveGaussian &b);
Mat overlap_matrix(std::span<const PrimitiveGaussian> prims);

/// A contracted spherical shell: functions m = -l..l, each
/// sum_p coefficients[p] * chi(l, m, exponents[p]) with normalized primitives.
struct ContractedShell {
  int atom{-1};
  Vec3 center{Vec3::Zero()};
  int l{0};
  std::vector<double> exponents;
  std::vector<double> coefficients;
};

/// Number of contracted functions (sum of 2l+1 over shells).
int contracted_count(std::span<const ContractedShell> shells);

/// Primitive density matrix C^T P C; primitives ordered shell by shell,
/// primitive by primitive, m = -l..l.
GtoDensity to_primitive_matrix(std::span<const ContractedShell> shells,
                               const Mat &P_contracted);

/// Gaussian product chi_mu chi_nu expressed about its natural center:
///   K N_mu N_nu R_mu(u + offset_mu) R_nu(u + offset_nu) exp(-exponent |u|^2)
/// with u = r - center.
struct ProductTerm {
  int mu{0};
  int nu{0};
  Vec3 center{Vec3::Zero()};
  double exponent{0.0};
  double prefactor{1.0}; // K_{mu nu}
  int l_mu{0}, m_mu{0}, l_nu{0}, m_nu{0};
  Vec3 offset_mu{Vec3::Zero()}; // center - R_mu
  Vec3 offset_nu{Vec3::Zero()}; // center - R_nu
  double norm_product{1.0};
};

ProductTerm product_center(const PrimitiveGaussian &mu,
                           const PrimitiveGaussian &nu, int mu_index = 0,
                           int nu_index = 0);

} // namespace aimkit
