#pragma once
#include <aimkit/core.h>
#include <complex>
#include <span>
#include <vector>

/// Spherical and solid harmonics.
///
/// Conventions (version tag `conventions_version` below):
///  - Y_l^m are L2(S^2)-orthonormal.
///  - Complex harmonics carry the Condon-Shortley phase (-1)^m for m > 0 and
///    satisfy Y_l^{-m} = (-1)^m conj(Y_l^m).
///  - Real harmonics carry no Condon-Shortley phase:
///      m > 0: sqrt(2) N_lm P_l^m(cos t) cos(m phi)
///      m < 0: sqrt(2) N_l|m| P_l^|m|(cos t) sin(|m| phi)
///      m = 0: N_l0 P_l(cos t)
///    so that, for l <= 2,
///      R_1^{1} ~ x, R_1^{-1} ~ y, R_1^0 ~ z,
///      R_2^0 ~ (3z^2 - r^2)/2, R_2^{1} ~ sqrt(3) xz, R_2^{-1} ~ sqrt(3) yz,
///      R_2^2 ~ sqrt(3)/2 (x^2 - y^2), R_2^{-2} ~ sqrt(3) xy
///    where "~" means "times sqrt((2l+1)/4pi)".
///  - Regular ("Racah") solid harmonics C_l^m = sqrt(4pi/(2l+1)) |r|^l Y_l^m;
///    multipole moments use the same factor K_l = sqrt(4pi/(2l+1)) so that
///    Q_00 is the charge and (Q_11, Q_1-1, Q_10) the Cartesian dipole (x,y,z).
namespace aimkit::harmonics {

inline constexpr const char *conventions_version = "aimkit-conventions-1";

enum class Basis { real, complex };

struct HarmonicIndex {
  int l{0};
  int m{0};
  Basis basis{Basis::real};
};

/// Flat position of (l, m) in a block of all harmonics up to some lmax.
constexpr int flat_index(int l, int m) { return l * l + l + m; }
constexpr int block_size(int lmax) { return (lmax + 1) * (lmax + 1); }

/// Multipole normalization K_l = sqrt(4 pi / (2l + 1)).
double multipole_factor(int l);

/// |r|^l Y_l^m(r/|r|) with orthonormal real Y; a polynomial in (x, y, z).
double real_solid_harmonic(int l, int m, const Vec3 &r);
double real_solid_harmonic(const HarmonicIndex &idx, const Vec3 &r);

/// |r|^l Y_l^m(r/|r|) with orthonormal complex Y (Condon-Shortley phase).
std::complex<double> complex_solid_harmonic(int l, int m, const Vec3 &r);

/// All real solid harmonics up to lmax, in flat_index order.
void real_solid_harmonics(int lmax, const Vec3 &r, std::span<double> out);

/// All Racah-normalized real solid harmonics C_l^m up to lmax.
void regular_real(int lmax, const Vec3 &r, std::span<double> out);

/// All Racah-normalized complex solid harmonics C_l^m up to lmax.
void regular_complex(int lmax, const Vec3 &r,
                     std::span<std::complex<double>> out);

/// Real multipoles from complex ones (moments of a real density).
std::vector<double> complex_to_real(std::span<const std::complex<double>> q,
                                    int lmax);

/// Complex multipoles from real ones; inverse of complex_to_real.
std::vector<std::complex<double>> real_to_complex(std::span<const double> q,
                                                  int lmax);

/// Ratio of factorials sqrt((l-m)!/(l+m)!) * sqrt((2l+1)/(4 pi)).
double legendre_norm(int l, int m);

/// Binomial coefficient as double; zero outside 0 <= k <= n.
double binomial(int n, int k);

} // namespace aimkit::harmonics
