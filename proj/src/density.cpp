#include <aimkit/density.h>
#include <aimkit/harmonics.h>
#include <aimkit/polynomial.h>
#include <array>
#include <cmath>
#include <fmt/core.h>

namespace aimkit {

namespace {

bool finite(const Vec3 &v) { return v.allFinite(); }

} // namespace

void validate(const Atom &atom) {
  if (atom.Z < 1)
    throw ValidationError(
        fmt::format("atom {}: nuclear charge must be >= 1", atom.symbol));
  if (!finite(atom.position))
    throw ValidationError(
        fmt::format("atom {}: non-finite position", atom.symbol));
}

double primitive_norm(int l, double exponent) {
  // int |r|^{2l} e^{-2 a r^2} r^2 dr = Gamma(l + 3/2) / (2 (2a)^{l + 3/2})
  const double radial =
      std::tgamma(l + 1.5) / (2.0 * std::pow(2.0 * exponent, l + 1.5));
  return 1.0 / std::sqrt(radial);
}

PrimitiveGaussian PrimitiveGaussian::make(const Vec3 &center, int l, int m,
                                          double exponent, int atom) {
  PrimitiveGaussian p;
  p.center = center;
  p.l = l;
  p.m = m;
  p.exponent = exponent;
  p.atom = atom;
  validate(p);
  p.norm = primitive_norm(l, exponent);
  return p;
}

double PrimitiveGaussian::value(const Vec3 &r) const {
  const Vec3 d = r - center;
  std::array<double, harmonics::block_size(8)> buf;
  if (l > 8)
    return norm * harmonics::real_solid_harmonic(l, m, d) *
           std::exp(-exponent * d.squaredNorm());
  harmonics::real_solid_harmonics(l, d, buf);
  return norm * buf[harmonics::flat_index(l, m)] *
         std::exp(-exponent * d.squaredNorm());
}

double AnalyticTerm::value(const Vec3 &r) const {
  const double d2 = (r - center).squaredNorm();
  switch (kind) {
  case Kind::gaussian_s:
    return coefficient * std::pow(exponent / pi, 1.5) * std::exp(-exponent * d2);
  case Kind::slater_s:
    return coefficient * exponent * exponent * exponent / (8.0 * pi) *
           std::exp(-exponent * std::sqrt(d2));
  }
  return 0.0;
}

void validate(const PrimitiveGaussian &p) {
  if (!(p.exponent > 0.0) || !std::isfinite(p.exponent))
    throw ValidationError("primitive exponent must be > 0");
  if (p.l < 0 || std::abs(p.m) > p.l)
    throw ValidationError("primitive requires |m| <= l");
  if (!finite(p.center))
    throw ValidationError("primitive center must be finite");
}

void validate(const GtoDensity &d) {
  const auto n = static_cast<Eigen::Index>(d.primitives.size());
  if (d.P.rows() != n || d.P.cols() != n)
    throw ValidationError(fmt::format(
        "density matrix is {}x{} but there are {} primitives", d.P.rows(),
        d.P.cols(), n));
  const double scale = std::max(1.0, d.P.cwiseAbs().maxCoeff());
  if (n > 0 && (d.P - d.P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError("density matrix must be symmetric");
  for (const auto &p : d.primitives)
    validate(p);
}

void validate(const AnalyticDensity &d) {
  for (const auto &t : d.terms) {
    if (!(t.exponent > 0.0) || !std::isfinite(t.exponent))
      throw ValidationError("analytic term exponent must be > 0");
    if (!(t.coefficient >= 0.0) || !std::isfinite(t.coefficient))
      throw ValidationError("analytic term coefficient must be >= 0");
    if (!finite(t.center))
      throw ValidationError("analytic term center must be finite");
  }
}

void validate(const DensityModel &d) {
  std::visit([](const auto &x) { validate(x); }, d);
}

double eval_density(const AnalyticDensity &d, const Vec3 &r) {
  double sum = 0.0;
  for (const auto &t : d.terms)
    sum += t.value(r);
  return sum;
}

double eval_density(const GtoDensity &d, const Vec3 &r) {
  const auto n = static_cast<Eigen::Index>(d.primitives.size());
  Vec chi(n);
  for (Eigen::Index i = 0; i < n; ++i)
    chi[i] = d.primitives[i].value(r);
  const double value = chi.dot(d.P * chi);
  if (value < 0.0 && value > -density_clamp)
    return 0.0;
  return std::max(value, 0.0);
}

double eval_density(const DensityModel &d, const Vec3 &r) {
  return std::visit([&](const auto &x) { return eval_density(x, r); }, d);
}

double total_charge(const AnalyticDensity &d) {
  double sum = 0.0;
  for (const auto &t : d.terms)
    sum += t.coefficient;
  return sum;
}

double total_charge(const GtoDensity &d) {
  return (d.P.cwiseProduct(overlap_matrix(d.primitives))).sum();
}

double total_charge(const DensityModel &d) {
  return std::visit([](const auto &x) { return total_charge(x); }, d);
}

ProductTerm product_center(const PrimitiveGaussian &mu,
                           const PrimitiveGaussian &nu, int mu_index,
                           int nu_index) {
  ProductTerm t;
  t.mu = mu_index;
  t.nu = nu_index;
  t.exponent = mu.exponent + nu.exponent;
  t.center = (mu.exponent * mu.center + nu.exponent * nu.center) / t.exponent;
  const double reduced = mu.exponent * nu.exponent / t.exponent;
  t.prefactor = std::exp(-reduced * (mu.center - nu.center).squaredNorm());
  t.l_mu = mu.l;
  t.m_mu = mu.m;
  t.l_nu = nu.l;
  t.m_nu = nu.m;
  t.offset_mu = t.center - mu.center;
  t.offset_nu = t.center - nu.center;
  t.norm_product = mu.norm * nu.norm;
  return t;
}

double overlap(const PrimitiveGaussian &a, const PrimitiveGaussian &b) {
  const ProductTerm t = product_center(a, b);
  const auto pa = Polynomial3::real_solid_harmonic(a.l, a.m).shifted(t.offset_mu);
  const auto pb = Polynomial3::real_solid_harmonic(b.l, b.m).shifted(t.offset_nu);
  return t.norm_product * t.prefactor * (pa * pb).gaussian_integral(t.exponent);
}

Mat overlap_matrix(std::span<const PrimitiveGaussian> prims) {
  const auto n = static_cast<Eigen::Index>(prims.size());
  Mat S(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      S(i, j) = S(j, i) = overlap(prims[i], prims[j]);
  return S;
}

int contracted_count(std::span<const ContractedShell> shells) {
  int n = 0;
  for (const auto &s : shells)
    n += 2 * s.l + 1;
  return n;
}

GtoDensity to_primitive_matrix(std::span<const ContractedShell> shells,
                               const Mat &P_contracted) {
  const int ncontr = contracted_count(shells);
  if (P_contracted.rows() != ncontr || P_contracted.cols() != ncontr)
    throw ValidationError(fmt::format(
        "contracted density matrix is {}x{} but shells define {} functions",
        P_contracted.rows(), P_contracted.cols(), ncontr));
  GtoDensity out;
  std::vector<std::pair<int, double>> map; // primitive -> (contracted, coef)
  int contracted_offset = 0;
  for (const auto &s : shells) {
    if (s.l < 0)
      throw ValidationError("shell angular momentum must be >= 0");
    if (s.exponents.size() != s.coefficients.size() || s.exponents.empty())
      throw ValidationError(
          "shell exponents and coefficients must be nonempty and equal length");
    for (std::size_t p = 0; p < s.exponents.size(); ++p) {
      for (int m = -s.l; m <= s.l; ++m) {
        out.primitives.push_back(
            PrimitiveGaussian::make(s.center, s.l, m, s.exponents[p], s.atom));
        map.emplace_back(contracted_offset + m + s.l, s.coefficients[p]);
      }
    }
    contracted_offset += 2 * s.l + 1;
  }
  const auto nprim = static_cast<Eigen::Index>(out.primitives.size());
  Mat C = Mat::Zero(ncontr, nprim);
  for (Eigen::Index k = 0; k < nprim; ++k)
    C(map[k].first, k) = map[k].second;
  out.P = C.transpose() * P_contracted * C;
  return out;
}

} // namespace aimkit
