#include <aimkit/kernels.h>
#include <fmt/core.h>
#include <limits>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace aimkit::kernels {

namespace {

inline double promol_at(const grid::AtomicGridSet &grids, int a,
                        std::span<const ProAtomModel> pro, double own,
                        const Vec3 &point) {
  double sum = 0.0;
  for (int b = 0; b < grids.atom_count(); ++b) {
    if (b == a)
      sum += own;
    else
      sum += evaluate(pro[b], (point - grids.atom(b).center).norm());
  }
  return sum;
}

void check(const grid::AtomicGridSet &grids, int a,
           std::span<const ProAtomModel> pro, std::size_t size) {
  if (static_cast<int>(pro.size()) != grids.atom_count())
    throw ValidationError(fmt::format("{} pro-atoms for {} atoms", pro.size(),
                                      grids.atom_count()));
  if (static_cast<int>(size) != grids.atom(a).npoints())
    throw ValidationError("output buffer does not match the atom grid");
}

} // namespace

void promolecule(const grid::AtomicGridSet &grids, int a,
                 std::span<const ProAtomModel> pro, std::span<double> out,
                 Exec exec) {
  check(grids, a, pro, out.size());
  const auto &g = grids.atom(a);
  const int nr = g.radial.size(), ns = g.angular.size();
  if (exec == Exec::serial) {
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < ns; ++j) {
        const double own = evaluate(pro[a], g.radial.nodes[i]);
        out[i * ns + j] = promol_at(grids, a, pro, own, g.point(i, j));
      }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nr; ++i) {
    const double own = evaluate(pro[a], g.radial.nodes[i]);
    for (int j = 0; j < ns; ++j)
      out[i * ns + j] = promol_at(grids, a, pro, own, g.point(i, j));
  }
}

double stockholder_share(const grid::AtomicGridSet &grids, int a,
                         std::span<const ProAtomModel> pro,
                         std::span<double> share, Exec exec,
                         std::span<double> ratio) {
  check(grids, a, pro, share.size());
  const bool keep_ratio = !ratio.empty();
  if (keep_ratio && ratio.size() != share.size())
    throw ValidationError("ratio buffer does not match the atom grid");
  const auto &g = grids.atom(a);
  const int nr = g.radial.size(), ns = g.angular.size();
  std::vector<double> lost(g.npoints(), 0.0);
  auto shell = [&](int i) {
    const double own = evaluate(pro[a], g.radial.nodes[i]);
    for (int j = 0; j < ns; ++j) {
      const int k = i * ns + j;
      const double rho = g.samples[k];
      const double den = promol_at(grids, a, pro, own, g.point(i, j));
      // a subnormal promolecule would overflow rho / den
      if (den >= std::numeric_limits<double>::min()) {
        const double t = rho / den;
        share[k] = den == own ? rho : own * t;
        if (keep_ratio)
          ratio[k] = t;
      } else {
        share[k] = 0.0;
        if (keep_ratio)
          ratio[k] = 0.0;
        if (rho > density_clamp)
          lost[k] = rho;
      }
    }
  };
  if (exec == Exec::serial) {
    for (int i = 0; i < nr; ++i)
      shell(i);
  } else {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nr; ++i)
      shell(i);
  }
  return grid::integrate_atom(grids, a, lost);
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

} // namespace aimkit::kernels
