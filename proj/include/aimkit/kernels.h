#pragma once
#include <aimkit/grid.h>
#include <aimkit/proatom.h>
#include <span>
#include <vector>

namespace aimkit::kernels {

/// serial is the reference implementation; parallel uses OpenMP and must
/// reproduce it bit for bit.
enum class Exec { serial, parallel };

/// promol[i * ns + j] = sum_b rho0_b(|R_a + r_i s_j - R_b|) on atom a's grid.
void promolecule(const grid::AtomicGridSet &grids, int a,
                 std::span<const ProAtomModel> pro, std::span<double> out,
                 Exec exec);

/// Stockholder share of atom a: rho0_a(r_i) rho / promol, with 0/0 -> 0.
/// Optionally stores the ratio rho / promol. Returns the grid-integrated
/// density at points where promol vanishes.
double stockholder_share(const grid::AtomicGridSet &grids, int a,
                         std::span<const ProAtomModel> pro,
                         std::span<double> share, Exec exec,
                         std::span<double> ratio = {});

/// Calls reduce(map(i)) for i = 0..n-1 in index order. The parallel path
/// evaluates map over blocks concurrently and reduces each block serially,
/// so the reduction order never depends on the thread count.
template <class T, class Map, class Reduce>
void ordered_map_reduce(int n, Map &&map, Reduce &&reduce, Exec exec,
                        int block = 256) {
  if (exec == Exec::serial) {
    for (int i = 0; i < n; ++i)
      reduce(map(i));
    return;
  }
  std::vector<T> buffer(static_cast<std::size_t>(block));
  for (int start = 0; start < n; start += block) {
    const int count = std::min(block, n - start);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k)
      buffer[k] = map(start + k);
    for (int k = 0; k < count; ++k)
      reduce(std::move(buffer[k]));
  }
}

/// Number of OpenMP threads available (1 without OpenMP).
int thread_count();

} // namespace aimkit::kernels
