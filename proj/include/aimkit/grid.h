#pragma once
#include <aimkit/core.h>
#include <aimkit/density.h>
#include <map>
#include <span>
#include <vector>

namespace aimkit::grid {

enum class RadialKind { gauss_legendre, log };
enum class AngularKind { lebedev, axial };

/// Nodes and weights for int_0^rmax f(r) dr.
struct RadialGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double rmax{0.0};
  RadialKind kind{RadialKind::gauss_legendre};

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Unit vectors with weights summing to one (a mean over the sphere).
struct AngularGrid {
  std::vector<Vec3> points;
  std::vector<double> weights;
  AngularKind kind{AngularKind::lebedev};
  int order{0};  // number of points
  int degree{0}; // polynomial exactness (axial: only for axially symmetric f)

  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double> &nodes,
                    std::vector<double> &weights);

RadialGrid build_radial(int n, double rmax,
                        RadialKind kind = RadialKind::gauss_legendre);

AngularGrid build_angular(int order, AngularKind kind = AngularKind::lebedev);

/// Point counts of the embedded Lebedev rules.
std::vector<int> lebedev_orders();

double spherical_average(const AngularGrid &grid, std::span<const double> f);

/// Piecewise-linear interpolation; w(nodes[0]) below the first node,
/// w(nodes.back()) between the last node and rmax, zero beyond rmax.
double interpolate_radial(std::span<const double> nodes,
                          std::span<const double> values, double rmax,
                          double r);
double interpolate_radial(const RadialGrid &grid,
                          std::span<const double> values, double r);

struct AtomGridSpec {
  int nr{300};
  double rmax{15.0};
  RadialKind radial{RadialKind::gauss_legendre};
  AngularKind angular{AngularKind::lebedev};
  int order{170};

  bool operator==(const AtomGridSpec &) const = default;
};

struct GridSpec {
  AtomGridSpec base;
  std::map<int, AtomGridSpec> per_atom; // overrides by atom index

  const AtomGridSpec &for_atom(int a) const;
  bool operator==(const GridSpec &) const = default;
};

/// Per-atom tensor-product grids with cached density samples
/// rho(R_a + r_i sigma_j), stored row-major (radial index major).
class AtomicGridSet {
public:
  struct AtomGrid {
    Vec3 center;
    RadialGrid radial;
    AngularGrid angular;
    std::vector<double> samples;

    int npoints() const { return radial.size() * angular.size(); }
    Vec3 point(int i, int j) const {
      return center + radial.nodes[i] * angular.points[j];
    }
  };

  AtomicGridSet() = default;
  AtomicGridSet(std::span<const Atom> atoms, const DensityModel &density,
                const GridSpec &spec);

  int atom_count() const { return static_cast<int>(grids_.size()); }
  const AtomGrid &atom(int a) const { return grids_.at(a); }
  std::span<const double> samples(int a) const { return grids_.at(a).samples; }
  const GridSpec &spec() const { return spec_; }
  double max_sample() const;

private:
  std::vector<AtomGrid> grids_;
  GridSpec spec_;
};

/// 4 pi sum_i w_i r_i^2 sum_j eta_j f_ij
double integrate_atom(const AtomicGridSet &grids, int a,
                      std::span<const double> f);

/// Spherical averages of f over each radial shell of atom a.
std::vector<double> shell_averages(const AtomicGridSet &grids, int a,
                                   std::span<const double> f);

} // namespace aimkit::grid
