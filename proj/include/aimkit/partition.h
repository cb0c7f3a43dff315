#pragma once
#include <aimkit/density.h>
#include <aimkit/grid.h>
#include <aimkit/kernels.h>
#include <aimkit/moments.h>
#include <aimkit/proatom.h>
#include <aimkit/solvers.h>
#include <span>
#include <string>
#include <vector>

namespace aimkit::partition {

enum class Method { hirshfeld, hirshfeld_i, isa, gisa, lisa, mbisa };

std::string to_string(Method m);
Method method_from_string(const std::string &name);

/// Per-atom stockholder shares on each atom's own grid.
struct Allocation {
  std::vector<std::vector<double>> shares;
  std::vector<std::vector<double>> ratios; // rho / promol, 0/0 -> 0
  std::vector<double> lost;                // density with promol = 0, per atom
};

Allocation stockholder_allocate(const grid::AtomicGridSet &grids,
                                std::span<const ProAtomModel> pro,
                                kernels::Exec exec = kernels::Exec::parallel);

/// Spherical average of the share on atom a's radial nodes.
Tabulated isa_step2(const grid::AtomicGridSet &grids, int a,
                    std::span<const double> share);

Tabulated hirshfeld_i_step2(double charge, const HirshfeldITable &table);

/// F(c) = -int r^2 w(r) log(sum_k c_k g_k(r)) dr with normalized Gaussians
/// g_k, discretized on a radial grid.
class LisaObjective {
public:
  LisaObjective(const grid::RadialGrid &radial, std::span<const double> w,
                std::span<const double> exponents);

  double value(const Vec &c) const;
  Vec gradient(const Vec &c) const;
  Mat hessian(const Vec &c) const;
  solvers::SimplexProblem problem(double mass) const;
  int dimension() const { return static_cast<int>(log_g_.cols()); }

private:
  // log of sum_k c_k g_k(r_i); -inf when every term vanishes
  double log_sum(const Vec &c, int i) const;
  std::vector<double> r2w_;
  Mat log_g_;
};

struct Step2Report {
  double kkt_residual{0.0};
  bool regularized{false};
  int iterations{0};
};

GaussianExpansion lisa_step2(const grid::RadialGrid &radial,
                             std::span<const double> w, double charge,
                             std::span<const double> exponents,
                             const Vec &start, Step2Report *report = nullptr);

/// 2 int zeta_k zeta_l.
Mat gisa_overlap(std::span<const double> exponents);

/// b_k = int zeta_k rho_a over atom a's grid.
Vec gisa_rhs(const grid::AtomicGridSet &grids, int a,
             std::span<const double> share, std::span<const double> exponents);

GaussianExpansion gisa_step2(const grid::AtomicGridSet &grids, int a,
                             std::span<const double> share, double charge,
                             std::span<const double> exponents,
                             const Vec &start, Step2Report *report = nullptr);

/// One MB-ISA shell update for atom a from the ratio rho / promol.
/// Shells whose charge drops below 1e-12 are frozen at zero.
SlaterShells mbisa_update(const grid::AtomicGridSet &grids, int a,
                          std::span<const double> ratio,
                          const SlaterShells &previous,
                          int *frozen = nullptr);

/// int f log(f / rho0) over atom a's grid; +inf when f > 0 where rho0 = 0.
double kl_entropy(const grid::AtomicGridSet &grids, int a,
                  std::span<const double> f, const ProAtomModel &pro);

/// 2 Z^{1 - (k-1)/(m-1)} / a0 for k = 1..m.
std::vector<double> default_exponents(int Z, int shells);
int default_shell_count(int Z);

struct MethodParams {
  std::vector<ProAtomModel> proatoms;   // hirshfeld; optional ISA start
  std::vector<HirshfeldITable> tables;  // hirshfeld-i, one per atom
  std::vector<std::vector<double>> exponents;            // gisa, lisa, mbisa
  std::vector<std::vector<double>> initial_coefficients; // optional
  std::vector<double> initial_charges;  // hirshfeld-i, optional
};

struct Options {
  double tol{1e-8};
  double tol_l2{1e-8};
  int max_iter{500};
  kernels::Exec exec{kernels::Exec::parallel};
  double lyapunov_slack{1e-8};
  bool enforce_lyapunov{true};
  bool keep_shares{true};
};

struct IterationRecord {
  int iteration{0};
  std::vector<double> charges;
  double total_charge{0.0};
  double entropy{0.0};
  std::vector<double> l2_steps;       // ||rho_a(m) - rho_a(m-1)||
  std::vector<double> proatom_steps;  // ||rho0_a(m) - rho0_a(m-1)||
  double max_charge_change{0.0};
  double entropy_decrease{0.0}; // S(m-1) - S(m); NaN at m = 1
  double lyapunov_bound{0.0};   // sum ||d rho_a||^2 / (2 max rho)
  double lost_charge{0.0};
};

struct PartitionResult {
  Method method{Method::isa};
  bool converged{false};
  int iterations{0};
  std::vector<double> charges;
  std::vector<AtomicMoments> moments;
  std::vector<std::vector<double>> profile_nodes; // atom radial nodes
  std::vector<std::vector<double>> profiles;      // rho0_a at those nodes
  std::vector<ProAtomModel> proatoms;
  std::vector<std::vector<double>> shares;
  std::vector<IterationRecord> trace;
  double density_charge{0.0};
  double max_density{0.0};
  double lost_charge{0.0};
  std::vector<std::string> warnings;
  double seconds{0.0};
};

PartitionResult run_partition(Method method, std::span<const Atom> atoms,
                              const DensityModel &density,
                              const grid::AtomicGridSet &grids,
                              const MethodParams &params,
                              const Options &options = {});

/// Single stockholder pass with fixed pro-atoms.
PartitionResult hirshfeld(std::span<const Atom> atoms,
                          const DensityModel &density,
                          const grid::AtomicGridSet &grids,
                          std::span<const ProAtomModel> proatoms,
                          const Options &options = {});

/// Pro-atoms the iteration starts from.
std::vector<ProAtomModel> initial_proatoms(Method method,
                                           std::span<const Atom> atoms,
                                           const grid::AtomicGridSet &grids,
                                           const MethodParams &params);

} // namespace aimkit::partition
