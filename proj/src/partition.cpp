#include <aimkit/partition.h>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/core.h>
#include <limits>

namespace aimkit::partition {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

const std::vector<std::pair<Method, std::string>> &method_names() {
  static const std::vector<std::pair<Method, std::string>> names = {
      {Method::hirshfeld, "hirshfeld"}, {Method::hirshfeld_i, "hirshfeld-i"},
      {Method::isa, "isa"},             {Method::gisa, "gisa"},
      {Method::lisa, "lisa"},           {Method::mbisa, "mbisa"}};
  return names;
}

std::vector<double> atom_exponents(const Atom &atom, int a,
                                   const MethodParams &params) {
  if (a < static_cast<int>(params.exponents.size()) &&
      !params.exponents[a].empty())
    return params.exponents[a];
  return default_exponents(atom.Z, default_shell_count(atom.Z));
}

std::vector<double> atom_start(const Atom &atom, int a, std::size_t m,
                               const MethodParams &params) {
  if (a < static_cast<int>(params.initial_coefficients.size()) &&
      !params.initial_coefficients[a].empty()) {
    const auto &c = params.initial_coefficients[a];
    if (c.size() != m)
      throw ValidationError(fmt::format(
          "atom {}: {} initial coefficients for {} shells", a, c.size(), m));
    return c;
  }
  return std::vector<double>(m, static_cast<double>(atom.Z) / m);
}

// Previous coefficients rescaled to a new mass; uniform if they vanish.
Vec rescaled(std::span<const double> c, double mass) {
  Vec x = Vec::Map(c.data(), static_cast<Eigen::Index>(c.size()));
  const double s = x.sum();
  if (s > 0.0 && std::isfinite(s))
    return x * (mass / s);
  return Vec::Constant(x.size(), mass / static_cast<double>(x.size()));
}

std::vector<double> squared_difference(std::span<const double> a,
                                       std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    d[k] = (a[k] - b[k]) * (a[k] - b[k]);
  return d;
}

} // namespace

std::string to_string(Method m) {
  for (const auto &[k, v] : method_names())
    if (k == m)
      return v;
  return "unknown";
}

Method method_from_string(const std::string &name) {
  for (const auto &[k, v] : method_names())
    if (v == name)
      return k;
  throw ValidationError(fmt::format("unknown method '{}'", name));
}

Allocation stockholder_allocate(const grid::AtomicGridSet &grids,
                                std::span<const ProAtomModel> pro,
                                kernels::Exec exec) {
  const int M = grids.atom_count();
  Allocation out;
  out.shares.resize(M);
  out.ratios.resize(M);
  out.lost.resize(M);
  for (int a = 0; a < M; ++a) {
    const int n = grids.atom(a).npoints();
    out.shares[a].resize(n);
    out.ratios[a].resize(n);
    out.lost[a] = kernels::stockholder_share(grids, a, pro, out.shares[a],
                                             exec, out.ratios[a]);
  }
  return out;
}

Tabulated isa_step2(const grid::AtomicGridSet &grids, int a,
                    std::span<const double> share) {
  const auto &g = grids.atom(a);
  Tabulated t;
  t.nodes = g.radial.nodes;
  t.rmax = g.radial.rmax;
  t.values = grid::shell_averages(grids, a, share);
  for (auto &v : t.values)
    v = std::max(v, 0.0);
  return t;
}

Tabulated hirshfeld_i_step2(double charge, const HirshfeldITable &table) {
  return hirshfeld_i_interpolate(std::max(charge, 0.0), table);
}

LisaObjective::LisaObjective(const grid::RadialGrid &radial,
                             std::span<const double> w,
                             std::span<const double> exponents) {
  if (static_cast<int>(w.size()) != radial.size())
    throw ValidationError("L-ISA: profile does not match the radial grid");
  if (exponents.empty())
    throw ValidationError("L-ISA: empty basis");
  const int n = radial.size();
  const auto m = static_cast<Eigen::Index>(exponents.size());
  r2w_.resize(n);
  log_g_.resize(n, m);
  for (int i = 0; i < n; ++i) {
    const double r = radial.nodes[i];
    r2w_[i] = radial.weights[i] * r * r * w[i];
    for (Eigen::Index k = 0; k < m; ++k) {
      const double a = exponents[k];
      log_g_(i, k) = 1.5 * std::log(a / pi) - a * r * r;
    }
  }
}

double LisaObjective::log_sum(const Vec &c, int i) const {
  double top = -inf;
  for (Eigen::Index k = 0; k < c.size(); ++k)
    if (c[k] > 0.0)
      top = std::max(top, std::log(c[k]) + log_g_(i, k));
  if (top == -inf)
    return -inf;
  double s = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k)
    if (c[k] > 0.0)
      s += std::exp(std::log(c[k]) + log_g_(i, k) - top);
  return top + std::log(s);
}

double LisaObjective::value(const Vec &c) const {
  double f = 0.0;
  for (std::size_t i = 0; i < r2w_.size(); ++i) {
    if (r2w_[i] == 0.0)
      continue;
    const double L = log_sum(c, static_cast<int>(i));
    if (L == -inf)
      return inf;
    f -= r2w_[i] * L;
  }
  return f;
}

Vec LisaObjective::gradient(const Vec &c) const {
  Vec g = Vec::Zero(c.size());
  for (std::size_t i = 0; i < r2w_.size(); ++i) {
    if (r2w_[i] == 0.0)
      continue;
    const double L = log_sum(c, static_cast<int>(i));
    if (L == -inf)
      continue;
    for (Eigen::Index k = 0; k < c.size(); ++k)
      g[k] -= r2w_[i] * std::exp(log_g_(i, k) - L);
  }
  return g;
}

Mat LisaObjective::hessian(const Vec &c) const {
  const auto m = c.size();
  Mat H = Mat::Zero(m, m);
  Vec t(m);
  for (std::size_t i = 0; i < r2w_.size(); ++i) {
    if (r2w_[i] == 0.0)
      continue;
    const double L = log_sum(c, static_cast<int>(i));
    if (L == -inf)
      continue;
    for (Eigen::Index k = 0; k < m; ++k)
      t[k] = std::exp(log_g_(i, k) - L);
    H.noalias() += r2w_[i] * t * t.transpose();
  }
  return H;
}

solvers::SimplexProblem LisaObjective::problem(double mass) const {
  solvers::SimplexProblem p;
  p.dimension = dimension();
  p.mass = mass;
  p.objective = [this](const Vec &c) { return value(c); };
  p.gradient = [this](const Vec &c) { return gradient(c); };
  p.hessian = [this](const Vec &c) { return hessian(c); };
  return p;
}

GaussianExpansion lisa_step2(const grid::RadialGrid &radial,
                             std::span<const double> w, double charge,
                             std::span<const double> exponents,
                             const Vec &start, Step2Report *report) {
  const LisaObjective F(radial, w, exponents);
  const double mass = std::max(charge, 0.0);
  Vec x0 = start.size() == F.dimension()
               ? rescaled(std::span<const double>(start.data(), start.size()),
                          mass)
               : Vec::Constant(F.dimension(), mass / F.dimension());
  const auto rep = solvers::solve_simplex_newton(F.problem(mass), x0);
  if (report) {
    report->kkt_residual = rep.kkt_residual;
    report->regularized = rep.regularized;
    report->iterations = rep.iterations;
  }
  GaussianExpansion g;
  g.exponents.assign(exponents.begin(), exponents.end());
  g.coefficients.assign(rep.x.data(), rep.x.data() + rep.x.size());
  return g;
}

Mat gisa_overlap(std::span<const double> exponents) {
  const auto m = static_cast<Eigen::Index>(exponents.size());
  Mat S(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = 0; l < m; ++l) {
      const double a = exponents[k], b = exponents[l];
      S(k, l) = 2.0 / (pi * std::sqrt(pi)) * std::pow(a * b, 1.5) /
                std::pow(a + b, 1.5);
    }
  return S;
}

Vec gisa_rhs(const grid::AtomicGridSet &grids, int a,
             std::span<const double> share, std::span<const double> exponents) {
  const auto &g = grids.atom(a);
  const auto avg = grid::shell_averages(grids, a, share);
  Vec b = Vec::Zero(static_cast<Eigen::Index>(exponents.size()));
  for (int i = 0; i < g.radial.size(); ++i) {
    const double r = g.radial.nodes[i];
    const double w = 4.0 * pi * g.radial.weights[i] * r * r * avg[i];
    for (std::size_t k = 0; k < exponents.size(); ++k)
      b[k] += w * gaussian_shell(exponents[k], r);
  }
  return b;
}

GaussianExpansion gisa_step2(const grid::AtomicGridSet &grids, int a,
                             std::span<const double> share, double charge,
                             std::span<const double> exponents,
                             const Vec &start, Step2Report *report) {
  solvers::QpProblem qp;
  qp.S = gisa_overlap(exponents);
  // 1/2 c^T S c - c^T (2b) = ||sum c_k zeta_k - rho_a||^2 - ||rho_a||^2
  qp.b = 2.0 * gisa_rhs(grids, a, share, exponents);
  qp.mass = std::max(charge, 0.0);
  const Vec x0 =
      start.size() == qp.b.size()
          ? rescaled(std::span<const double>(start.data(), start.size()),
                     qp.mass)
          : Vec::Constant(qp.b.size(), qp.mass / qp.b.size());
  const auto rep = solvers::solve_qp_nonneg(qp, x0);
  if (report) {
    report->kkt_residual = rep.kkt_residual;
    report->regularized = rep.regularized;
    report->iterations = rep.iterations;
  }
  GaussianExpansion g;
  g.exponents.assign(exponents.begin(), exponents.end());
  g.coefficients.assign(rep.x.data(), rep.x.data() + rep.x.size());
  return g;
}

SlaterShells mbisa_update(const grid::AtomicGridSet &grids, int a,
                          std::span<const double> ratio,
                          const SlaterShells &previous, int *frozen) {
  const auto &g = grids.atom(a);
  const auto T = grid::shell_averages(grids, a, ratio);
  SlaterShells next = previous;
  int nfrozen = 0;
  for (std::size_t k = 0; k < previous.exponents.size(); ++k) {
    const double c0 = previous.coefficients[k];
    const double a0 = previous.exponents[k];
    if (c0 <= 0.0) {
      next.coefficients[k] = 0.0;
      ++nfrozen;
      continue;
    }
    double c = 0.0, m1 = 0.0;
    for (int i = 0; i < g.radial.size(); ++i) {
      const double r = g.radial.nodes[i];
      const double w = 4.0 * pi * g.radial.weights[i] * r * r * c0 *
                       slater_shell(a0, r) * T[i];
      c += w;
      m1 += w * r;
    }
    if (!(c >= 1e-12) || !(m1 > 0.0)) {
      next.coefficients[k] = 0.0;
      ++nfrozen;
      continue;
    }
    next.coefficients[k] = c;
    next.exponents[k] = 3.0 * c / m1;
  }
  if (frozen)
    *frozen = nfrozen;
  return next;
}

double kl_entropy(const grid::AtomicGridSet &grids, int a,
                  std::span<const double> f, const ProAtomModel &pro) {
  const auto &g = grids.atom(a);
  const int nr = g.radial.size(), ns = g.angular.size();
  if (static_cast<int>(f.size()) != nr * ns)
    throw ValidationError("kl_entropy: sample count does not match the grid");
  double total = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = g.radial.nodes[i];
    const double p = evaluate(pro, r);
    double shell = 0.0;
    for (int j = 0; j < ns; ++j) {
      const double v = f[i * ns + j];
      if (v <= 0.0)
        continue;
      if (p <= 0.0)
        return inf;
      shell += g.angular.weights[j] * v * std::log(v / p);
    }
    total += 4.0 * pi * g.radial.weights[i] * r * r * shell;
  }
  return total;
}

std::vector<double> default_exponents(int Z, int shells) {
  if (Z < 1)
    throw ValidationError("default exponents need Z >= 1");
  if (shells < 1)
    throw ValidationError("default exponents need at least one shell");
  const double a0 = units::bohr_in_angstrom;
  if (shells == 1)
    return {2.0 * Z / a0};
  std::vector<double> out;
  for (int k = 1; k <= shells; ++k)
    out.push_back(2.0 *
                  std::pow(static_cast<double>(Z),
                           1.0 - static_cast<double>(k - 1) / (shells - 1)) /
                  a0);
  return out;
}

int default_shell_count(int Z) {
  if (Z <= 2)
    return 4;
  if (Z <= 18)
    return 6;
  return 8;
}

std::vector<ProAtomModel> initial_proatoms(Method method,
                                           std::span<const Atom> atoms,
                                           const grid::AtomicGridSet &grids,
                                           const MethodParams &params) {
  const int M = static_cast<int>(atoms.size());
  if (grids.atom_count() != M)
    throw ValidationError("grid set and atom list differ in size");
  std::vector<ProAtomModel> pro;
  for (int a = 0; a < M; ++a) {
    const Atom &atom = atoms[a];
    switch (method) {
    case Method::hirshfeld:
      if (static_cast<int>(params.proatoms.size()) != M)
        throw ValidationError(fmt::format(
            "Hirshfeld needs one pro-atom per atom ({} given for {} atoms)",
            params.proatoms.size(), M));
      validate(params.proatoms[a]);
      pro.push_back(params.proatoms[a]);
      break;
    case Method::hirshfeld_i: {
      if (static_cast<int>(params.tables.size()) != M)
        throw ValidationError(fmt::format(
            "Hirshfeld-I needs one table set per atom ({} given for {} atoms)",
            params.tables.size(), M));
      const double n0 = a < static_cast<int>(params.initial_charges.size())
                            ? params.initial_charges[a]
                            : static_cast<double>(atom.Z);
      pro.push_back(hirshfeld_i_interpolate(n0, params.tables[a]));
      break;
    }
    case Method::isa:
      if (a < static_cast<int>(params.proatoms.size())) {
        validate(params.proatoms[a]);
        pro.push_back(params.proatoms[a]);
      } else {
        pro.push_back(SlaterShells{{2.0}, {static_cast<double>(atom.Z)}});
      }
      break;
    case Method::gisa:
    case Method::lisa: {
      GaussianExpansion g;
      g.exponents = atom_exponents(atom, a, params);
      g.coefficients = atom_start(atom, a, g.exponents.size(), params);
      validate(g);
      pro.push_back(g);
      break;
    }
    case Method::mbisa: {
      SlaterShells s;
      s.exponents = atom_exponents(atom, a, params);
      s.coefficients = atom_start(atom, a, s.exponents.size(), params);
      validate(s);
      pro.push_back(s);
      break;
    }
    }
  }
  return pro;
}

PartitionResult run_partition(Method method, std::span<const Atom> atoms,
                              const DensityModel &density,
                              const grid::AtomicGridSet &grids,
                              const MethodParams &params,
                              const Options &options) {
  const auto t0 = std::chrono::steady_clock::now();
  const int M = static_cast<int>(atoms.size());
  if (M < 1)
    throw ValidationError("partition needs at least one atom");
  if (options.max_iter < 1)
    throw ValidationError("max_iter must be >= 1");

  PartitionResult res;
  res.method = method;
  res.density_charge = total_charge(density);
  res.max_density = grids.max_sample();
  for (const auto &atom : atoms)
    res.max_density = std::max(res.max_density,
                               eval_density(density, atom.position));

  std::vector<ProAtomModel> pro = initial_proatoms(method, atoms, grids, params);
  std::vector<double> prev_charges(M);
  for (int a = 0; a < M; ++a)
    prev_charges[a] = charge(pro[a]);

  const bool lyapunov = method == Method::isa || method == Method::lisa;
  const int max_iter = method == Method::hirshfeld ? 1 : options.max_iter;
  std::vector<std::vector<double>> prev_shares;
  Allocation alloc;
  std::vector<ProAtomModel> next(M);
  double prev_entropy = std::numeric_limits<double>::quiet_NaN();
  int frozen_total = 0;
  bool regularized = false;

  for (int m = 1; m <= max_iter; ++m) {
    alloc = stockholder_allocate(grids, pro, options.exec);
    IterationRecord rec;
    rec.iteration = m;
    rec.charges.resize(M);
    for (int a = 0; a < M; ++a)
      rec.charges[a] = grid::integrate_atom(grids, a, alloc.shares[a]);

    for (int a = 0; a < M; ++a) {
      const double N = rec.charges[a];
      Step2Report rep;
      switch (method) {
      case Method::hirshfeld:
        next[a] = pro[a];
        break;
      case Method::hirshfeld_i:
        next[a] = hirshfeld_i_step2(N, params.tables[a]);
        break;
      case Method::isa:
        next[a] = isa_step2(grids, a, alloc.shares[a]);
        break;
      case Method::gisa: {
        const auto &prev = std::get<GaussianExpansion>(pro[a]);
        const Vec start = Vec::Map(prev.coefficients.data(),
                                   static_cast<Eigen::Index>(prev.coefficients.size()));
        next[a] = gisa_step2(grids, a, alloc.shares[a], N, prev.exponents,
                             start, &rep);
        regularized |= rep.regularized;
        break;
      }
      case Method::lisa: {
        const auto &prev = std::get<GaussianExpansion>(pro[a]);
        const Vec start = Vec::Map(prev.coefficients.data(),
                                   static_cast<Eigen::Index>(prev.coefficients.size()));
        const auto w = grid::shell_averages(grids, a, alloc.shares[a]);
        next[a] = lisa_step2(grids.atom(a).radial, w, N, prev.exponents,
                             start, &rep);
        regularized |= rep.regularized;
        break;
      }
      case Method::mbisa: {
        int frozen = 0;
        next[a] = mbisa_update(grids, a, alloc.ratios[a],
                               std::get<SlaterShells>(pro[a]), &frozen);
        frozen_total = std::max(frozen_total, frozen);
        break;
      }
      }
    }

    rec.entropy = 0.0;
    for (int a = 0; a < M; ++a)
      rec.entropy += kl_entropy(grids, a, alloc.shares[a], next[a]);
    rec.total_charge = 0.0;
    for (double n : rec.charges)
      rec.total_charge += n;
    rec.lost_charge = *std::max_element(alloc.lost.begin(), alloc.lost.end());
    rec.max_charge_change = 0.0;
    for (int a = 0; a < M; ++a)
      rec.max_charge_change = std::max(
          rec.max_charge_change, std::abs(rec.charges[a] - prev_charges[a]));
    rec.l2_steps.assign(M, inf);
    rec.entropy_decrease = std::numeric_limits<double>::quiet_NaN();
    double max_l2 = inf;
    if (!prev_shares.empty()) {
      double sum_sq = 0.0;
      max_l2 = 0.0;
      for (int a = 0; a < M; ++a) {
        const double sq = grid::integrate_atom(
            grids, a, squared_difference(alloc.shares[a], prev_shares[a]));
        rec.l2_steps[a] = std::sqrt(std::max(sq, 0.0));
        max_l2 = std::max(max_l2, rec.l2_steps[a]);
        sum_sq += std::max(sq, 0.0);
      }
      rec.entropy_decrease = prev_entropy - rec.entropy;
      rec.lyapunov_bound = sum_sq / (2.0 * res.max_density);
    }
    // a single atom's share never moves, so the pro-atoms must settle too
    rec.proatom_steps.resize(M);
    for (int a = 0; a < M; ++a) {
      const auto &radial = grids.atom(a).radial;
      double sq = 0.0;
      for (int i = 0; i < radial.size(); ++i) {
        const double r = radial.nodes[i];
        const double dw = evaluate(next[a], r) - evaluate(pro[a], r);
        sq += 4.0 * pi * radial.weights[i] * r * r * dw * dw;
      }
      rec.proatom_steps[a] = std::sqrt(sq);
      max_l2 = std::max(max_l2, rec.proatom_steps[a]);
    }
    res.trace.push_back(rec);

    if (lyapunov && options.enforce_lyapunov && m > 1 &&
        rec.entropy > prev_entropy + options.lyapunov_slack)
      throw NumericalError(fmt::format(
          "{}: entropy increased from {:.12g} to {:.12g} at iteration {}",
          to_string(method), prev_entropy, rec.entropy, m));

    pro = next;
    prev_entropy = rec.entropy;
    prev_charges = rec.charges;
    prev_shares = alloc.shares;
    res.iterations = m;
    if (method == Method::hirshfeld ||
        (rec.max_charge_change < options.tol && max_l2 < options.tol_l2)) {
      res.converged = true;
      break;
    }
  }

  res.charges = res.trace.back().charges;
  res.proatoms = pro;
  res.moments.resize(M);
  res.profile_nodes.resize(M);
  res.profiles.resize(M);
  for (int a = 0; a < M; ++a) {
    res.moments[a] = atomic_moments(grids, a, alloc.shares[a]);
    const auto &nodes = grids.atom(a).radial.nodes;
    res.profile_nodes[a] = nodes;
    for (double r : nodes)
      res.profiles[a].push_back(evaluate(pro[a], r));
  }
  for (const auto &rec : res.trace)
    res.lost_charge = std::max(res.lost_charge, rec.lost_charge);
  if (res.lost_charge > 1e-6 * res.density_charge)
    res.warnings.push_back(fmt::format(
        "density {:.3e} allocated to no atom (all pro-atoms vanish)",
        res.lost_charge));
  if (regularized)
    res.warnings.push_back(
        "ill-conditioned shell overlap: regularized by 1e-12 on the diagonal");
  if (frozen_total > 0)
    res.warnings.push_back(fmt::format(
        "{} shell(s) frozen at zero charge", frozen_total));
  if (!res.converged)
    res.warnings.push_back(fmt::format(
        "no convergence after {} iterations", res.iterations));
  if (options.keep_shares)
    res.shares = std::move(alloc.shares);
  res.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

PartitionResult hirshfeld(std::span<const Atom> atoms,
                          const DensityModel &density,
                          const grid::AtomicGridSet &grids,
                          std::span<const ProAtomModel> proatoms,
                          const Options &options) {
  MethodParams params;
  params.proatoms.assign(proatoms.begin(), proatoms.end());
  return run_partition(Method::hirshfeld, atoms, density, grids, params,
                       options);
}

} // namespace aimkit::partition
