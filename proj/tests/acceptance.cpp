// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.
#include <aimkit/commands.h>
#include <aimkit/harmonics.h>
#include <chrono>
#include <cstdio>
#include <fmt/core.h>
#include <fmt/ranges.h>
#include <fstream>
#include <functional>
#include <limits>
#include <random>

using namespace aimkit;
using namespace aimkit::partition;
using Kind = AnalyticTerm::Kind;

namespace {

const std::string data_dir = AIMKIT_DATA_DIR;
constexpr double inf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass{true};
  std::vector<std::string> notes;

  void require(bool ok, const std::string &what) {
    pass = pass && ok;
    notes.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", what));
  }
  void info(const std::string &what) { notes.push_back("     " + what); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

grid::GridSpec diatomic_grid(int nr = 300, double rmax = 15.0) {
  grid::GridSpec g;
  g.base.nr = nr;
  g.base.rmax = rmax;
  g.base.angular = grid::AngularKind::axial;
  g.base.order = 200;
  return g;
}

struct Diatomic {
  std::string name;
  std::vector<Atom> atoms;
  AnalyticDensity density;
};

// synthetic two-center densities on the z axis, one electron per center
std::vector<Diatomic> test_densities() {
  auto atoms = [](double z) {
    return std::vector<Atom>{{"H", 1, Vec3::Zero()}, {"H", 1, Vec3(0, 0, z)}};
  };
  auto g = [](double z, double a, double c) {
    return AnalyticTerm{Kind::gaussian_s, Vec3(0, 0, z), a, c};
  };
  auto s = [](double z, double a, double c) {
    return AnalyticTerm{Kind::slater_s, Vec3(0, 0, z), a, c};
  };
  return {
      {"gauss 1.0/0.5 R=1.4", atoms(1.4), {{g(0, 1.0, 1.0), g(1.4, 0.5, 1.0)}}},
      {"symmetric gauss R=2", atoms(2.0), {{g(0, 0.8, 1.0), g(2.0, 0.8, 1.0)}}},
      {"slater 2.0/1.4 R=1.6", atoms(1.6), {{s(0, 2.0, 1.0), s(1.6, 1.4, 1.0)}}},
      {"gauss + bond charge R=1.8", atoms(1.8),
       {{g(0, 1.2, 0.85), g(1.8, 0.7, 0.85), g(0.9, 1.5, 0.3)}}},
      {"slater + diffuse gauss R=2.5", atoms(2.5),
       {{s(0, 1.8, 0.9), g(0, 0.2, 0.2), s(2.5, 2.2, 0.9)}}},
  };
}

// ---------------------------------------------------------------------------

Outcome gisa_reference() {
  Outcome out;
  struct Case {
    const char *file;
    double q1, q2, d1, d2;
  };
  const Case cases[] = {{"gisa_pair_guess1.json", 1.000, 1.000, 0.000, 0.000},
                        {"gisa_pair_balanced.json", 0.977, 1.023, 0.020, 0.006}};
  for (const auto &c : cases) {
    const auto config = cli::parse_input(data_dir + "/" + c.file);
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = cli::cmd_partition(config);
    const double dt = seconds_since(t0);
    const auto &r = run.result;
    const double q1 = r.charges[0], q2 = r.charges[1];
    const double d1 = r.moments[0].p.z(), d2 = r.moments[1].p.z();
    out.require(r.converged, fmt::format("{}: converged in {} iterations",
                                         c.file, r.iterations));
    out.require(std::abs(q1 - c.q1) <= 0.005 && std::abs(q2 - c.q2) <= 0.005,
                fmt::format("{}: charges ({:.4f}, {:.4f}) vs ({:.3f}, {:.3f}) +- 0.005",
                            c.file, q1, q2, c.q1, c.q2));
    out.require(std::abs(d1 - c.d1) <= 0.005 && std::abs(d2 - c.d2) <= 0.005,
                fmt::format("{}: dipoles ({:.4f}, {:.4f}) vs ({:.3f}, {:.3f}) +- 0.005",
                            c.file, d1, d2, c.d1, c.d2));
    out.require(dt < 60.0, fmt::format("{}: {:.1f} s < 60 s", c.file, dt));
    if (std::string(c.file) == "gisa_pair_guess1.json") {
      // where the trajectory passes closest to the (1, 1) fixed point
      double best = inf;
      int at = 0;
      for (const auto &rec : r.trace) {
        const double dev = std::abs(rec.charges[0] - 1.0);
        if (dev < best) {
          best = dev;
          at = rec.iteration;
        }
      }
      out.info(fmt::format("closest approach to q=(1,1): |q1-1| = {:.2e} at iteration {}",
                           best, at));
    }
  }
  return out;
}

Outcome lyapunov_suite() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto &d : test_densities()) {
    const grid::AtomicGridSet grids(d.atoms, d.density, diatomic_grid());
    MethodParams params;
    params.exponents = {default_exponents(1, 4), default_exponents(1, 4)};
    Options opt;
    opt.max_iter = 150;
    opt.enforce_lyapunov = false;
    for (auto m : {Method::isa, Method::lisa}) {
      PartitionResult r;
      try {
        r = run_partition(m, d.atoms, d.density, grids, params, opt);
      } catch (const std::exception &e) {
        out.require(false, fmt::format("{} / {}: {}", to_string(m), d.name, e.what()));
        continue;
      }
      double worst_rise = -inf, worst_bound = inf;
      bool bound_ok = true;
      for (std::size_t i = 1; i < r.trace.size(); ++i) {
        const auto &now = r.trace[i], &before = r.trace[i - 1];
        worst_rise = std::max(worst_rise, now.entropy - before.entropy);
        // the observed integration defect of this and the previous step
        const double quad = std::abs(now.total_charge - r.density_charge) +
                            std::abs(before.total_charge - r.density_charge);
        const double margin = now.entropy_decrease - now.lyapunov_bound;
        worst_bound = std::min(worst_bound, margin);
        bound_ok = bound_ok && margin >= -2.0 * quad - 1e-12;
      }
      out.require(worst_rise <= 1e-8,
                  fmt::format("{} / {}: max entropy rise {:.2e} over {} iterations",
                              to_string(m), d.name, worst_rise, r.iterations));
      out.require(bound_ok, fmt::format("{} / {}: decrease - bound >= -2 x quadrature "
                                        "defect (worst margin {:.2e})",
                                        to_string(m), d.name, worst_bound));
    }
  }
  const double dt = seconds_since(t0);
  out.require(dt < 120.0, fmt::format("suite time {:.1f} s < 120 s", dt));
  return out;
}

Outcome conservation_suite() {
  Outcome out;
  auto densities = test_densities();
  {
    const auto c = cli::parse_input(data_dir + "/gisa_pair_balanced.json");
    densities.push_back({"gisa pair", c.atoms, c.density.analytic});
  }
  for (const auto &d : densities) {
    const grid::AtomicGridSet grids(d.atoms, d.density, diatomic_grid());
    const auto &radial = grids.atom(0).radial;
    MethodParams params;
    const GaussianExpansion neutral{{0.9}, {1.0}};
    params.proatoms = {neutral, neutral};
    params.tables = {synthetic_slater_family(1, 2.0, 2, radial),
                     synthetic_slater_family(1, 2.0, 2, radial)};
    params.exponents = {default_exponents(1, 4), default_exponents(1, 4)};
    Options opt;
    opt.max_iter = 100;
    opt.enforce_lyapunov = false;
    opt.keep_shares = false;
    for (auto m : {Method::hirshfeld, Method::hirshfeld_i, Method::isa,
                   Method::gisa, Method::lisa, Method::mbisa}) {
      PartitionResult r;
      try {
        r = run_partition(m, d.atoms, d.density, grids, params, opt);
      } catch (const std::exception &e) {
        out.require(false, fmt::format("{} / {}: {}", to_string(m), d.name, e.what()));
        continue;
      }
      double worst = 0.0;
      for (const auto &rec : r.trace)
        worst = std::max(worst, std::abs(rec.total_charge - r.density_charge));
      out.require(worst <= 1e-6, fmt::format("{} / {}: max |sum N_a - N| = {:.2e}",
                                             to_string(m), d.name, worst));
    }
  }
  // the tabulated defect against radial resolution
  const auto &d = densities.front();
  for (int nr : {300, 600, 1200, 2400}) {
    const grid::AtomicGridSet grids(d.atoms, d.density, diatomic_grid(nr));
    Options opt;
    opt.max_iter = 60;
    opt.keep_shares = false;
    const auto r = run_partition(Method::isa, d.atoms, d.density, grids, {}, opt);
    out.info(fmt::format("isa / {}: nr={} final |sum N_a - N| = {:.2e}", d.name, nr,
                         std::abs(r.trace.back().total_charge - r.density_charge)));
  }
  return out;
}

Outcome vanishing_atom() {
  Outcome out;
  const std::vector<Atom> atoms{{"H", 1, Vec3::Zero()}, {"H", 1, Vec3(0, 0, 1.4)}};
  const AnalyticDensity d{{{Kind::gaussian_s, Vec3(0, 0, 1.4), 0.8, 2.0}}};
  const grid::AtomicGridSet grids(atoms, d, diatomic_grid());
  Options opt;
  opt.max_iter = 50;
  opt.keep_shares = false;
  const auto r = run_partition(Method::isa, atoms, d, grids, {}, opt);
  const double n1 = r.trace.back().charges[0];
  out.require(n1 < 1e-6, fmt::format("N_1 after {} iterations = {:.3e} (< 1e-6)",
                                     r.iterations, n1));
  for (int m : {5, 10, 20, 30, 40, 50})
    if (m <= static_cast<int>(r.trace.size()))
      out.info(fmt::format("iteration {:2d}: N_1 = {:.4e}, m * N_1 = {:.3f}", m,
                           r.trace[m - 1].charges[0], m * r.trace[m - 1].charges[0]));
  return out;
}

Outcome lisa_wellposed() {
  Outcome out;
  const auto all = test_densities();
  const auto &d = all[0];
  const grid::AtomicGridSet grids(d.atoms, d.density, diatomic_grid());
  const auto ex = default_exponents(1, 4);
  std::vector<std::vector<double>> results;
  for (const auto &guess : {std::vector<double>{0.25, 0.25, 0.25, 0.25},
                            std::vector<double>{0.85, 0.05, 0.05, 0.05}}) {
    MethodParams params;
    params.exponents = {ex, ex};
    params.initial_coefficients = {guess, std::vector<double>(guess.rbegin(), guess.rend())};
    Options opt;
    opt.tol = 1e-11;
    opt.tol_l2 = 1e-10;
    opt.max_iter = 3000;
    const auto r = run_partition(Method::lisa, d.atoms, d.density, grids, params, opt);
    out.require(r.converged, fmt::format("guess ({}): converged in {} iterations",
                                         fmt::join(guess, ", "), r.iterations));
    std::vector<double> c;
    for (const auto &p : r.proatoms)
      for (double v : std::get<GaussianExpansion>(p).coefficients)
        c.push_back(v);
    results.push_back(c);
  }
  double diff = 0.0;
  for (std::size_t k = 0; k < results[0].size(); ++k)
    diff = std::max(diff, std::abs(results[0][k] - results[1][k]));
  out.require(diff < 1e-6, fmt::format("max coefficient difference {:.2e} < 1e-6", diff));

  // derivatives against central differences
  const auto &radial = grids.atom(0).radial;
  std::vector<double> w;
  for (double r : radial.nodes)
    w.push_back(0.3 * std::exp(-1.1 * r) + 0.05 * std::exp(-0.2 * r * r));
  const LisaObjective F(radial, w, ex);
  Vec c(4);
  c << 0.2, 0.4, 0.15, 0.25;
  const Vec g = F.gradient(c);
  const Mat H = F.hessian(c);
  double worst_g = 0.0, worst_h = 0.0;
  const double h = 1e-5;
  for (int k = 0; k < 4; ++k) {
    Vec cp = c, cm = c;
    cp[k] += h;
    cm[k] -= h;
    const double fd = (F.value(cp) - F.value(cm)) / (2 * h);
    worst_g = std::max(worst_g, std::abs(g[k] - fd) / std::abs(fd));
    const Vec gd = (F.gradient(cp) - F.gradient(cm)) / (2 * h);
    for (int l = 0; l < 4; ++l)
      worst_h = std::max(worst_h, std::abs(H(l, k) - gd[l]) / std::abs(gd[l]));
  }
  out.require(worst_g < 1e-6, fmt::format("gradient relative error {:.2e}", worst_g));
  out.require(worst_h < 1e-6, fmt::format("Hessian relative error {:.2e}", worst_h));
  return out;
}

Outcome gisa_qp() {
  Outcome out;
  const std::vector<double> ex{0.01, 0.1, 1, 2, 5, 10, 0.05, 0.5, 4, 50};
  const Mat S = gisa_overlap(ex);
  const auto radial = grid::build_radial(4000, 60.0, grid::RadialKind::log);
  double worst = 0.0;
  for (std::size_t k = 0; k < ex.size(); ++k)
    for (std::size_t l = 0; l < ex.size(); ++l) {
      double num = 0.0;
      for (int i = 0; i < radial.size(); ++i) {
        const double r = radial.nodes[i];
        num += 4 * pi * radial.weights[i] * r * r * gaussian_shell(ex[k], r) *
               gaussian_shell(ex[l], r);
      }
      worst = std::max(worst, std::abs(S(k, l) - 2 * num) / S(k, l));
    }
  out.require(worst <= 1e-10, fmt::format("overlap vs numeric 2 int zeta zeta: "
                                          "max relative error {:.2e}", worst));

  // KKT residuals of every coefficient solve along two real runs
  double kkt = 0.0;
  int solves = 0;
  for (const char *f : {"gisa_pair_balanced.json", "synthetic_lih.json"}) {
    auto c = cli::parse_input(data_dir + "/" + f);
    const auto model = cli::build_density(c);
    const auto grids = cli::build_grids(c, model);
    const auto &atoms = c.atoms;
    const auto params = cli::build_params(c, grids);
    std::vector<ProAtomModel> pro;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const auto e = a < params.exponents.size()
                         ? params.exponents[a]
                         : default_exponents(atoms[a].Z, default_shell_count(atoms[a].Z));
      pro.push_back(GaussianExpansion{e, std::vector<double>(e.size(), atoms[a].Z / double(e.size()))});
    }
    for (int it = 0; it < 30; ++it) {
      const auto alloc = stockholder_allocate(grids, pro);
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        const auto &prev = std::get<GaussianExpansion>(pro[a]);
        const double N = grid::integrate_atom(grids, int(a), alloc.shares[a]);
        Step2Report rep;
        pro[a] = gisa_step2(grids, int(a), alloc.shares[a], N, prev.exponents,
                            Eigen::Map<const Vec>(prev.coefficients.data(),
                                                  Eigen::Index(prev.coefficients.size())),
                            &rep);
        kkt = std::max(kkt, rep.kkt_residual);
        ++solves;
      }
    }
  }
  out.require(kkt <= 1e-9, fmt::format("max KKT residual over {} solves: {:.2e}", solves, kkt));

  // two-shell problems against a simplex scan
  std::mt19937 gen(21);
  std::uniform_real_distribution<double> u(0.05, 8.0), v(-1.0, 1.0);
  double worst_c = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> e2{u(gen), u(gen)};
    solvers::QpProblem qp;
    qp.S = gisa_overlap(e2);
    qp.b = Vec(2);
    qp.b << qp.S(0, 0) * v(gen) + 0.3, qp.S(1, 1) * v(gen) + 0.3;
    qp.mass = 1.0;
    const auto rep = solvers::solve_qp_nonneg(qp, Vec());
    double best = inf, arg = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      Vec c(2);
      c << i / 1000.0, 1.0 - i / 1000.0;
      const double f = solvers::qp_objective(qp, c);
      if (f < best) {
        best = f;
        arg = c[0];
      }
    }
    worst_c = std::max(worst_c, std::abs(rep.x[0] - arg));
  }
  out.require(worst_c <= 2e-3, fmt::format("20 two-shell QPs vs 1e-3 simplex scan: "
                                           "max |c - c_scan| = {:.2e}", worst_c));
  return out;
}

Outcome mbisa_fixed_point() {
  Outcome out;
  {
    // two Slater shells per center, the shape the model can represent
    const std::vector<Atom> atoms{{"H", 1, Vec3::Zero()}, {"H", 1, Vec3(0, 0, 1.6)}};
    const AnalyticDensity d{{{Kind::slater_s, Vec3::Zero(), 3.0, 0.6},
                             {Kind::slater_s, Vec3::Zero(), 1.2, 0.4},
                             {Kind::slater_s, Vec3(0, 0, 1.6), 2.5, 0.5},
                             {Kind::slater_s, Vec3(0, 0, 1.6), 1.0, 0.5}}};
    const grid::AtomicGridSet grids(atoms, d, diatomic_grid());
    MethodParams params;
    params.exponents = {{4.0, 1.0}, {3.0, 0.8}};
    Options opt;
    opt.tol = 1e-9;
    opt.tol_l2 = 1e-9;
    opt.max_iter = 5000;
    const auto r = run_partition(Method::mbisa, atoms, d, grids, params, opt);
    out.require(r.converged, fmt::format("two-shell Slater pair: converged in {} iterations",
                                         r.iterations));
    // one more explicit update from the converged pro-atoms
    const auto alloc = stockholder_allocate(grids, r.proatoms);
    double worst = 0.0;
    for (int a = 0; a < 2; ++a) {
      const auto &s = std::get<SlaterShells>(r.proatoms[a]);
      const auto next = mbisa_update(grids, a, alloc.ratios[a], s);
      for (std::size_t k = 0; k < s.exponents.size(); ++k) {
        worst = std::max(worst, std::abs(next.coefficients[k] - s.coefficients[k]));
        worst = std::max(worst, std::abs(next.exponents[k] - s.exponents[k]));
      }
    }
    out.require(worst <= 1e-6, fmt::format("c = int share, alpha = 3c / int |r| share: "
                                           "max deviation {:.2e}", worst));
  }
  {
    const std::vector<Atom> atoms{{"C", 6, Vec3::Zero()}};
    double worst = 0.0;
    for (const auto &[a0, c0] : {std::pair{2.3, 1.7}, std::pair{0.6, 4.0}, std::pair{9.0, 2.0}}) {
      const AnalyticDensity d{{{Kind::slater_s, Vec3::Zero(), a0, c0}}};
      grid::GridSpec g = diatomic_grid(300, 40.0 / a0 + 5.0);
      const grid::AtomicGridSet grids(atoms, d, g);
      const SlaterShells s{{a0}, {c0}};
      const std::vector<ProAtomModel> pro{s};
      const auto alloc = stockholder_allocate(grids, pro);
      const auto next = mbisa_update(grids, 0, alloc.ratios[0], s);
      worst = std::max({worst, std::abs(next.coefficients[0] - c0) / c0,
                        std::abs(next.exponents[0] - a0) / a0});
    }
    out.require(worst <= 1e-6, fmt::format("exact single Slater shells are fixed points: "
                                           "max relative change {:.2e}", worst));
  }
  return out;
}

// brute-force multipoles of one primitive pair over a Gauss-Legendre box
std::vector<double> box_multipoles(const PrimitiveGaussian &mu,
                                   const PrimitiveGaussian &nu, int lmax) {
  const ProductTerm t = product_center(mu, nu);
  const double half = std::sqrt(42.0 / t.exponent) + 1.0;
  const int n = 80;
  std::vector<double> x, w;
  grid::gauss_legendre(n, x, w);
  const int nb = harmonics::block_size(lmax);
  std::vector<double> out(nb, 0.0), c(nb);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec3 r = t.center + half * Vec3(x[i], x[j], x[k]);
        const double f = w[i] * w[j] * w[k] * mu.value(r) * nu.value(r);
        harmonics::regular_real(lmax, r - t.center, c);
        for (int q = 0; q < nb; ++q)
          out[q] += f * c[q];
      }
  for (double &v : out)
    v *= half * half * half;
  return out;
}

Outcome dma_correctness() {
  Outcome out;
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u(-1.2, 1.2), e(0.4, 2.5);
  std::uniform_int_distribution<int> lpick(0, 2);
  double worst = 0.0;
  bool zeros = true;
  for (int trial = 0; trial < 20; ++trial) {
    const int la = lpick(gen), lb = lpick(gen);
    std::uniform_int_distribution<int> ma(-la, la), mb(-lb, lb);
    const auto mu = PrimitiveGaussian::make(Vec3(u(gen), u(gen), u(gen)), la, ma(gen), e(gen));
    const auto nu = PrimitiveGaussian::make(Vec3(u(gen), u(gen), u(gen)), lb, mb(gen), e(gen));
    const int lmax = 5;
    const auto s = dma::natural_multipoles(product_center(mu, nu), 1.0, lmax);
    const auto ref = box_multipoles(mu, nu, lmax);
    for (int l = 0; l <= lmax; ++l)
      for (int m = -l; m <= l; ++m) {
        const int k = harmonics::flat_index(l, m);
        worst = std::max(worst, std::abs(s.q[k] - ref[k]));
        if (l > la + lb)
          zeros = zeros && s.q[k] == 0.0;
      }
  }
  out.require(worst <= 1e-8, fmt::format("20 random pairs vs 3D quadrature: max error {:.2e}", worst));
  out.require(zeros, "coefficients above l_mu + l_nu are exact zeros");

  std::uniform_real_distribution<double> uq(-1.0, 1.0);
  auto series = dma::MultipoleSeries::zero(Vec3(0.3, -0.2, 0.5), 4);
  for (double &q : series.q)
    q = uq(gen);
  const auto same = dma::m2m_translate(series, series.center, 4);
  double id = 0.0;
  for (std::size_t k = 0; k < series.q.size(); ++k)
    id = std::max(id, std::abs(same.q[k] - series.q[k]));
  out.require(id <= 1e-12, fmt::format("zero-displacement M2M: max change {:.2e}", id));
  const Vec3 B(1.1, 0.4, -0.8), C(-0.7, 1.2, 0.6);
  const auto direct = dma::m2m_translate(series, C, 8);
  const auto hop = dma::m2m_translate(dma::m2m_translate(series, B, 8), C, 8);
  double comp = 0.0;
  for (std::size_t k = 0; k < direct.q.size(); ++k)
    comp = std::max(comp, std::abs(hop.q[k] - direct.q[k]) / std::max(1.0, std::abs(direct.q[k])));
  out.require(comp <= 1e-12, fmt::format("M2M composition A->B->C vs A->C: max error {:.2e}", comp));

  {
    const Vec3 c(0.4, -0.3, 1.1), S(-0.5, 0.2, 0.3);
    auto mono = dma::MultipoleSeries::zero(c, 0);
    mono.at(0, 0) = 1.7;
    const auto t = dma::m2m_translate(mono, S, 1);
    const Vec3 p = 1.7 * (c - S); // int q delta(r - c) (r - S)
    const double err = std::max({std::abs(t.at(0, 0) - 1.7), std::abs(t.at(1, 1) - p.x()),
                                 std::abs(t.at(1, -1) - p.y()), std::abs(t.at(1, 0) - p.z())});
    out.require(err <= 1e-14, fmt::format("monopole to dipole translation vs direct moments: {:.2e}", err));
  }

  const auto config = cli::parse_input(data_dir + "/synthetic_lih.json");
  const auto model = cli::build_density(config);
  const auto &gto = std::get<GtoDensity>(model);
  const auto nat = dma::natural_series(gto, 4);
  double q0 = 0.0;
  Vec3 p0 = Vec3::Zero();
  for (const auto &s : nat) {
    q0 += s.at(0, 0);
    p0 += Vec3(s.at(1, 1), s.at(1, -1), s.at(1, 0)) + s.at(0, 0) * s.center;
  }
  for (auto st : {dma::Strategy::stone, dma::Strategy::vigne_maeder}) {
    const auto r = dma::run_dma(gto, dma::atom_and_bond_sites(config.atoms), st, 4);
    double q = 0.0;
    Vec3 p = Vec3::Zero();
    for (const auto &s : r.sites) {
      q += s.at(0, 0);
      p += Vec3(s.at(1, 1), s.at(1, -1), s.at(1, 0)) + s.at(0, 0) * s.center;
    }
    out.require(std::abs(q - q0) <= 1e-10 && (p - p0).cwiseAbs().maxCoeff() <= 1e-10,
                fmt::format("{}: charge error {:.2e}, origin dipole error {:.2e}",
                            dma::to_string(st), std::abs(q - q0),
                            (p - p0).cwiseAbs().maxCoeff()));
  }

  double esp = 0.0;
  for (double alpha : {0.3, 1.0, 4.0}) {
    GtoDensity g;
    const Vec3 c(0.2, -0.1, 0.3);
    g.primitives = {PrimitiveGaussian::make(c, 0, 0, alpha / 2, 0)};
    g.P = Mat::Identity(1, 1);
    const dma::SiteSet sites{{c}, {"g"}};
    const auto r = dma::run_dma(g, sites, dma::Strategy::stone, 4);
    const double R = 20.0 / std::sqrt(alpha);
    for (const Vec3 &dir : {Vec3(0, 0, 1), Vec3(1, 1, 1).normalized(), Vec3(-0.6, 0.8, 0)}) {
      const double exact = std::erf(std::sqrt(alpha) * R) / R;
      esp = std::max(esp, std::abs(dma::esp_multipole(r.sites, c + R * dir) - exact) / exact);
    }
  }
  out.require(esp <= 1e-8, fmt::format("far-field ESP vs erf(sqrt(a) r)/r at r = 20/sqrt(a): "
                                       "max relative error {:.2e}", esp));
  return out;
}

Outcome desk_scale_substitute() {
  Outcome out;
  out.info("the molecular tables and figures need external quantum-chemistry densities;");
  out.info("substitute: bundled synthetic GTO ingestion and a separable two-center ISA check");
  const auto config = cli::parse_input(data_dir + "/synthetic_lih.json");
  const auto model = cli::build_density(config);
  const double N = total_charge(model);
  out.require(std::abs(N - 4.0) <= 1e-12, fmt::format("synthetic LiH-like GTO: total charge {:.14f}", N));
  const auto grids = cli::build_grids(config, model);
  double q = 0.0;
  {
    // integrate with fixed neutral pro-atoms, which needs no iteration
    std::vector<ProAtomModel> pro{SlaterShells{{3.0}, {3.0}}, SlaterShells{{2.0}, {1.0}}};
    const auto alloc = stockholder_allocate(grids, pro);
    for (int a = 0; a < grids.atom_count(); ++a)
      q += grid::integrate_atom(grids, a, alloc.shares[a]);
  }
  out.require(std::abs(q - N) <= 1e-6, fmt::format("grid integral of the ingested density {:.10f}", q));
  const auto dma_doc = cli::cmd_dma(config);
  out.require(dma_doc["charge_check"]["passed"].get<bool>(), "DMA charge check passes on the ingested density");

  // separable density: neutral Li-like and H-like spherical atoms
  std::vector<double> net;
  const std::vector<double> separations{6.0, 7.0, 8.0, 10.0, 12.0};
  for (double R : separations) {
    const std::vector<Atom> atoms{{"Li", 3, Vec3::Zero()}, {"H", 1, Vec3(0, 0, R)}};
    const AnalyticDensity d{{{Kind::slater_s, Vec3::Zero(), 5.4, 2.0},
                             {Kind::slater_s, Vec3::Zero(), 1.3, 1.0},
                             {Kind::slater_s, Vec3(0, 0, R), 2.0, 1.0}}};
    const grid::AtomicGridSet g(atoms, d, diatomic_grid(300, R + 15.0));
    Options opt;
    opt.tol = 1e-9;
    opt.tol_l2 = 1e-9;
    opt.max_iter = 2000;
    opt.keep_shares = false;
    const auto r = run_partition(Method::isa, atoms, d, g, {}, opt);
    const double qn = std::max(std::abs(3.0 - r.charges[0]), std::abs(1.0 - r.charges[1]));
    net.push_back(qn);
    out.info(fmt::format("R = {:4.1f}: net charges ({:+.3e}, {:+.3e}), {} iterations{}", R,
                         3.0 - r.charges[0], 1.0 - r.charges[1], r.iterations,
                         r.converged ? "" : " (not converged)"));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < net.size(); ++i)
    monotone = monotone && net[i] <= net[i - 1];
  out.require(monotone, "ISA net charges shrink monotonically with separation beyond 6 bohr");
  out.require(net.back() < 1e-3, fmt::format("net charge at 12 bohr {:.2e} < 1e-3", net.back()));
  return out;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char *title;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "GISA reference charges and dipoles", gisa_reference},
      {2, "Lyapunov suite (ISA, L-ISA)", lyapunov_suite},
      {3, "charge conservation, all methods", conservation_suite},
      {4, "vanishing atom within 50 ISA iterations", vanishing_atom},
      {5, "L-ISA well-posedness and derivatives", lisa_wellposed},
      {6, "GISA quadratic program", gisa_qp},
      {7, "MB-ISA fixed-point constraints", mbisa_fixed_point},
      {8, "DMA correctness", dma_correctness},
      {9, "desk-scale substitute for molecular benchmarks", desk_scale_substitute},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o.require(false, fmt::format("exception: {}", e.what()));
    }
    const double dt = seconds_since(t0);
    for (const auto &n : o.notes)
      std::printf("    %s\n", n.c_str());
    std::printf("CRITERION %d %s: %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL",
                c.title, dt);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of 9 criteria failed\n", failed);
  return failed;
}
