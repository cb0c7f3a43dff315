#include <aimkit/commands.h>
#include <aimkit/harmonics.h>
#include <chrono>
#include <cmath>
#include <fmt/core.h>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace aimkit::cli {

namespace {

json vec_json(const Vec3 &v) { return json::array({v.x(), v.y(), v.z()}); }

json mat_json(const Mat3 &m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i)
    rows.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

json proatom_json(int a, const ProAtomModel &p) {
  json j;
  j["atom"] = a;
  std::visit(
      [&](const auto &m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Tabulated>) {
          j["model"] = "tabulated";
          j["rmax"] = m.rmax;
        } else {
          j["model"] = std::is_same_v<T, GaussianExpansion> ? "gaussian"
                                                            : "slater";
          j["exponents"] = m.exponents;
          j["coefficients"] = m.coefficients;
        }
      },
      p);
  j["population"] = charge(p);
  return j;
}

json grid_json(const grid::GridSpec &spec) {
  return emit_config([&] {
           RunConfig c;
           c.grid = spec;
           return c;
         }())["grid"];
}

} // namespace

grid::AtomicGridSet build_grids(const RunConfig &config,
                                const DensityModel &density) {
  return grid::AtomicGridSet(config.atoms, density, config.grid);
}

partition::MethodParams build_params(const RunConfig &config,
                                     const grid::AtomicGridSet &grids) {
  using partition::Method;
  const auto method = partition::method_from_string(config.method.name);
  const int M = static_cast<int>(config.atoms.size());
  partition::MethodParams params;
  params.exponents = config.method.exponents;
  params.initial_coefficients = config.method.initial_coefficients;
  params.initial_charges = config.method.initial_charges;

  if (method == Method::hirshfeld || method == Method::hirshfeld_i) {
    std::map<int, HirshfeldITable> by_Z;
    for (const auto &s : config.method.synthetic_tables) {
      int a = -1;
      for (int b = 0; b < M && a < 0; ++b)
        if (config.atoms[b].Z == s.Z)
          a = b;
      if (a < 0)
        continue;
      by_Z[s.Z] = synthetic_slater_family(s.Z, s.exponent, s.nmax,
                                          grids.atom(a).radial);
    }
    for (const auto &path : config.method.tables) {
      auto f = read_proatom_file(resolve_path(config, path));
      auto &t = by_Z[f.Z];
      t.Z = f.Z;
      t.by_n[f.n] = std::move(f.table);
    }
    std::vector<std::string> missing;
    for (const auto &atom : config.atoms) {
      auto it = by_Z.find(atom.Z);
      if (it == by_Z.end() || it->second.by_n.empty()) {
        missing.push_back(
            fmt::format("no pro-atom table for {} (Z={})", atom.symbol, atom.Z));
        continue;
      }
      params.tables.push_back(it->second);
    }
    if (!missing.empty())
      throw ConfigError(missing);
    if (method == Method::hirshfeld) {
      for (int a = 0; a < M; ++a) {
        const double n = a < static_cast<int>(params.initial_charges.size())
                             ? params.initial_charges[a]
                             : config.atoms[a].Z;
        params.proatoms.push_back(hirshfeld_i_interpolate(n, params.tables[a]));
      }
    }
  }
  return params;
}

PartitionRun cmd_partition(const RunConfig &config, kernels::Exec exec) {
  const auto density = build_density(config);
  const auto grids = build_grids(config, density);
  const auto params = build_params(config, grids);
  const auto method = partition::method_from_string(config.method.name);

  partition::Options opt;
  opt.tol = config.tol;
  opt.tol_l2 = config.tol_l2;
  opt.max_iter = config.max_iter;
  opt.exec = exec;
  opt.keep_shares = false;

  PartitionRun run;
  run.result =
      partition::run_partition(method, config.atoms, density, grids, params, opt);
  const auto &r = run.result;

  json doc;
  doc["conventions"] = {
      {"version", conventions_version},
      {"units", "bohr"},
      {"population", "electrons assigned to the atom (positive)"},
      {"net_charge", "Z - population"},
      {"dipole", "integral of rho_a (r - R_a), electron density sign"},
      {"second_moment", "integral of rho_a (r - R_a)(r - R_a)^T"}};
  doc["config"] = emit_config(config);
  doc["grid"] = grid_json(config.grid);
  doc["method"] = partition::to_string(r.method);
  doc["converged"] = r.converged;
  doc["iterations"] = r.iterations;
  doc["density_charge"] = r.density_charge;
  doc["lost_charge"] = r.lost_charge;

  json atoms = json::array();
  for (std::size_t a = 0; a < config.atoms.size(); ++a) {
    const auto &at = config.atoms[a];
    const auto &m = r.moments[a];
    atoms.push_back({{"index", a},
                     {"symbol", at.symbol},
                     {"Z", at.Z},
                     {"position", vec_json(at.position)},
                     {"population", r.charges[a]},
                     {"net_charge", at.Z - r.charges[a]},
                     {"dipole", vec_json(m.p)},
                     {"second_moment", mat_json(m.Q)},
                     {"quadrupole_traceless", mat_json(traceless_quadrupole(m.Q))}});
  }
  doc["atoms"] = atoms;

  json pro = json::array();
  for (std::size_t a = 0; a < r.proatoms.size(); ++a)
    pro.push_back(proatom_json(static_cast<int>(a), r.proatoms[a]));
  doc["proatoms"] = pro;

  json profiles = json::array();
  for (std::size_t a = 0; a < r.profiles.size(); ++a)
    profiles.push_back(
        {{"atom", a}, {"r", r.profile_nodes[a]}, {"density", r.profiles[a]}});
  doc["profiles"] = profiles;

  json trace = json::array();
  for (const auto &t : r.trace)
    trace.push_back({{"iteration", t.iteration},
                     {"populations", t.charges},
                     {"total_population", t.total_charge},
                     {"entropy", t.entropy},
                     {"entropy_decrease", t.entropy_decrease},
                     {"lyapunov_bound", t.lyapunov_bound},
                     {"max_population_change", t.max_charge_change},
                     {"lost_charge", t.lost_charge}});
  doc["trace"] = trace;
  doc["warnings"] = r.warnings;
  run.document = std::move(doc);
  return run;
}

dma::SiteSet build_sites(const RunConfig &config) {
  if (config.dma.sites == "atoms")
    return dma::atom_sites(config.atoms);
  if (config.dma.sites == "atoms+bonds")
    return dma::atom_and_bond_sites(config.atoms);
  const double scale =
      config.declared_units == "angstrom" ? units::bohr_per_angstrom : 1.0;
  return dma::read_site_file(resolve_path(config, config.dma.sites), scale);
}

namespace {

GtoDensity gto_density(const RunConfig &config) {
  auto d = build_density(config);
  if (auto *g = std::get_if<GtoDensity>(&d))
    return *g;
  return analytic_to_gto(std::get<AnalyticDensity>(d));
}

} // namespace

json cmd_dma(const RunConfig &config, bool debug_weights) {
  const auto density = gto_density(config);
  const auto sites = build_sites(config);
  const auto strategy = dma::strategy_from_string(config.dma.strategy);
  const int lmax = config.dma.lmax;
  const auto res = dma::run_dma(density, sites, strategy, lmax);

  json doc;
  doc["conventions"] = {
      {"version", conventions_version},
      {"units", "bohr"},
      {"multipoles", "Q_lm = integral of rho C_lm(r - S), real Racah-normalized "
                     "regular harmonics, m = -l..l; electron density sign"}};
  doc["config"] = emit_config(config);
  doc["strategy"] = dma::to_string(strategy);
  doc["lmax"] = lmax;
  doc["truncated"] = res.truncated;
  doc["max_pair_l"] = res.max_pair_l;
  doc["pairs"] = res.pairs;

  double site_total = 0.0;
  Vec3 site_dipole = Vec3::Zero();
  json out = json::array();
  for (int s = 0; s < sites.size(); ++s) {
    const auto &q = res.sites[s];
    json ml = json::array();
    for (int l = 0; l <= lmax; ++l) {
      json row = json::array();
      for (int m = -l; m <= l; ++m)
        row.push_back(q.at(l, m));
      ml.push_back(row);
    }
    out.push_back({{"label", sites.labels[s]},
                   {"position", vec_json(sites.positions[s])},
                   {"multipoles", ml}});
    site_total += q.at(0, 0);
    if (lmax >= 1)
      site_dipole += q.at(0, 0) * sites.positions[s] +
                     Vec3(q.at(1, 1), q.at(1, -1), q.at(1, 0));
  }
  doc["sites"] = out;

  const double exact = total_charge(density);
  const double tol = 1e-10 * std::max(1.0, std::abs(exact));
  doc["charge_check"] = {{"density", exact},
                         {"sites", site_total},
                         {"difference", site_total - exact},
                         {"tolerance", tol},
                         {"passed", std::abs(site_total - exact) <= tol}};
  if (lmax >= 1)
    doc["origin_dipole"] = vec_json(site_dipole);

  if (debug_weights) {
    json dump = json::array();
    const int n = static_cast<int>(density.primitives.size());
    for (int mu = 0; mu < n; ++mu)
      for (int nu = mu; nu < n; ++nu) {
        if (density.P(mu, nu) == 0.0 && density.P(nu, mu) == 0.0)
          continue;
        const auto term = product_center(density.primitives[mu],
                                         density.primitives[nu], mu, nu);
        dump.push_back(
            {{"mu", mu},
             {"nu", nu},
             {"natural_center", vec_json(term.center)},
             {"weights", dma::redistribution_weights(strategy, term.center,
                                                     sites)}});
      }
    doc["debug_weights"] = dump;
  }
  return doc;
}

void cmd_profile(const json &result, int atom, std::ostream &out) {
  if (!result.contains("profiles"))
    throw ValidationError("result document has no profiles");
  const json *p = nullptr;
  for (const auto &e : result["profiles"])
    if (e.value("atom", -1) == atom)
      p = &e;
  if (!p)
    throw ValidationError(fmt::format("unknown atom index {}", atom));
  const auto r = (*p)["r"].get<std::vector<double>>();
  const auto w = (*p)["density"].get<std::vector<double>>();
  if (r.size() != w.size())
    throw ValidationError("profile columns differ in length");
  out << fmt::format("# atom {} profile\n# r log(4 pi r^2 w(r))\n", atom);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double y = 4.0 * pi * r[i] * r[i] * w[i];
    if (!(y > 0.0) || !std::isfinite(std::log(y))) {
      out << fmt::format("# dropped r={:.17g} (log of {:.3g} is -inf)\n", r[i],
                         y);
      continue;
    }
    out << fmt::format("{:.17g} {:.17g}\n", r[i], std::log(y));
  }
}

std::vector<Vec3> read_points(const std::string &path, double scale) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError(fmt::format("cannot open points file '{}'", path));
  std::vector<Vec3> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
      continue;
    std::istringstream ss(line);
    Vec3 p;
    if (!(ss >> p.x() >> p.y() >> p.z()))
      throw ValidationError(
          fmt::format("{}:{}: expected three coordinates", path, lineno));
    pts.push_back(scale * p);
  }
  return pts;
}

std::vector<EspRow> cmd_esp_compare(const RunConfig &config,
                                    std::span<const Vec3> points, int lmax) {
  const auto model = build_density(config);
  const auto gto = gto_density(config);
  const auto sites = build_sites(config);
  for (const auto &p : points)
    for (int s = 0; s < sites.size(); ++s)
      if ((p - sites.positions[s]).norm() <= dma::site_tolerance)
        throw ValidationError(fmt::format(
            "point ({}, {}, {}) coincides with site {}", p.x(), p.y(), p.z(),
            sites.labels[s]));
  const auto res = dma::run_dma(gto, sites,
                                dma::strategy_from_string(config.dma.strategy),
                                lmax);
  // the 3D potential integral needs full angular grids
  RunConfig full = config;
  auto lebedev = [](grid::AtomGridSpec &g) {
    if (g.angular == grid::AngularKind::axial) {
      g.angular = grid::AngularKind::lebedev;
      g.order = grid::lebedev_orders().back();
    }
  };
  lebedev(full.grid.base);
  for (auto &[a, g] : full.grid.per_atom)
    lebedev(g);
  const auto grids = build_grids(full, model);
  std::vector<EspRow> rows;
  for (const auto &p : points) {
    EspRow row;
    row.point = p;
    const auto ex = dma::esp_exact(model, grids, p);
    row.exact = ex.value;
    row.reliable = ex.reliable;
    row.multipole = dma::esp_multipole(res.sites, p);
    row.relative_error =
        std::abs(row.multipole - row.exact) / std::max(std::abs(row.exact), 1e-300);
    rows.push_back(row);
  }
  return rows;
}

void write_esp_table(std::span<const EspRow> rows, std::ostream &out) {
  out << "# x y z exact multipole relerr reliable\n";
  for (const auto &r : rows)
    out << fmt::format("{:.10g} {:.10g} {:.10g} {:.17g} {:.17g} {:.6e} {}\n",
                       r.point.x(), r.point.y(), r.point.z(), r.exact,
                       r.multipole, r.relative_error, r.reliable ? 1 : 0);
}

} // namespace aimkit::cli
