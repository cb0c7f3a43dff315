#include <aimkit/config.h>
#include <aimkit/partition.h>
#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fmt/core.h>
#include <fstream>
#include <sstream>

namespace aimkit::cli {

namespace {

const std::array<const char *, 54> element_symbols = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti",
    "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe"};

int symbol_to_Z(const std::string &s) {
  for (std::size_t i = 0; i < element_symbols.size(); ++i)
    if (s == element_symbols[i])
      return static_cast<int>(i) + 1;
  return 0;
}

std::string join(const std::vector<std::string> &v) {
  std::string out;
  for (const auto &s : v)
    out += "\n  - " + s;
  return out;
}

// Collects errors while reading a document.
struct Reader {
  std::vector<std::string> errors;

  void fail(const std::string &where, const std::string &what) {
    errors.push_back(where.empty() ? what : where + ": " + what);
  }

  template <class T>
  T get(const json &obj, const char *key, const std::string &where,
        T fallback) {
    if (!obj.is_object() || !obj.contains(key))
      return fallback;
    try {
      return obj.at(key).get<T>();
    } catch (const std::exception &) {
      fail(where, fmt::format("'{}' has the wrong type", key));
      return fallback;
    }
  }

  template <class T>
  bool require(const json &obj, const char *key, const std::string &where,
               T &out) {
    if (!obj.is_object() || !obj.contains(key)) {
      fail(where, fmt::format("missing '{}'", key));
      return false;
    }
    try {
      out = obj.at(key).get<T>();
      return true;
    } catch (const std::exception &) {
      fail(where, fmt::format("'{}' has the wrong type", key));
      return false;
    }
  }

  bool vec3(const json &obj, const char *key, const std::string &where,
            Vec3 &out, bool required = true) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required)
        fail(where, fmt::format("missing '{}'", key));
      return false;
    }
    const auto &v = obj.at(key);
    if (!v.is_array() || v.size() != 3 ||
        !std::all_of(v.begin(), v.end(),
                     [](const json &x) { return x.is_number(); })) {
      fail(where, fmt::format("'{}' must be an array of 3 numbers", key));
      return false;
    }
    out = Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    if (!out.allFinite()) {
      fail(where, fmt::format("'{}' must be finite", key));
      return false;
    }
    return true;
  }
};

json vec3_json(const Vec3 &v) { return json::array({v.x(), v.y(), v.z()}); }

grid::AtomGridSpec read_atom_grid(Reader &rd, const json &g,
                                  const std::string &where,
                                  grid::AtomGridSpec s) {
  s.nr = rd.get<int>(g, "nr", where, s.nr);
  s.rmax = rd.get<double>(g, "rmax", where, s.rmax);
  const auto radial = rd.get<std::string>(
      g, "radial", where,
      s.radial == grid::RadialKind::log ? "log" : "gauss_legendre");
  if (radial == "gauss_legendre")
    s.radial = grid::RadialKind::gauss_legendre;
  else if (radial == "log")
    s.radial = grid::RadialKind::log;
  else
    rd.fail(where, fmt::format("unknown radial grid '{}'", radial));
  const auto angular = rd.get<std::string>(
      g, "angular", where,
      s.angular == grid::AngularKind::axial ? "axial" : "lebedev");
  const bool was_axial = s.angular == grid::AngularKind::axial;
  if (angular == "lebedev")
    s.angular = grid::AngularKind::lebedev;
  else if (angular == "axial")
    s.angular = grid::AngularKind::axial;
  else
    rd.fail(where, fmt::format("unknown angular grid '{}'", angular));
  int default_order = s.order;
  if (s.angular == grid::AngularKind::axial && !was_axial)
    default_order = 200;
  if (s.angular == grid::AngularKind::lebedev && was_axial)
    default_order = 170;
  s.order = rd.get<int>(g, "order", where, default_order);
  if (s.nr < 2)
    rd.fail(where, fmt::format("nr must be >= 2 (got {})", s.nr));
  if (!(s.rmax > 0.0))
    rd.fail(where, "rmax must be > 0");
  if (s.angular == grid::AngularKind::lebedev) {
    const auto orders = grid::lebedev_orders();
    if (std::find(orders.begin(), orders.end(), s.order) == orders.end())
      rd.fail(where, fmt::format("unsupported Lebedev order {}", s.order));
  } else if (s.order < 1) {
    rd.fail(where, "axial order must be >= 1");
  }
  return s;
}

json atom_grid_json(const grid::AtomGridSpec &s) {
  json g;
  g["nr"] = s.nr;
  g["rmax"] = s.rmax;
  g["radial"] = s.radial == grid::RadialKind::log ? "log" : "gauss_legendre";
  g["angular"] = s.angular == grid::AngularKind::axial ? "axial" : "lebedev";
  g["order"] = s.order;
  return g;
}

std::vector<std::vector<double>> read_nested(Reader &rd, const json &obj,
                                             const char *key,
                                             const std::string &where) {
  return rd.get<std::vector<std::vector<double>>>(obj, key, where, {});
}

bool mat_equal(const Mat &a, const Mat &b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool atoms_equal(const std::vector<Atom> &a, const std::vector<Atom> &b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].symbol != b[i].symbol || a[i].Z != b[i].Z ||
        a[i].position != b[i].position)
      return false;
  return true;
}

bool density_equal(const DensitySpec &a, const DensitySpec &b) {
  if (a.kind != b.kind || !mat_equal(a.P, b.P))
    return false;
  if (a.analytic.terms.size() != b.analytic.terms.size() ||
      a.primitives.size() != b.primitives.size() ||
      a.shells.size() != b.shells.size())
    return false;
  for (std::size_t i = 0; i < a.analytic.terms.size(); ++i) {
    const auto &x = a.analytic.terms[i], &y = b.analytic.terms[i];
    if (x.kind != y.kind || x.center != y.center || x.exponent != y.exponent ||
        x.coefficient != y.coefficient)
      return false;
  }
  for (std::size_t i = 0; i < a.primitives.size(); ++i) {
    const auto &x = a.primitives[i], &y = b.primitives[i];
    if (x.center != y.center || x.l != y.l || x.m != y.m ||
        x.exponent != y.exponent || x.atom != y.atom)
      return false;
  }
  for (std::size_t i = 0; i < a.shells.size(); ++i) {
    const auto &x = a.shells[i], &y = b.shells[i];
    if (x.atom != y.atom || x.center != y.center || x.l != y.l ||
        x.exponents != y.exponents || x.coefficients != y.coefficients)
      return false;
  }
  return true;
}

Mat read_matrix(Reader &rd, const json &obj, const std::string &where) {
  std::vector<std::vector<double>> rows;
  if (!rd.require(obj, "P", where, rows))
    return Mat();
  const auto n = static_cast<Eigen::Index>(rows.size());
  Mat P(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n) {
      rd.fail(where, "P must be a square matrix");
      return Mat();
    }
    for (Eigen::Index j = 0; j < n; ++j)
      P(i, j) = rows[i][j];
  }
  return P;
}

json matrix_json(const Mat &P) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < P.cols(); ++j)
      row.push_back(P(i, j));
    rows.push_back(row);
  }
  return rows;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : ValidationError(fmt::format("{} configuration error(s):{}",
                                  errors.size(), join(errors))),
      errors_(std::move(errors)) {}

bool operator==(const RunConfig &a, const RunConfig &b) {
  return a.units == b.units && a.declared_units == b.declared_units &&
         atoms_equal(a.atoms, b.atoms) && density_equal(a.density, b.density) &&
         a.method == b.method && a.grid == b.grid && a.tol == b.tol &&
         a.tol_l2 == b.tol_l2 && a.max_iter == b.max_iter && a.dma == b.dma &&
         a.output == b.output;
}

RunConfig parse_config(const json &doc, const std::string &base_dir) {
  Reader rd;
  RunConfig c;
  c.base_dir = base_dir;
  if (!doc.is_object())
    throw ConfigError({"document must be a JSON object"});

  const auto units = rd.get<std::string>(doc, "units", "", "bohr");
  double scale = 1.0;
  if (units == "angstrom")
    scale = units::bohr_per_angstrom;
  else if (units != "bohr")
    rd.fail("units", fmt::format("unknown units '{}'", units));
  c.declared_units = rd.get<std::string>(doc, "declared_units", "", units);
  if (c.declared_units != "bohr" && c.declared_units != "angstrom")
    rd.fail("declared_units",
            fmt::format("unknown units '{}'", c.declared_units));
  c.units = "bohr";

  // atoms
  if (!doc.contains("atoms") || !doc["atoms"].is_array() ||
      doc["atoms"].empty()) {
    rd.fail("atoms", "a nonempty array is required");
  } else {
    int i = 0;
    for (const auto &a : doc["atoms"]) {
      const std::string where = fmt::format("atom {}", i);
      Atom atom;
      atom.symbol = rd.get<std::string>(a, "symbol", where, "");
      atom.Z = rd.get<int>(a, "Z", where, symbol_to_Z(atom.symbol));
      if (atom.symbol.empty() && atom.Z >= 1 && atom.Z <= 54)
        atom.symbol = element_symbols[atom.Z - 1];
      if (atom.Z < 1)
        rd.fail(where, "nuclear charge Z must be >= 1 (give Z or a known "
                       "symbol)");
      if (rd.vec3(a, "position", where, atom.position))
        atom.position *= scale;
      c.atoms.push_back(atom);
      ++i;
    }
  }
  const int M = static_cast<int>(c.atoms.size());

  // density
  if (!doc.contains("density") || !doc["density"].is_object()) {
    rd.fail("density", "an object is required");
  } else {
    const auto &d = doc["density"];
    c.density.kind = rd.get<std::string>(d, "kind", "density", "analytic");
    if (c.density.kind == "analytic") {
      if (!d.contains("terms") || !d["terms"].is_array() ||
          d["terms"].empty())
        rd.fail("density", "analytic density needs a nonempty 'terms' array");
      else {
        int i = 0;
        for (const auto &t : d["terms"]) {
          const std::string where = fmt::format("density term {}", i++);
          AnalyticTerm term;
          const auto kind = rd.get<std::string>(t, "kind", where, "gaussian_s");
          if (kind == "gaussian_s")
            term.kind = AnalyticTerm::Kind::gaussian_s;
          else if (kind == "slater_s")
            term.kind = AnalyticTerm::Kind::slater_s;
          else
            rd.fail(where, fmt::format("unknown term kind '{}'", kind));
          if (t.contains("atom")) {
            const int a = rd.get<int>(t, "atom", where, -1);
            if (a < 0 || a >= M)
              rd.fail(where, fmt::format("atom index {} out of range", a));
            else
              term.center = c.atoms[a].position;
          } else if (rd.vec3(t, "center", where, term.center)) {
            term.center *= scale;
          }
          rd.require(t, "exponent", where, term.exponent);
          term.coefficient = rd.get<double>(t, "coefficient", where, 1.0);
          if (!(term.exponent > 0.0))
            rd.fail(where, "exponent must be > 0");
          if (!(term.coefficient >= 0.0))
            rd.fail(where, "coefficient must be >= 0");
          c.density.analytic.terms.push_back(term);
        }
      }
    } else if (c.density.kind == "gto") {
      if (!d.contains("primitives") || !d["primitives"].is_array())
        rd.fail("density", "gto density needs a 'primitives' array");
      else {
        int i = 0;
        for (const auto &p : d["primitives"]) {
          const std::string where = fmt::format("primitive {}", i++);
          PrimitiveGaussian g;
          g.atom = rd.get<int>(p, "atom", where, -1);
          if (p.contains("center")) {
            if (rd.vec3(p, "center", where, g.center))
              g.center *= scale;
          } else if (g.atom >= 0 && g.atom < M) {
            g.center = c.atoms[g.atom].position;
          } else {
            rd.fail(where, "needs 'center' or a valid 'atom' index");
          }
          g.l = rd.get<int>(p, "l", where, 0);
          g.m = rd.get<int>(p, "m", where, 0);
          rd.require(p, "exponent", where, g.exponent);
          if (g.l < 0 || std::abs(g.m) > g.l || !(g.exponent > 0.0))
            rd.fail(where, "requires l >= 0, |m| <= l and exponent > 0");
          else
            g.norm = primitive_norm(g.l, g.exponent);
          c.density.primitives.push_back(g);
        }
      }
      c.density.P = read_matrix(rd, d, "density");
      if (c.density.P.rows() !=
          static_cast<Eigen::Index>(c.density.primitives.size()))
        rd.fail("density", fmt::format("P is {}x{} but there are {} primitives",
                                       c.density.P.rows(), c.density.P.cols(),
                                       c.density.primitives.size()));
    } else if (c.density.kind == "gto_contracted") {
      if (!d.contains("shells") || !d["shells"].is_array())
        rd.fail("density", "gto_contracted density needs a 'shells' array");
      else {
        int i = 0;
        for (const auto &s : d["shells"]) {
          const std::string where = fmt::format("shell {}", i++);
          ContractedShell sh;
          sh.atom = rd.get<int>(s, "atom", where, -1);
          if (s.contains("center")) {
            if (rd.vec3(s, "center", where, sh.center))
              sh.center *= scale;
          } else if (sh.atom >= 0 && sh.atom < M) {
            sh.center = c.atoms[sh.atom].position;
          } else {
            rd.fail(where, "needs 'center' or a valid 'atom' index");
          }
          sh.l = rd.get<int>(s, "l", where, 0);
          rd.require(s, "exponents", where, sh.exponents);
          rd.require(s, "coefficients", where, sh.coefficients);
          if (sh.exponents.size() != sh.coefficients.size())
            rd.fail(where, "exponents and coefficients differ in length");
          c.density.shells.push_back(sh);
        }
      }
      c.density.P = read_matrix(rd, d, "density");
      if (c.density.P.rows() != contracted_count(c.density.shells))
        rd.fail("density", fmt::format(
                               "P is {}x{} but the shells define {} functions",
                               c.density.P.rows(), c.density.P.cols(),
                               contracted_count(c.density.shells)));
    } else {
      rd.fail("density", fmt::format("unknown density kind '{}'", c.density.kind));
    }
  }

  // method
  const json method = doc.contains("method") ? doc["method"] : json::object();
  c.method.name = rd.get<std::string>(method, "name", "method", "isa");
  try {
    partition::method_from_string(c.method.name);
  } catch (const ValidationError &e) {
    rd.fail("method", e.what());
  }
  if (method.contains("shells") && method["shells"].is_number_integer())
    c.method.shells.assign(M, method["shells"].get<int>());
  else
    c.method.shells = rd.get<std::vector<int>>(method, "shells", "method", {});
  c.method.exponents = read_nested(rd, method, "exponents", "method");
  c.method.initial_coefficients =
      read_nested(rd, method, "initial_coefficients", "method");
  c.method.initial_charges =
      rd.get<std::vector<double>>(method, "initial_charges", "method", {});
  c.method.tables =
      rd.get<std::vector<std::string>>(method, "tables", "method", {});
  if (method.contains("synthetic_tables")) {
    for (const auto &t : method["synthetic_tables"]) {
      SyntheticTableSpec s;
      rd.require(t, "Z", "synthetic table", s.Z);
      rd.require(t, "exponent", "synthetic table", s.exponent);
      s.nmax = rd.get<int>(t, "nmax", "synthetic table", s.Z + 1);
      c.method.synthetic_tables.push_back(s);
    }
  }
  const bool shell_method = c.method.name == "gisa" ||
                            c.method.name == "lisa" ||
                            c.method.name == "mbisa";
  if (!c.method.shells.empty() &&
      static_cast<int>(c.method.shells.size()) != M)
    rd.fail("method", fmt::format("'shells' has {} entries for {} atoms",
                                  c.method.shells.size(), M));
  if (!c.method.exponents.empty() &&
      static_cast<int>(c.method.exponents.size()) != M)
    rd.fail("method", fmt::format("'exponents' has {} entries for {} atoms",
                                  c.method.exponents.size(), M));
  if (!c.method.initial_coefficients.empty() &&
      static_cast<int>(c.method.initial_coefficients.size()) != M)
    rd.fail("method",
            fmt::format("'initial_coefficients' has {} entries for {} atoms",
                        c.method.initial_coefficients.size(), M));
  if (shell_method) {
    for (int a = 0; a < M; ++a) {
      const int Z = c.atoms[a].Z;
      const int shells = a < static_cast<int>(c.method.shells.size())
                             ? c.method.shells[a]
                             : (a < static_cast<int>(c.method.exponents.size())
                                    ? static_cast<int>(c.method.exponents[a].size())
                                    : partition::default_shell_count(std::max(Z, 1)));
      const std::string where =
          fmt::format("atom {} ({})", a, c.atoms[a].symbol);
      if (shells < 1)
        rd.fail(where, "shell count must be >= 1");
      if (a < static_cast<int>(c.method.exponents.size())) {
        const auto &e = c.method.exponents[a];
        if (static_cast<int>(e.size()) != shells)
          rd.fail(where, fmt::format("{} shells but {} exponents given",
                                     shells, e.size()));
        for (double x : e)
          if (!(x > 0.0))
            rd.fail(where, "exponents must be > 0");
      }
      if (a < static_cast<int>(c.method.initial_coefficients.size())) {
        const auto &ic = c.method.initial_coefficients[a];
        if (static_cast<int>(ic.size()) != shells)
          rd.fail(where, fmt::format("{} shells but {} initial coefficients",
                                     shells, ic.size()));
        for (double x : ic)
          if (!(x >= 0.0))
            rd.fail(where, "initial coefficients must be >= 0");
      }
    }
    // make exponents explicit in canonical form
    if (rd.errors.empty() && c.method.exponents.empty()) {
      for (int a = 0; a < M; ++a) {
        const int shells = c.method.shells.empty()
                               ? partition::default_shell_count(c.atoms[a].Z)
                               : c.method.shells[a];
        c.method.exponents.push_back(
            partition::default_exponents(c.atoms[a].Z, shells));
      }
    }
    if (rd.errors.empty() && c.method.shells.empty())
      for (const auto &e : c.method.exponents)
        c.method.shells.push_back(static_cast<int>(e.size()));
  }
  if ((c.method.name == "hirshfeld" || c.method.name == "hirshfeld-i") &&
      c.method.tables.empty() && c.method.synthetic_tables.empty())
    rd.fail("method", fmt::format("{} needs pro-atom 'tables' or "
                                  "'synthetic_tables'",
                                  c.method.name));
  for (const auto &t : c.method.tables) {
    const auto path = (std::filesystem::path(base_dir) / t).lexically_normal();
    if (!std::filesystem::exists(std::filesystem::path(t).is_absolute()
                                     ? std::filesystem::path(t)
                                     : path))
      rd.fail("method", fmt::format("pro-atom table '{}' does not exist", t));
  }

  // grid
  const json g = doc.contains("grid") ? doc["grid"] : json::object();
  c.grid.base = read_atom_grid(rd, g, "grid", grid::AtomGridSpec{});
  if (g.contains("per_atom")) {
    for (const auto &[key, val] : g["per_atom"].items()) {
      int a = -1;
      try {
        a = std::stoi(key);
      } catch (const std::exception &) {
      }
      if (a < 0 || a >= M) {
        rd.fail("grid", fmt::format("per_atom key '{}' is not an atom index", key));
        continue;
      }
      c.grid.per_atom[a] = read_atom_grid(rd, val, fmt::format("grid atom {}", a),
                                          c.grid.base);
    }
  }
  bool axial = false;
  for (int a = 0; a < M; ++a)
    axial |= c.grid.for_atom(a).angular == grid::AngularKind::axial;
  if (axial)
    for (int a = 0; a < M; ++a)
      if (c.atoms[a].position.head<2>().cwiseAbs().maxCoeff() > 1e-12)
        rd.fail(fmt::format("atom {}", a),
                "axial grids need every atom on the z axis");

  // tolerances
  const json tol = doc.contains("tolerances") ? doc["tolerances"] : json::object();
  c.tol = rd.get<double>(tol, "tol", "tolerances", c.tol);
  c.tol_l2 = rd.get<double>(tol, "tol_l2", "tolerances", c.tol_l2);
  c.max_iter = rd.get<int>(tol, "max_iter", "tolerances", c.max_iter);
  if (!(c.tol > 0.0) || !(c.tol_l2 > 0.0))
    rd.fail("tolerances", "tolerances must be > 0");
  if (c.max_iter < 1)
    rd.fail("tolerances", "max_iter must be >= 1");

  // dma
  const json dma = doc.contains("dma") ? doc["dma"] : json::object();
  c.dma.sites = rd.get<std::string>(dma, "sites", "dma", c.dma.sites);
  c.dma.strategy = rd.get<std::string>(dma, "strategy", "dma", c.dma.strategy);
  c.dma.lmax = rd.get<int>(dma, "lmax", "dma", c.dma.lmax);
  if (c.dma.strategy != "stone" && c.dma.strategy != "vigne-maeder")
    rd.fail("dma", fmt::format("unknown strategy '{}'", c.dma.strategy));
  if (c.dma.lmax < 0)
    rd.fail("dma", "lmax must be >= 0");

  const json out = doc.contains("output") ? doc["output"] : json::object();
  c.output = rd.get<std::string>(out, "result", "output", "");

  if (!rd.errors.empty())
    throw ConfigError(rd.errors);
  return c;
}

RunConfig parse_input(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError({fmt::format("cannot open input '{}'", path)});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError({fmt::format("malformed JSON in '{}': {}", path, e.what())});
  }
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(doc, dir.empty() ? "." : dir.string());
}

json emit_config(const RunConfig &c) {
  json doc;
  doc["units"] = "bohr";
  doc["declared_units"] = c.declared_units;
  json atoms = json::array();
  for (const auto &a : c.atoms)
    atoms.push_back({{"symbol", a.symbol}, {"Z", a.Z},
                     {"position", vec3_json(a.position)}});
  doc["atoms"] = atoms;

  json d;
  d["kind"] = c.density.kind;
  if (c.density.kind == "analytic") {
    json terms = json::array();
    for (const auto &t : c.density.analytic.terms)
      terms.push_back(
          {{"kind", t.kind == AnalyticTerm::Kind::gaussian_s ? "gaussian_s"
                                                             : "slater_s"},
           {"center", vec3_json(t.center)},
           {"exponent", t.exponent},
           {"coefficient", t.coefficient}});
    d["terms"] = terms;
  } else if (c.density.kind == "gto") {
    json prims = json::array();
    for (const auto &p : c.density.primitives)
      prims.push_back({{"center", vec3_json(p.center)}, {"atom", p.atom},
                       {"l", p.l}, {"m", p.m}, {"exponent", p.exponent}});
    d["primitives"] = prims;
    d["P"] = matrix_json(c.density.P);
  } else {
    json shells = json::array();
    for (const auto &s : c.density.shells)
      shells.push_back({{"atom", s.atom}, {"center", vec3_json(s.center)},
                        {"l", s.l}, {"exponents", s.exponents},
                        {"coefficients", s.coefficients}});
    d["shells"] = shells;
    d["P"] = matrix_json(c.density.P);
  }
  doc["density"] = d;

  json m;
  m["name"] = c.method.name;
  m["shells"] = c.method.shells;
  m["exponents"] = c.method.exponents;
  m["initial_coefficients"] = c.method.initial_coefficients;
  m["initial_charges"] = c.method.initial_charges;
  m["tables"] = c.method.tables;
  json syn = json::array();
  for (const auto &s : c.method.synthetic_tables)
    syn.push_back({{"Z", s.Z}, {"exponent", s.exponent}, {"nmax", s.nmax}});
  m["synthetic_tables"] = syn;
  doc["method"] = m;

  json g = atom_grid_json(c.grid.base);
  json per = json::object();
  for (const auto &[a, s] : c.grid.per_atom)
    per[std::to_string(a)] = atom_grid_json(s);
  g["per_atom"] = per;
  doc["grid"] = g;

  doc["tolerances"] = {{"tol", c.tol}, {"tol_l2", c.tol_l2},
                       {"max_iter", c.max_iter}};
  doc["dma"] = {{"sites", c.dma.sites}, {"strategy", c.dma.strategy},
                {"lmax", c.dma.lmax}};
  doc["output"] = {{"result", c.output}};
  return doc;
}

DensityModel build_density(const RunConfig &c) {
  if (c.density.kind == "analytic")
    return c.density.analytic;
  if (c.density.kind == "gto") {
    GtoDensity d;
    for (const auto &p : c.density.primitives)
      d.primitives.push_back(
          PrimitiveGaussian::make(p.center, p.l, p.m, p.exponent, p.atom));
    d.P = c.density.P;
    validate(d);
    return d;
  }
  auto d = to_primitive_matrix(c.density.shells, c.density.P);
  validate(d);
  return d;
}

GtoDensity analytic_to_gto(const AnalyticDensity &d) {
  GtoDensity g;
  const auto n = static_cast<Eigen::Index>(d.terms.size());
  g.P = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto &t = d.terms[i];
    if (t.kind != AnalyticTerm::Kind::gaussian_s)
      throw ValidationError(
          "only Gaussian analytic terms have an exact GTO form");
    // normalized s primitive squared is c (a/pi)^{3/2} e^{-a r^2}
    g.primitives.push_back(
        PrimitiveGaussian::make(t.center, 0, 0, 0.5 * t.exponent));
    g.P(i, i) = t.coefficient;
  }
  return g;
}

std::string resolve_path(const RunConfig &c, const std::string &path) {
  const std::filesystem::path p(path);
  if (p.is_absolute())
    return path;
  return (std::filesystem::path(c.base_dir) / p).lexically_normal().string();
}

void apply_grid_override(grid::GridSpec &spec, const std::string &text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<std::string> errors;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      errors.push_back(fmt::format("grid override '{}' lacks '='", item));
      continue;
    }
    const auto key = item.substr(0, eq), val = item.substr(eq + 1);
    try {
      if (key == "nr") {
        spec.base.nr = std::stoi(val);
      } else if (key == "rmax") {
        spec.base.rmax = std::stod(val);
      } else if (key == "radial") {
        if (val == "log")
          spec.base.radial = grid::RadialKind::log;
        else if (val == "gauss_legendre")
          spec.base.radial = grid::RadialKind::gauss_legendre;
        else
          errors.push_back(fmt::format("unknown radial grid '{}'", val));
      } else if (key == "angular") {
        // lebedev:170 | axial:200 | 170
        const auto colon = val.find(':');
        const auto kind = colon == std::string::npos ? "lebedev" : val.substr(0, colon);
        const auto order = colon == std::string::npos ? val : val.substr(colon + 1);
        if (kind == "lebedev")
          spec.base.angular = grid::AngularKind::lebedev;
        else if (kind == "axial")
          spec.base.angular = grid::AngularKind::axial;
        else
          errors.push_back(fmt::format("unknown angular grid '{}'", kind));
        spec.base.order = std::stoi(order);
      } else {
        errors.push_back(fmt::format("unknown grid key '{}'", key));
      }
    } catch (const std::exception &) {
      errors.push_back(fmt::format("bad value in grid override '{}'", item));
    }
  }
  if (!errors.empty())
    throw ConfigError(errors);
}

} // namespace aimkit::cli
