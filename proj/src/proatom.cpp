#include <aimkit/proatom.h>
#include <cmath>
#include <fmt/core.h>
#include <fmt/format.h>
#include <fstream>
#include <regex>
#include <sstream>

namespace aimkit {

namespace {

void check_expansion(std::span<const double> exponents,
                     std::span<const double> coefficients, const char *what) {
  if (exponents.size() != coefficients.size())
    throw ValidationError(fmt::format(
        "{}: {} exponents but {} coefficients", what, exponents.size(),
        coefficients.size()));
  for (double a : exponents)
    if (!(a > 0.0) || !std::isfinite(a))
      throw ValidationError(fmt::format("{}: exponents must be > 0", what));
  for (double c : coefficients)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw ValidationError(fmt::format("{}: coefficients must be >= 0", what));
}

// int_a^b r^2 (v0 + s (r - a)) dr
double segment_moment(double a, double b, double v0, double v1) {
  if (b <= a)
    return 0.0;
  const double s = (v1 - v0) / (b - a);
  const double c0 = v0 - s * a;
  return c0 * (b * b * b - a * a * a) / 3.0 +
         s * (b * b * b * b - a * a * a * a) / 4.0;
}

} // namespace

void validate(const Tabulated &t) {
  if (t.nodes.empty() || t.nodes.size() != t.values.size())
    throw ValidationError("tabulated pro-atom: nodes and values must be "
                          "nonempty and equal length");
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (!std::isfinite(t.nodes[i]) || t.nodes[i] < 0.0)
      throw ValidationError("tabulated pro-atom: nodes must be finite, >= 0");
    if (i > 0 && !(t.nodes[i] > t.nodes[i - 1]))
      throw ValidationError(
          "tabulated pro-atom: nodes must be strictly increasing");
    if (!(t.values[i] >= 0.0) || !std::isfinite(t.values[i]))
      throw ValidationError("tabulated pro-atom: values must be >= 0");
  }
  if (!(t.rmax >= t.nodes.back()))
    throw ValidationError("tabulated pro-atom: rmax below the last node");
}

void validate(const GaussianExpansion &g) {
  check_expansion(g.exponents, g.coefficients, "gaussian expansion");
}

void validate(const SlaterShells &s) {
  check_expansion(s.exponents, s.coefficients, "slater shells");
}

void validate(const ProAtomModel &p) {
  std::visit([](const auto &x) { validate(x); }, p);
}

double evaluate(const Tabulated &t, double r) {
  return grid::interpolate_radial(t.nodes, t.values, t.rmax, r);
}

double evaluate(const GaussianExpansion &g, double r) {
  double sum = 0.0;
  for (std::size_t k = 0; k < g.exponents.size(); ++k)
    if (g.coefficients[k] != 0.0)
      sum += g.coefficients[k] * gaussian_shell(g.exponents[k], r);
  return sum;
}

double evaluate(const SlaterShells &s, double r) {
  double sum = 0.0;
  for (std::size_t k = 0; k < s.exponents.size(); ++k)
    if (s.coefficients[k] != 0.0)
      sum += s.coefficients[k] * slater_shell(s.exponents[k], r);
  return sum;
}

double evaluate(const ProAtomModel &p, double r) {
  return std::visit([r](const auto &x) { return evaluate(x, r); }, p);
}

double charge(const ProAtomModel &p) {
  if (const auto *t = std::get_if<Tabulated>(&p)) {
    const auto &x = t->nodes;
    const auto &v = t->values;
    if (x.empty())
      return 0.0;
    double sum = segment_moment(0.0, x.front(), v.front(), v.front());
    for (std::size_t i = 1; i < x.size(); ++i)
      sum += segment_moment(x[i - 1], x[i], v[i - 1], v[i]);
    sum += segment_moment(x.back(), t->rmax, v.back(), v.back());
    return 4.0 * pi * sum;
  }
  double sum = 0.0;
  std::visit(
      [&](const auto &x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (!std::is_same_v<T, Tabulated>)
          for (double c : x.coefficients)
            sum += c;
      },
      p);
  return sum;
}

int HirshfeldITable::nmax() const {
  if (by_n.empty())
    throw ValidationError(fmt::format("no pro-atom tables for Z={}", Z));
  return by_n.rbegin()->first;
}

Tabulated hirshfeld_i_interpolate(double n, const HirshfeldITable &table) {
  if (!(n >= 0.0) || !std::isfinite(n))
    throw ValidationError(
        fmt::format("Hirshfeld-I: invalid electron count {}", n));
  const int nmax = table.nmax();
  if (n >= nmax)
    return table.by_n.at(nmax);
  const int lo = static_cast<int>(std::floor(n));
  const int hi = lo + 1;
  const double t = n - lo;

  auto lookup = [&](int k) -> const Tabulated * {
    if (auto it = table.by_n.find(k); it != table.by_n.end())
      return &it->second;
    if (k == 0)
      return nullptr;
    throw ValidationError(fmt::format(
        "Hirshfeld-I: missing pro-atom table Z={} n={}", table.Z, k));
  };
  const Tabulated *a = lookup(lo);
  const Tabulated *b = lookup(hi);
  if (t == 0.0 && a)
    return *a;
  const Tabulated &base = a ? *a : *b;
  Tabulated out;
  out.nodes = base.nodes;
  out.rmax = a && b ? std::max(a->rmax, b->rmax) : base.rmax;
  out.values.resize(base.nodes.size());
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    const double r = base.nodes[i];
    const double va = a ? evaluate(*a, r) : 0.0;
    const double vb = evaluate(*b, r);
    out.values[i] = (1.0 - t) * va + t * vb;
  }
  return out;
}

ProAtomFile read_proatom_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError(fmt::format("cannot open pro-atom file {}", path));
  std::string line;
  ProAtomFile f;
  bool header = false;
  static const std::regex head(R"(^#\s*proatom\s+Z=(\d+)\s+n=(\d+)\s*$)");
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    if (!header) {
      std::smatch m;
      if (!std::regex_match(line, m, head))
        throw ValidationError(fmt::format(
            "{}:{}: expected '# proatom Z=<int> n=<int>'", path, lineno));
      f.Z = std::stoi(m[1]);
      f.n = std::stoi(m[2]);
      header = true;
      continue;
    }
    if (line[line.find_first_not_of(" \t")] == '#')
      continue;
    std::istringstream ss(line);
    double r, v;
    if (!(ss >> r >> v))
      throw ValidationError(
          fmt::format("{}:{}: expected '<r> <value>'", path, lineno));
    f.table.nodes.push_back(r);
    f.table.values.push_back(v);
  }
  if (!header)
    throw ValidationError(fmt::format("{}: missing header", path));
  if (f.table.nodes.empty())
    throw ValidationError(fmt::format("{}: no data rows", path));
  f.table.rmax = f.table.nodes.back();
  validate(f.table);
  return f;
}

void write_proatom_file(const std::string &path, const ProAtomFile &file) {
  std::ofstream out(path);
  if (!out)
    throw ValidationError(fmt::format("cannot write {}", path));
  out << fmt::format("# proatom Z={} n={}\n", file.Z, file.n);
  for (std::size_t i = 0; i < file.table.nodes.size(); ++i)
    out << fmt::format("{:.17g} {:.17g}\n", file.table.nodes[i],
                       file.table.values[i]);
}

HirshfeldITable synthetic_slater_family(int Z, double exponent, int nmax,
                                        const grid::RadialGrid &radial) {
  HirshfeldITable t;
  t.Z = Z;
  for (int n = 0; n <= nmax; ++n) {
    Tabulated tab;
    tab.nodes = radial.nodes;
    tab.rmax = radial.rmax;
    for (double r : radial.nodes)
      tab.values.push_back(n * slater_shell(exponent, r));
    t.by_n.emplace(n, std::move(tab));
  }
  return t;
}

} // namespace aimkit
