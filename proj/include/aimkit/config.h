#pragma once
#include <aimkit/density.h>
#include <aimkit/grid.h>
#include <json.hpp>
#include <string>
#include <vector>

namespace aimkit::cli {

using json = nlohmann::ordered_json;

/// Thrown with every problem found in a document, not only the first.
class ConfigError : public ValidationError {
public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string> &errors() const { return errors_; }

private:
  std::vector<std::string> errors_;
};

struct DensitySpec {
  std::string kind{"analytic"}; // analytic | gto | gto_contracted
  AnalyticDensity analytic;
  std::vector<PrimitiveGaussian> primitives;
  std::vector<ContractedShell> shells;
  Mat P;
};

struct SyntheticTableSpec {
  int Z{1};
  double exponent{2.0};
  int nmax{1};
  bool operator==(const SyntheticTableSpec &) const = default;
};

struct MethodSpec {
  std::string name{"isa"};
  std::vector<int> shells;                               // per atom, optional
  std::vector<std::vector<double>> exponents;            // per atom, optional
  std::vector<std::vector<double>> initial_coefficients; // per atom, optional
  std::vector<double> initial_charges;                   // hirshfeld-i
  std::vector<std::string> tables;                       // pro-atom files
  std::vector<SyntheticTableSpec> synthetic_tables;
  bool operator==(const MethodSpec &) const = default;
};

struct DmaSpec {
  std::string sites{"atoms"}; // atoms | atoms+bonds | path to a site file
  std::string strategy{"stone"};
  int lmax{4};
  bool operator==(const DmaSpec &) const = default;
};

struct RunConfig {
  std::string units{"bohr"};          // canonical: coordinates below in bohr
  std::string declared_units{"bohr"}; // units used by the original input
  std::vector<Atom> atoms;
  DensitySpec density;
  MethodSpec method;
  grid::GridSpec grid;
  double tol{1e-8};
  double tol_l2{1e-8};
  int max_iter{500};
  DmaSpec dma;
  std::string output;
  std::string base_dir; // relative file references resolve against this
};

bool operator==(const RunConfig &a, const RunConfig &b);

/// Validates and fills defaults; throws ConfigError listing all problems.
RunConfig parse_config(const json &doc, const std::string &base_dir = ".");
RunConfig parse_input(const std::string &path);

/// Canonical form (bohr coordinates, all defaults explicit).
json emit_config(const RunConfig &config);

DensityModel build_density(const RunConfig &config);

/// Exact GTO form of an all-Gaussian analytic density.
GtoDensity analytic_to_gto(const AnalyticDensity &d);

std::string resolve_path(const RunConfig &config, const std::string &path);

/// "nr=300,rmax=15,angular=lebedev:170" style overrides.
void apply_grid_override(grid::GridSpec &spec, const std::string &text);

} // namespace aimkit::cli
