#include <CLI11.hpp>
#include <aimkit/commands.h>
#include <fmt/core.h>
#include <fstream>
#include <iostream>

using namespace aimkit;

namespace {

enum Exit { ok = 0, validation = 2, nonconvergence = 3, numerical = 4 };

void write_json(const cli::json &doc, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw ValidationError(fmt::format("cannot write '{}'", path));
  out << doc.dump(2) << '\n';
}

template <class F> void with_output(const std::string &path, F &&f) {
  if (path.empty() || path == "-") {
    f(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw ValidationError(fmt::format("cannot write '{}'", path));
  f(out);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Stockholder density partitioning and distributed multipoles"};
  app.require_subcommand(1);

  std::string input, out, grid_override, method, sites, strategy, result_path,
      points;
  double tol = 0.0;
  int max_iter = 0, lmax = -1, atom = 0;
  bool debug_weights = false, serial = false;

  auto *part = app.add_subcommand("partition", "Run a stockholder partitioning");
  part->add_option("--method", method, "hirshfeld, hirshfeld-i, isa, gisa, lisa, mbisa");
  part->add_option("--input", input, "Input JSON")->required();
  part->add_option("--grid", grid_override, "nr=,rmax=,angular=lebedev:N|axial:N");
  part->add_option("--tol", tol, "Population tolerance");
  part->add_option("--max-iter", max_iter, "Iteration cap");
  part->add_option("--out", out, "Result JSON (default stdout)");
  part->add_flag("--serial", serial, "Use the serial kernels");

  auto *dmacmd = app.add_subcommand("dma", "Distributed multipole analysis");
  dmacmd->add_option("--input", input, "Input JSON")->required();
  dmacmd->add_option("--sites", sites, "atoms, atoms+bonds or a site file");
  dmacmd->add_option("--strategy", strategy, "stone or vigne-maeder");
  dmacmd->add_option("--lmax", lmax, "Highest multipole rank");
  dmacmd->add_option("--out", out, "Result JSON (default stdout)");
  dmacmd->add_flag("--debug-weights", debug_weights,
                   "Dump per-pair redistribution weights");

  auto *prof = app.add_subcommand("profile", "Emit a pro-atom radial profile");
  prof->add_option("--result", result_path, "Partition result JSON")->required();
  prof->add_option("--atom", atom, "Atom index")->required();
  prof->add_option("--out", out, "Output text file (default stdout)");

  auto *esp = app.add_subcommand("esp-compare", "Exact vs multipolar ESP");
  esp->add_option("--input", input, "Input JSON")->required();
  esp->add_option("--points", points, "Points file, x y z per line")->required();
  esp->add_option("--lmax", lmax, "Highest multipole rank");
  esp->add_option("--out", out, "Output table (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*part) {
      auto config = cli::parse_input(input);
      if (!method.empty()) {
        partition::method_from_string(method);
        auto doc = cli::emit_config(config);
        doc["method"]["name"] = method;
        if (method != config.method.name) {
          // method-specific parameters do not carry over
          for (const char *k : {"shells", "exponents", "initial_coefficients"})
            doc["method"][k] = cli::json::array();
        }
        config = cli::parse_config(doc, config.base_dir);
      }
      if (!grid_override.empty())
        cli::apply_grid_override(config.grid, grid_override);
      if (tol > 0.0)
        config.tol = tol;
      if (max_iter > 0)
        config.max_iter = max_iter;
      const auto run = cli::cmd_partition(
          config, serial ? kernels::Exec::serial : kernels::Exec::parallel);
      write_json(run.document, out.empty() ? config.output : out);
      std::cerr << fmt::format("{}: {} iterations, {:.2f} s\n",
                               config.method.name, run.result.iterations,
                               run.result.seconds);
      for (const auto &w : run.result.warnings)
        std::cerr << "warning: " << w << '\n';
      return run.result.converged ? ok : nonconvergence;
    }
    if (*dmacmd) {
      auto config = cli::parse_input(input);
      if (!sites.empty())
        config.dma.sites = sites;
      if (!strategy.empty()) {
        dma::strategy_from_string(strategy);
        config.dma.strategy = strategy;
      }
      if (lmax >= 0)
        config.dma.lmax = lmax;
      write_json(cli::cmd_dma(config, debug_weights),
                 out.empty() ? config.output : out);
      return ok;
    }
    if (*prof) {
      std::ifstream in(result_path);
      if (!in)
        throw ValidationError(fmt::format("cannot open '{}'", result_path));
      cli::json doc;
      try {
        doc = cli::json::parse(in);
      } catch (const cli::json::parse_error &e) {
        throw ValidationError(fmt::format("malformed result: {}", e.what()));
      }
      with_output(out, [&](std::ostream &os) { cli::cmd_profile(doc, atom, os); });
      return ok;
    }
    if (*esp) {
      const auto config = cli::parse_input(input);
      const double scale = config.declared_units == "angstrom"
                               ? units::bohr_per_angstrom
                               : 1.0;
      const auto pts = cli::read_points(points, scale);
      const auto rows =
          cli::cmd_esp_compare(config, pts, lmax >= 0 ? lmax : config.dma.lmax);
      with_output(out, [&](std::ostream &os) { cli::write_esp_table(rows, os); });
      return ok;
    }
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return validation;
  } catch (const ConvergenceError &e) {
    std::cerr << "not converged: " << e.what() << '\n';
    return nonconvergence;
  } catch (const NumericalError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return numerical;
  }
  return ok;
}
