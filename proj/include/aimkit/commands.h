#pragma once
#include <aimkit/config.h>
#include <aimkit/dma.h>
#include <aimkit/partition.h>
#include <iosfwd>
#include <string>
#include <vector>

namespace aimkit::cli {

/// Version tag of the documented sign/normalization conventions.
inline constexpr const char *conventions_version = "aimkit-conventions-1";

grid::AtomicGridSet build_grids(const RunConfig &config,
                                const DensityModel &density);

/// Pro-atom tables, exponents and guesses for the configured method.
partition::MethodParams build_params(const RunConfig &config,
                                     const grid::AtomicGridSet &grids);

struct PartitionRun {
  json document;
  partition::PartitionResult result;
};

PartitionRun cmd_partition(const RunConfig &config,
                           kernels::Exec exec = kernels::Exec::parallel);

dma::SiteSet build_sites(const RunConfig &config);

json cmd_dma(const RunConfig &config, bool debug_weights = false);

/// Two columns r, log(4 pi r^2 w(r)); rows with w <= 0 are dropped and
/// listed as comments.
void cmd_profile(const json &result, int atom, std::ostream &out);

struct EspRow {
  Vec3 point;
  double exact{0.0};
  double multipole{0.0};
  double relative_error{0.0};
  bool reliable{true};
};

std::vector<Vec3> read_points(const std::string &path, double scale = 1.0);

std::vector<EspRow> cmd_esp_compare(const RunConfig &config,
                                    std::span<const Vec3> points, int lmax);

void write_esp_table(std::span<const EspRow> rows, std::ostream &out);

} // namespace aimkit::cli
