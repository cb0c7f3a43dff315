#pragma once

namespace aimkit::grid::detail {

struct LebedevTable {
  int npoints;
  int degree;
  const double *data; // x, y, z, weight per point; weights sum to one
};

extern const LebedevTable lebedev_tables[];
extern const int lebedev_table_count;

} // namespace aimkit::grid::detail
