#!/usr/bin/env python3
"""Regenerate src/lebedev_data.cpp from scipy's Lebedev rules.

Weights are rescaled to sum to one (mean over the unit sphere).
"""
import sys

import numpy as np
from scipy.integrate import lebedev_rule

DEGREES = [3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 35, 41]


def main(path):
    out = []
    out.append("// Generated by tools/gen_lebedev.py -- do not edit.")
    out.append('#include "lebedev_data.h"')
    out.append("")
    out.append("namespace aimkit::grid::detail {")
    out.append("")
    entries = []
    for degree in DEGREES:
        x, w = lebedev_rule(degree)
        n = x.shape[1]
        w = w / w.sum()
        out.append(f"static const double lebedev_{n}[] = {{")
        for j in range(n):
            out.append(
                f"  {x[0, j]:.17e}, {x[1, j]:.17e}, {x[2, j]:.17e}, {w[j]:.17e},"
            )
        out.append("};")
        out.append("")
        entries.append((n, degree))
    out.append("const LebedevTable lebedev_tables[] = {")
    for n, degree in entries:
        out.append(f"  {{{n}, {degree}, lebedev_{n}}},")
    out.append("};")
    out.append("")
    out.append(f"const int lebedev_table_count = {len(entries)};")
    out.append("")
    out.append("} // namespace aimkit::grid::detail")
    with open(path, "w") as f:
        f.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/lebedev_data.cpp")
