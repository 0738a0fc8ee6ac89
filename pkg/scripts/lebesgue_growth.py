#!/usr/bin/env python3
"""Lebesgue constant growth across families and resolutions.

Prints a table of estimates together with the ratio to (log n)^2, which
should level off for lattices with minimally growing Lebesgue constants.

Usage: python3 scripts/lebesgue_growth.py [--probe 110]
"""

import argparse
import math

from cheblat import bench, lattice as lat

SWEEP = {
    ("padua", 2): (4, 8, 16, 32),
    ("cartesian", 2): (3, 5, 9, 17),
    ("hex", 2): (1, 2, 4),
    ("composite-oct7", 2): (1, 2, 4),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--probe", type=int, default=110, help="probe grid points per axis")
    args = ap.parse_args()
    print(f"{'family':16s} {'res':>4s} {'npoints':>8s} {'lebesgue':>10s} {'/(log res)^2':>13s}")
    for (family, dim), resolutions in SWEEP.items():
        for res in resolutions:
            L = lat.build(family, dim, res)
            if L.npoints > 2200:
                continue
            est = bench.lebesgue_estimate(L, probe_per_axis=args.probe)
            denom = math.log(max(res, 2)) ** 2
            print(f"{family:16s} {res:4d} {L.npoints:8d} {est:10.4f} {est / denom:13.4f}")


if __name__ == "__main__":
    main()
