#!/usr/bin/env python3
"""Regenerate the error-sweep CSV reports for all methods.

Writes one file per (method, N) into the output directory:

    charlier_N10.csv, charlier_N100.csv   orders 1..6
    stephan_N10.csv                       M = 1..10
    rempala_N10.csv, rempala_N100.csv     M = 1, 3, 5, ..., N capped at 15
    znidaric_N10.csv                      M = 1, 3, 5, 7, 9, 11
    poisson_moments.csv                   f_r over a mu grid, r = 1..6

Every CSV is deterministic and round-trips bit for bit through the
reader in invmoments.cli.
"""
import argparse
import os
import sys

from invmoments.cli import GridSpec, SweepConfig, run_sweep, write_report_csv
from invmoments.poisson_moments import positive_poisson_inverse_moment


def write_sweep(path, config):
    report = run_sweep(config)
    with open(path, "w", newline="") as fh:
        write_report_csv(report, fh)
    print(f"wrote {path} ({len(report.rows)} rows)")


def write_poisson_curve(path, orders, mu_lo=0.5, mu_hi=50.0, step=0.5):
    n = int(round((mu_hi - mu_lo) / step))
    cols = ["mu"]
    for r in orders:
        cols += [f"f{r}", f"f{r}_scaled"]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(n + 1):
            mu = mu_lo + i * step
            row = [mu]
            for r in orders:
                v = positive_poisson_inverse_moment(mu, r)
                row += [v, mu**r * v]
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
    print(f"wrote {path} ({n + 1} rows)")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="reports", help="output directory")
    ap.add_argument("--points", type=int, default=500, help="p grid size")
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    grid = GridSpec(0.002, 1.0, args.points)

    for N in (10, 100):
        write_sweep(
            os.path.join(args.out, f"charlier_N{N}.csv"),
            SweepConfig(N=N, p_grid=grid),
        )
    write_sweep(
        os.path.join(args.out, "stephan_N10.csv"),
        SweepConfig(N=10, methods=("stephan",), terms=tuple(range(1, 11)), p_grid=grid),
    )
    for N in (10, 100):
        terms = tuple(M for M in range(1, min(N, 15) + 1, 2))
        write_sweep(
            os.path.join(args.out, f"rempala_N{N}.csv"),
            SweepConfig(N=N, methods=("rempala",), terms=terms, p_grid=grid),
        )
    write_sweep(
        os.path.join(args.out, "znidaric_N10.csv"),
        SweepConfig(N=10, methods=("znidaric",), terms=(1, 3, 5, 7, 9, 11), p_grid=grid),
    )
    write_poisson_curve(os.path.join(args.out, "poisson_moments.csv"), (1, 2, 3, 4, 5, 6))
    return 0


if __name__ == "__main__":
    sys.exit(main())
