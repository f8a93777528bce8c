#!/usr/bin/env python3
"""Print the exact coefficient triangle and the series cross-over tables.

The first table lists alpha(l, j) as exact fractions for j + l <= 7.
The second and third run the full calibration at relative error targets
1e-5 and 1e-10 for moment orders r = 1..6 and print the switch point
mu*, the ascending term count M1 and the asymptotic term count M2.
"""
import sys
import time

from invmoments.poisson_moments import calibrate_crossover
from invmoments.special_numbers import alpha


def print_alpha_triangle(top=7):
    width = 10
    print("alpha(l, j), exact")
    print("l\\j".ljust(5) + "".join(str(j).rjust(width) for j in range(top + 1)))
    for l in range(top + 1):
        cells = [str(alpha(l, j)).rjust(width) for j in range(top + 1 - l)]
        print(str(l).ljust(5) + "".join(cells))
    print()


def print_crossover_table(target):
    print(f"cross-over calibration, target relative error {target:g}")
    print(f"{'r':>3} {'mu*':>10} {'M1':>5} {'M2':>5} {'validated':>12}")
    for r in range(1, 7):
        t0 = time.perf_counter()
        prof = calibrate_crossover(r, target)
        dt = time.perf_counter() - t0
        print(f"{r:>3} {prof.mu_star:>10.3f} {prof.M1:>5} {prof.M2:>5} "
              f"{prof.validated_max_rel_error:>12.3e}   ({dt:.1f} s)")
    print()


def main():
    print_alpha_triangle()
    print_crossover_table(1e-5)
    print_crossover_table(1e-10)
    return 0


if __name__ == "__main__":
    sys.exit(main())
