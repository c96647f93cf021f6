#!/usr/bin/env python3
"""Scan cut-and-join convergence rates across the admissible parameter region.

For each point prints the empirical per-step error ratio of the tracked
coefficients next to the naive single-mode rate t^-a (tqQ)^-b; the actual
rate can be faster when several modes mix.
"""

import sys

from qvir.coeffield import rat
from qvir.operators import wrep_convergence, wrep_region_ok
from qvir.series import DegreeWindow

POINTS = [
    ("1/3", "2", "2"),
    ("1/4", "3", "2"),
    ("1/5", "2", "4"),
    ("2/5", "3", "1"),
]


def main() -> int:
    window = DegreeWindow(1, -1, 2)
    for q, t, Q in POINTS:
        qv, tv, Qv = rat(q), rat(t), rat(Q)
        print(f"q={q}, t={t}, Q={Q}  region_ok={wrep_region_ok(qv, tv, Qv)}")
        rep = wrep_convergence(8, window, qv, tv, Qv)
        for key in sorted(rep["errors"]):
            es = rep["errors"][key]
            nonzero = [e for e in es if e != 0]
            if len(nonzero) < 2:
                print(f"  {key}: exact at every step")
                continue
            ratio = nonzero[-1] / nonzero[-2]
            a, b = key
            naive = tv ** -a * (tv * qv * Qv) ** -b
            print(f"  {key}: last ratio {float(ratio):.4f}, "
                  f"naive mode rate {float(naive):.4f}, "
                  f"monotone={rep['monotone'][key]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
