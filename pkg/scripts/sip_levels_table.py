"""Compare numeric H- levels of the constant kernel with the closed-form SIP levels.

Prints one row per (w, s, n): numeric level, formula level, difference in units of w^2.
"""
import argparse

import numpy as np

from susy_lab import pipeline
from susy_lab.analytic_examples import ex1_sip_spectrum
from susy_lab.sl_engine import ConstantSquare


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--omegas", default="1,2")
    ap.add_argument("--s-values", default="-0.5,-0.333333333333,-0.25,-0.2,-0.125")
    args = ap.parse_args()
    print(f"{'w':>4} {'s':>8} {'n':>3} {'numeric':>12} {'formula':>12} {'diff/w^2':>10}  flag")
    for w in map(float, args.omegas.split(",")):
        for s in map(float, args.s_values.split(",")):
            rep = pipeline.solve(ConstantSquare(w), s).minus
            want = ex1_sip_spectrum(s, w).levels
            for n, (e, f, flag) in enumerate(zip(rep.eigenvalues, want, rep.threshold_flags)):
                print(f"{w:4g} {s:8.4f} {n:3d} {e:12.6f} {f:12.6f} {abs(e - f) / w**2:10.2e}"
                      f"  {'threshold' if flag else ''}")
            if len(rep) != len(want):
                print(f"  count mismatch: {len(rep)} numeric vs {len(want)} formula")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
