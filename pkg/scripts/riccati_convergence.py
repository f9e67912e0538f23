"""Riccati residual of the built profiles against grid step, per kernel and s.

Shows the second-order truncation floor of the central-difference residual.
"""
import numpy as np

from susy_lab.sl_engine import ConstantSquare, EvenPolynomial, Grid, HarmonicSquare, NegConstantSquare
from susy_lab.susy_core import build_pair, riccati_residual

KERNELS = [
    ("constant w=2", ConstantSquare(2.0), lambda s: 8.0),
    ("harmonic w=1", HarmonicSquare(1.0), lambda s: 6.0),
    ("poly x^4", EvenPolynomial((0.0, 0.0, 1.0)), lambda s: 4.0),
    ("neg-constant w=1", NegConstantSquare(1.0), lambda s: 0.5 / abs(s)),
]
STEPS = (4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4)


def main():
    print(f"{'kernel':>18} {'s':>7} " + " ".join(f"h={h:<9g}" for h in STEPS) + "  ratio")
    for name, k, extent in KERNELS:
        for s in (0.25, 1 / 3, 0.6, -0.6):
            r = [riccati_residual(build_pair(k, s, Grid.with_step(extent(s), h))) for h in STEPS]
            ratios = np.array(r[:-1]) / np.array(r[1:])
            print(f"{name:>18} {s:7.3f} " + " ".join(f"{v:<11.3e}" for v in r)
                  + f"  {ratios.min():.2f}")


if __name__ == "__main__":
    main()
