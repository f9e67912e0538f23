"""Superpotential and partner potentials built from a log-derivative profile.

With W = -u/s (u = y'/y of the even solution) the pair reads

    V_minus = +s k + (1 - s) (u/s)**2
    V_plus  = -s k + (1 + s) (u/s)**2

and since u is even in s, V_minus(x, -s) equals V_plus(x, s) node by node.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import sl_engine
from .coupling import s_from_g
from .errors import DegenerateCouplingError, DomainError, UsageError
from .sl_engine import Grid, LogDerivProfile


@dataclass(frozen=True, eq=False)
class Superpotential:
    s: float
    W: np.ndarray
    grid: Grid


@dataclass(frozen=True, eq=False)
class PotentialPair:
    s: float
    V_minus: np.ndarray
    V_plus: np.ndarray
    W: np.ndarray
    grid: Grid
    kernel: object = field(repr=False, default=None)

    @property
    def x(self):
        return self.grid.x

    def to_csv(self, path):
        write_pair_csv(path, self.x, self.V_minus, self.V_plus, self.W)


def _require_nonzero(s):
    s = float(s)
    if s == 0.0:
        raise DegenerateCouplingError("s = 0 (g = 1): superpotential undefined")
    return s


def superpotential(profile: LogDerivProfile, s=None) -> Superpotential:
    """W = -u/s on the full grid; odd in x, odd in s."""
    s = _require_nonzero(profile.s if s is None else s)
    if abs(s) != abs(profile.s):
        raise UsageError(f"profile was integrated for |s| = {abs(profile.s)}, not {abs(s)}")
    W = -profile.full() / s
    return Superpotential(s=s, W=W, grid=profile.grid)


def partner_pair(profile: LogDerivProfile, kernel, s, grid: Grid | None = None) -> PotentialPair:
    s = _require_nonzero(s)
    grid = profile.grid if grid is None else grid
    if grid != profile.grid:
        raise UsageError("profile and grid disagree")
    if abs(s) != abs(profile.s):
        raise UsageError(f"profile was integrated for |s| = {abs(profile.s)}, not {abs(s)}")
    k = kernel(grid.x)
    w2 = (profile.full() / s) ** 2
    V_minus = s * k + (1.0 - s) * w2
    V_plus = -s * k + (1.0 + s) * w2
    return PotentialPair(s=s, V_minus=V_minus, V_plus=V_plus, W=-profile.full() / s,
                         grid=grid, kernel=kernel)


def build_pair(kernel, s, grid: Grid) -> PotentialPair:
    """Profile solve followed by partner_pair."""
    profile = sl_engine.riccati_logderiv(kernel, s, grid)
    return partner_pair(profile, kernel, s, grid)


def duality_residual(kernel, s, grid: Grid):
    """max |V_minus(x, -s) - V_plus(x, s)| from two independent solves.

    Returns (residual, scale) where scale = 1 + max|V| over both pairs, so a
    caller can test residual <= tol * scale.
    """
    s = _require_nonzero(s)
    here = build_pair(kernel, s, grid)
    there = build_pair(kernel, -s, grid)
    residual = float(np.max(np.abs(there.V_minus - here.V_plus)))
    residual = max(residual, float(np.max(np.abs(there.V_plus - here.V_minus))))
    scale = 1.0 + max(np.max(np.abs(a)) for a in
                      (here.V_minus, here.V_plus, there.V_minus, there.V_plus))
    return residual, float(scale)


def susy_W_condition(W_at_g, W_at_inv_g):
    """max |W(x, 1/g) + W(x, g)|.

    Accepts Superpotential objects or bare arrays; arrays must match in shape.
    """
    a, ga = _unwrap(W_at_g)
    b, gb = _unwrap(W_at_inv_g)
    if a.shape != b.shape or (ga is not None and gb is not None and ga != gb):
        raise UsageError("superpotentials sampled on different grids")
    return float(np.max(np.abs(a + b)))


def _unwrap(w):
    if isinstance(w, Superpotential):
        return np.asarray(w.W), w.grid
    return np.asarray(w, dtype=float), None


def central_derivative(f, h):
    """Second-order central difference at interior nodes."""
    f = np.asarray(f)
    return (f[2:] - f[:-2]) / (2.0 * h)


def riccati_residual(pair: PotentialPair):
    """max |W' - s (W^2 - k)| over interior nodes, W' by central differences."""
    h = pair.grid.h
    W = pair.W
    k = pair.kernel(pair.grid.x)
    return float(np.max(np.abs(central_derivative(W, h) - pair.s * (W[1:-1] ** 2 - k[1:-1]))))


def factorization_residuals(pair: PotentialPair):
    """(max |V_minus - (W^2 - W')|, max |V_plus - (W^2 + W')|) at interior nodes."""
    Wp = central_derivative(pair.W, pair.grid.h)
    W2 = pair.W[1:-1] ** 2
    r_minus = float(np.max(np.abs(pair.V_minus[1:-1] - (W2 - Wp))))
    r_plus = float(np.max(np.abs(pair.V_plus[1:-1] - (W2 + Wp))))
    return r_minus, r_plus


# --------------------------------------------------------------------------
# closed-form families


@dataclass(frozen=True)
class ClosedFormPair:
    W: np.ndarray
    V_minus: np.ndarray
    V_plus: np.ndarray
    singular_on_line: bool = False


def inverse_square_family(a, g, x_samples) -> ClosedFormPair:
    """W = -1/(s (a + x)) and its partners; singular at x = -a, never used for spectra."""
    s = s_from_g(g)
    if s == 0.0:
        raise DegenerateCouplingError("g = 1 gives s = 0")
    return inverse_square_family_s(a, s, x_samples)


def inverse_square_family_s(a, s, x_samples) -> ClosedFormPair:
    s = _require_nonzero(s)
    x = np.asarray(x_samples, dtype=float)
    r = a + x
    if np.any(r == 0.0):
        raise DomainError(f"inverse-square family is singular at x = {-a!r}")
    W = -1.0 / (s * r)
    inv = 1.0 / (s * s * r * r)
    return ClosedFormPair(W=W, V_minus=(1.0 - s) * inv, V_plus=(1.0 + s) * inv,
                          singular_on_line=True)


def harmonic_sip_pair(omega, x_samples) -> ClosedFormPair:
    """The oscillator factorisation W = w x: V_minus = w^2 x^2 - w, V_plus = w^2 x^2 + w."""
    if not omega > 0.0:
        raise DomainError("omega must be positive")
    x = np.asarray(x_samples, dtype=float)
    base = omega**2 * x * x
    return ClosedFormPair(W=omega * x, V_minus=base - omega, V_plus=base + omega)


# --------------------------------------------------------------------------
# export


def write_pair_csv(path, x, V_minus, V_plus, W):
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "V_minus", "V_plus", "W"])
        for row in zip(x, V_minus, V_plus, W):
            writer.writerow([format_float(v) for v in row])


def format_float(v):
    """17 significant digits, scientific notation: round-trips any double."""
    return f"{float(v):.16e}"
