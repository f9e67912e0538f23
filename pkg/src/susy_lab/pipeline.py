"""Kernel + coupling -> partner pair -> both spectra -> pairing, in one call."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import sl_engine, spectral, susy_core
from .sl_engine import Grid


@dataclass(frozen=True)
class SipOscillator:
    """Marker 'kernel' for the W = w x calibration pair (no coupling)."""

    omega: float
    name = "sip-oscillator"

    def describe(self):
        return {"variant": self.name, "omega": self.omega}


@dataclass
class DualSpectra:
    kernel: object
    s: float | None
    grid: Grid
    pair: object
    minus: spectral.SpectrumReport
    plus: spectral.SpectrumReport
    pairing: spectral.PairingReport
    status: str
    e_max: float | None
    delta: float
    profile: object = None

    @property
    def unbroken(self):
        """Report of the sector that carries the zero mode (minus when broken)."""
        return self.plus if self.status == spectral.UNBROKEN_PLUS else self.minus


def default_grid(kernel, s=None, L=None, points=None):
    points = spectral.DEFAULT_POINTS if points is None else points
    if L is None:
        L = 12.0 / math.sqrt(kernel.omega) if isinstance(kernel, SipOscillator) else spectral.default_L(kernel, s)
    return Grid(L, points)


def solve(kernel, s=None, grid=None, e_max=None, delta=None, tol=1e-3, threshold_tol=5e-2,
          with_vectors=False) -> DualSpectra:
    if isinstance(kernel, SipOscillator):
        return _solve_oscillator(kernel, grid, e_max, tol, with_vectors)
    grid = default_grid(kernel, s) if grid is None else grid
    scale = spectral.kernel_scale(kernel)
    delta = 0.02 * scale if delta is None else delta
    profile = sl_engine.riccati_logderiv(kernel, s, grid)
    pair = susy_core.partner_pair(profile, kernel, s, grid)
    vinf = spectral.kernel_asymptote(kernel)
    if e_max is None:
        e_max = spectral.default_emax(kernel, s)
    minus = spectral.solve_sector(pair.V_minus, grid, "minus", vinf, delta, e_max, with_vectors)
    plus = spectral.solve_sector(pair.V_plus, grid, "plus", vinf, delta, e_max, with_vectors)
    status = spectral.normalizability_sector(profile)
    pairing = spectral.pair_spectra(minus, plus, tol=tol, status=status,
                                    zero_tol=5e-3 * scale, threshold_tol=threshold_tol)
    return DualSpectra(kernel=kernel, s=float(s), grid=grid, pair=pair, minus=minus, plus=plus,
                       pairing=pairing, status=status, e_max=e_max, delta=delta, profile=profile)


def _solve_oscillator(kernel, grid, e_max, tol, with_vectors):
    grid = default_grid(kernel) if grid is None else grid
    e_max = 9.0 * kernel.omega if e_max is None else e_max
    closed = susy_core.harmonic_sip_pair(kernel.omega, grid.x)
    pair = susy_core.PotentialPair(s=math.nan, V_minus=closed.V_minus, V_plus=closed.V_plus,
                                   W=closed.W, grid=grid, kernel=None)
    minus = spectral.solve_sector(closed.V_minus, grid, "minus", math.inf, 0.0, e_max, with_vectors)
    plus = spectral.solve_sector(closed.V_plus, grid, "plus", math.inf, 0.0, e_max, with_vectors)
    status = spectral.UNBROKEN_MINUS
    pairing = spectral.pair_spectra(minus, plus, tol=tol, status=status,
                                    zero_tol=5e-3 * kernel.omega**2)
    return DualSpectra(kernel=kernel, s=None, grid=grid, pair=pair, minus=minus, plus=plus,
                       pairing=pairing, status=status, e_max=e_max, delta=0.0)


def superpotential_of(result: DualSpectra):
    if result.profile is None:
        return susy_core.Superpotential(s=math.nan, W=np.asarray(result.pair.W), grid=result.grid)
    return susy_core.superpotential(result.profile)
