"""Closed forms for the constant and harmonic kernels.

Constant kernel k = w^2: y = cosh(s w x), W = -w tanh(s w x), a shape-invariant
pair with levels E_n = -n s w^2 (2 + n s). Negated constant k = -w^2: y =
cos(s w x) and tan replaces tanh. Harmonic kernel k = w^2 x^2: y is the
entire series 1 + sum (s w)^(2p) x^(4p) / c_p (a Bessel I_{-1/4} in disguise).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCouplingError, DomainError
from .sl_engine import harmonic_series_logderiv


def _nonzero(s):
    if s == 0.0:
        raise DegenerateCouplingError("s = 0 is degenerate")


def ex1_potentials(s, omega, x):
    _nonzero(s)
    t2 = np.tanh(s * omega * np.asarray(x, dtype=float)) ** 2
    w2 = omega**2
    return w2 * (s + (1.0 - s) * t2), w2 * (-s + (1.0 + s) * t2)


def ex1_superpotential(s, omega, x):
    return -omega * np.tanh(s * omega * np.asarray(x, dtype=float))


def ex1_logderiv(s, omega, x):
    return s * omega * np.tanh(s * omega * np.asarray(x, dtype=float))


def ex1_zero_mode_log(s, omega, x):
    """ln cosh(s w x)^(1/s), computed without overflowing cosh."""
    z = np.abs(s * omega * np.asarray(x, dtype=float))
    with np.errstate(under="ignore"):
        return (z + np.log1p(np.exp(-2.0 * z)) - math.log(2.0)) / s


def level_count(s):
    """floor(-1/s) + 1 levels for s < 0 (the small guard absorbs 1/(1/3) = 3.0000000000000004-type rounding)."""
    return math.floor(-1.0 / s + 1e-9) + 1


@dataclass(frozen=True)
class SIPSpectrum:
    s: float
    omega: float
    levels: tuple

    @property
    def threshold(self):
        return self.omega**2


def ex1_sip_spectrum(s, omega) -> SIPSpectrum:
    if not s < 0.0:
        raise DomainError("the closed-form spectrum is for the s < 0 regime")
    if not omega > 0.0:
        raise DomainError("omega must be positive")
    n = np.arange(level_count(s))
    levels = -n * s * omega**2 * (2.0 + n * s) + 0.0
    return SIPSpectrum(s=float(s), omega=float(omega), levels=tuple(float(e) for e in levels))


def ex1_trig_potentials(s, omega, x):
    """Partner pair for k = -w^2, valid for |s w x| < pi/2."""
    _nonzero(s)
    z = s * omega * np.asarray(x, dtype=float)
    if np.any(np.abs(z) >= math.pi / 2):
        raise DomainError("trigonometric pair needs |s w x| < pi/2")
    t2 = np.tan(z) ** 2
    w2 = omega**2
    return w2 * (-s + (1.0 - s) * t2), w2 * (s + (1.0 + s) * t2)


def ex2_bessel_ratio(s, omega, x):
    """R = u / (|s| w x), the I_{3/4}/I_{-1/4} ratio, from the series log-derivative.

    R(0) = 0 (u ~ s^2 w^2 x^3 / 3); R -> 1 for large x.
    """
    x = np.asarray(x, dtype=float)
    u = harmonic_series_logderiv(s, omega, x)
    denom = abs(s) * omega * x
    safe = np.where(denom != 0.0, denom, 1.0)
    return np.where(denom != 0.0, u / safe, 0.0)


def ex2_potentials(s, omega, x):
    """V_-+ = +-s w^2 x^2 + (1 -+ s) (u/s)^2 for the harmonic kernel."""
    _nonzero(s)
    x = np.asarray(x, dtype=float)
    w2 = (harmonic_series_logderiv(s, omega, x) / s) ** 2
    k = omega**2 * x * x
    return s * k + (1.0 - s) * w2, -s * k + (1.0 + s) * w2


def ex2_ground_state_energy(s, omega):
    """Expected ground-state energy of the unbroken sector: exactly 0."""
    if not s < 0.0:
        raise DomainError("expected for the s < 0 regime")
    if not omega > 0.0:
        raise DomainError("omega must be positive")
    return 0.0
