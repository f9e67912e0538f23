"""Coupling constant g, its reparametrisation s and inversion-odd coupling functions.

The map ``s = (1 - g**2) / (1 + g**2)`` sends g -> 1/g to s -> -s, which is
the whole content of the duality at the level of parameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, UsageError

__all__ = [
    "CouplingParam",
    "BFamily",
    "s_from_g",
    "g_from_s",
    "b_eval",
    "antisymmetry_report",
    "log_grid",
]


def s_from_g(g: float) -> float:
    g = float(g)
    if not math.isfinite(g) or g <= 0.0:
        raise DomainError(f"coupling g must be positive and finite, got {g!r}")
    if g > 1.0:
        # same formula in 1/g keeps s(1/g) = -s(g) to rounding and avoids overflow
        r2 = (1.0 / g) ** 2
        return (r2 - 1.0) / (r2 + 1.0)
    g2 = g * g
    return (1.0 - g2) / (1.0 + g2)


def g_from_s(s: float) -> float:
    s = float(s)
    if not math.isfinite(s) or abs(s) >= 1.0:
        raise DomainError(f"s must satisfy -1 < s < 1, got {s!r}")
    return math.sqrt((1.0 - s) / (1.0 + s))


@dataclass(frozen=True)
class CouplingParam:
    """A coupling value carried together with its derived parameter."""

    g: float
    s: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "s", s_from_g(self.g))

    @classmethod
    def from_s(cls, s: float) -> "CouplingParam":
        param = cls(g_from_s(s))
        # keep the caller's s exactly; the round trip is only good to ~1e-16
        object.__setattr__(param, "s", float(s))
        return param

    def dual(self) -> "CouplingParam":
        """The inverted coupling 1/g, whose s is exactly -s."""
        param = CouplingParam(1.0 / self.g)
        object.__setattr__(param, "s", -self.s)
        return param

    @property
    def degenerate(self) -> bool:
        return self.s == 0.0


def _ratio(g):
    return (1.0 - g) / (1.0 + g)


def _arctan(g):
    # arctan(g) - pi/4 == arctan((g - 1)/(g + 1)); the latter is exactly odd under g -> 1/g
    return np.arctan((g - 1.0) / (g + 1.0))


def _laurent(g):
    return g - 1.0 / g


@dataclass(frozen=True)
class BFamily:
    """Coupling function b(g) with b(1/g) = -b(g).

    ``variant`` is one of ``ratio``, ``arctan``, ``laurent`` or ``log_odd``.
    The last wraps a user-supplied odd function ``odd_fn`` of log(g); oddness
    is checked on construction by sampling.
    """

    variant: str
    odd_fn: Callable[[np.ndarray], np.ndarray] | None = None

    BUILTIN = ("ratio", "arctan", "laurent")

    def __post_init__(self):
        if self.variant not in self.BUILTIN + ("log_odd",):
            raise DomainError(f"unknown coupling family {self.variant!r}")
        if self.variant == "log_odd":
            if self.odd_fn is None:
                raise UsageError("log_odd family needs an odd function of log(g)")
            t = np.linspace(-5.0, 5.0, 41)
            plus = np.asarray(self.odd_fn(t), dtype=float)
            minus = np.asarray(self.odd_fn(-t), dtype=float)
            scale = 1.0 + np.max(np.abs(plus))
            if np.max(np.abs(plus + minus)) > 1e-12 * scale:
                raise DomainError("supplied function is not odd")

    def __call__(self, g):
        return b_eval(self, g)


def b_eval(family: BFamily, g):
    """Evaluate b(g); accepts a scalar or an array of positive couplings."""
    arr = np.asarray(g, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("coupling g must be positive and finite")
    with np.errstate(over="raise", divide="raise"):
        try:
            if family.variant == "ratio":
                out = _ratio(arr)
            elif family.variant == "arctan":
                out = _arctan(arr)
            elif family.variant == "laurent":
                out = _laurent(arr)
            else:
                out = np.asarray(family.odd_fn(np.log(arr)), dtype=float)
        except FloatingPointError as exc:
            raise OverflowError(f"b(g) overflowed for family {family.variant!r}") from exc
    if np.any(~np.isfinite(out)):
        raise OverflowError(f"b(g) overflowed for family {family.variant!r}")
    return float(out) if np.ndim(out) == 0 else out


def antisymmetry_report(family: BFamily, g_samples: Sequence[float]) -> float:
    """Largest |b(1/g) + b(g)| over the samples."""
    g = np.asarray(g_samples, dtype=float)
    if g.size == 0:
        raise UsageError("antisymmetry_report needs at least one coupling sample")
    b = np.atleast_1d(b_eval(family, g))
    b_inv = np.atleast_1d(b_eval(family, 1.0 / g))
    return float(np.max(np.abs(b + b_inv)))


def log_grid(lo=1e-3, hi=1e3, n=121):
    return np.logspace(math.log10(lo), math.log10(hi), n)
