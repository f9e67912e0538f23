"""Even solution of y'' = s^2 k(x) y, carried as its log-derivative u = y'/y.

y itself grows like exp(|s| w x) (constant kernel) or exp(|s| w x^2 / 2)
(harmonic kernel) and overflows long before the grids used here end, so the
integrator works on the Riccati form u' = s^2 k - u^2 with u(0) = 0.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _numeric
from .errors import (
    ConvergenceError,
    DegenerateCouplingError,
    DomainError,
    SingularProfileError,
    UsageError,
)

BLOWUP = 1e8
SERIES_MAX_TERMS = 500


# --------------------------------------------------------------------------
# kernels


@dataclass(frozen=True)
class ConstantSquare:
    omega: float
    name = "constant"

    def __post_init__(self):
        _check_omega(self.omega)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.full_like(x, self.omega**2)

    def describe(self):
        return {"variant": self.name, "omega": self.omega}


@dataclass(frozen=True)
class NegConstantSquare:
    """k = -w^2; the even solution cos(s w x) restricts |x| < pi / (2 |s| w)."""

    omega: float
    name = "neg-constant"

    def __post_init__(self):
        _check_omega(self.omega)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.full_like(x, -self.omega**2)

    def max_extent(self, s):
        return math.pi / (2.0 * abs(s) * self.omega)

    def describe(self):
        return {"variant": self.name, "omega": self.omega}


@dataclass(frozen=True)
class HarmonicSquare:
    omega: float
    name = "harmonic"

    def __post_init__(self):
        _check_omega(self.omega)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.omega**2 * x * x

    def describe(self):
        return {"variant": self.name, "omega": self.omega}


@dataclass(frozen=True)
class EvenPolynomial:
    """k(x) = sum_j coeffs[j] * x**(2j)."""

    coeffs: tuple
    name = "poly"

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if not c or not all(math.isfinite(v) for v in c):
            raise DomainError("polynomial kernel needs finite coefficients")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, x):
        x2 = np.asarray(x, dtype=float) ** 2
        out = np.zeros_like(x2)
        for c in reversed(self.coeffs):
            out = out * x2 + c
        return out

    def describe(self):
        return {"variant": self.name, "coeffs": list(self.coeffs)}


@dataclass(frozen=True, eq=False)
class EvenTabulated:
    """Kernel sampled on a symmetric, strictly increasing abscissa.

    Values between samples are linearly interpolated; outside the table the
    end value is held.
    """

    x: np.ndarray
    k: np.ndarray
    source: str = ""
    name = "table"

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        k = np.array(self.k, dtype=float)
        if x.ndim != 1 or x.shape != k.shape or x.size < 3:
            raise UsageError("tabulated kernel needs matching 1-D x and k with >= 3 rows")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(k)):
            raise UsageError("tabulated kernel contains non-finite values")
        if np.any(np.diff(x) <= 0.0):
            raise UsageError("tabulated x must be strictly increasing")
        xscale = max(1.0, float(np.max(np.abs(x))))
        if np.max(np.abs(x + x[::-1])) > 1e-12 * xscale:
            raise DomainError("tabulated x range is not symmetric about 0")
        kscale = max(1.0, float(np.max(np.abs(k))))
        if np.max(np.abs(k - k[::-1])) > 1e-12 * kscale:
            raise DomainError("tabulated kernel is not even")
        x.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_csv(cls, path):
        """Read a two-column ``x,k`` table with a header row."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header[:2]] != ["x", "k"]:
                raise UsageError(f"{path}: expected header 'x,k'")
            rows = [r for r in reader if r and any(c.strip() for c in r)]
        try:
            data = np.array([[float(r[0]), float(r[1])] for r in rows])
        except (ValueError, IndexError) as exc:
            raise UsageError(f"{path}: malformed row ({exc})") from exc
        if data.size == 0:
            raise UsageError(f"{path}: no data rows")
        return cls(data[:, 0], data[:, 1], source=str(path))

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.x, self.k)

    def describe(self):
        return {"variant": self.name, "source": self.source, "rows": int(self.x.size)}


def _check_omega(omega):
    if not (math.isfinite(omega) and omega > 0.0):
        raise DomainError(f"omega must be positive and finite, got {omega!r}")


# --------------------------------------------------------------------------
# grid


@dataclass(frozen=True)
class Grid:
    """Symmetric grid on [-L, L] with an odd number of nodes and x = 0 a node."""

    L: float
    points: int

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0.0):
            raise DomainError(f"grid half extent must be positive, got {self.L!r}")
        if int(self.points) != self.points or self.points < 5 or self.points % 2 == 0:
            raise DomainError(f"grid needs an odd point count >= 5, got {self.points!r}")
        object.__setattr__(self, "points", int(self.points))

    @classmethod
    def with_step(cls, L, h):
        """Grid on [-L, L] whose step is at most h."""
        half = max(2, math.ceil(L / h - 1e-9))
        return cls(L, 2 * half + 1)

    @property
    def h(self):
        return 2.0 * self.L / (self.points - 1)

    @property
    def mid(self):
        return (self.points - 1) // 2

    @property
    def x(self):
        # (i - mid) * h rather than -L + i*h: exactly symmetric, exactly 0 in the middle
        return (np.arange(self.points) - self.mid) * self.h

    @property
    def x_half(self):
        return np.arange(self.mid + 1) * self.h

    def describe(self):
        return {"L": self.L, "points": self.points, "h": self.h}


def default_step(s, omega):
    return 1e-3 * max(1.0, 1.0 / (abs(s) * omega))


# --------------------------------------------------------------------------
# log-derivative profile


@dataclass(frozen=True, eq=False)
class LogDerivProfile:
    """u = y'/y of the even solution on the non-negative half grid."""

    s: float
    u: np.ndarray
    grid: Grid
    kernel: object = field(repr=False, default=None)

    def full(self):
        """u on the whole grid, using u(-x) = -u(x)."""
        return np.concatenate([-self.u[:0:-1], self.u])

    @property
    def x_half(self):
        return self.grid.x_half


def riccati_logderiv(kernel, s, grid: Grid) -> LogDerivProfile:
    """Integrate the Riccati form of y'' = s^2 k y outward from x = 0.

    Classical fourth-order Runge-Kutta at the grid step. The result depends on
    s only through s^2, so +s and -s give bit-identical profiles.
    """
    s = float(s)
    if s == 0.0:
        raise DegenerateCouplingError("s = 0 (g = 1) is degenerate")
    if isinstance(kernel, NegConstantSquare) and grid.L >= kernel.max_extent(s):
        raise DomainError(
            f"neg-constant kernel needs |s| w L < pi/2; got |s| w L = {abs(s) * kernel.omega * grid.L:.6g}"
        )
    h = grid.h
    xh = grid.x_half
    k_nodes = np.ascontiguousarray(kernel(xh), dtype=float)
    k_mid = np.ascontiguousarray(kernel(xh[:-1] + 0.5 * h), dtype=float)
    u, bad = _numeric.rk4_riccati(s * s, k_nodes, k_mid, h, BLOWUP)
    if bad >= 0:
        where = float(xh[bad])
        raise SingularProfileError(
            f"even solution vanishes near |x| = {where:.6g}: u = y'/y exceeds {BLOWUP:g}",
            location=where,
        )
    u.setflags(write=False)
    return LogDerivProfile(s=s, u=u, grid=grid, kernel=kernel)


def cumulative_simpson(f, h):
    """Running integral of uniformly sampled f from the first node.

    Even nodes get composite Simpson; odd nodes add the one-panel quadratic
    rule h/12 (5 f0 + 8 f1 - f2) on top of the preceding even node.
    """
    f = np.asarray(f, dtype=float)
    n = f.size
    out = np.zeros(n)
    if n < 2:
        return out
    if n == 2:
        out[1] = 0.5 * h * (f[0] + f[1])
        return out
    panels = h / 3.0 * (f[0:-2:2] + 4.0 * f[1:-1:2] + f[2::2])
    out[2::2] = np.cumsum(panels)
    odd = np.arange(1, n, 2)
    # the quadratic through (odd-1, odd, odd+1), or (odd-2, odd-1, odd) at the far end
    inner = odd + 1 < n
    io = odd[inner]
    out[io] = out[io - 1] + h / 12.0 * (5.0 * f[io - 1] + 8.0 * f[io] - f[io + 1])
    last = odd[~inner]
    if last.size:
        j = last[0]
        out[j] = out[j - 1] + h / 12.0 * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j])
    return out


def log_y_from_u(profile: LogDerivProfile, grid: Grid | None = None):
    """ln y on the half grid, with ln y(0) = 0."""
    grid = profile.grid if grid is None else grid
    if grid != profile.grid:
        raise UsageError("profile was computed on a different grid")
    return cumulative_simpson(profile.u, grid.h)


# --------------------------------------------------------------------------
# harmonic kernel power series


def series_coeff_c(p):
    """c_p = prod_{j=1..p} (4j-1)(4j); exact integer up to p = 25, float beyond."""
    if int(p) != p or p < 1:
        raise DomainError(f"series index must be a positive integer, got {p!r}")
    p = int(p)
    if p <= 25:
        return math.prod((4 * j - 1) * (4 * j) for j in range(1, p + 1))
    return math.exp(_log_c(p)[-1])


def _log_c(pmax):
    j = np.arange(1, pmax + 1, dtype=float)
    return np.cumsum(np.log(4 * j - 1) + np.log(4 * j))


def harmonic_series_y(s, omega, x, tol=1e-17):
    """y(x) = 1 + sum_p (s w)^(2p) x^(4p) / c_p, the even solution of y'' = s^2 w^2 x^2 y."""
    if not tol > 0.0:
        raise DomainError("series tolerance must be positive")
    a = (s * omega) ** 2 * float(x) ** 4
    total = 1.0
    term = 1.0
    for p in range(1, SERIES_MAX_TERMS + 1):
        term *= a / ((4 * p - 1) * (4 * p))
        total += term
        if term < tol * total:
            return total
        if not math.isfinite(total):
            break
    raise ConvergenceError(f"harmonic series did not converge in {SERIES_MAX_TERMS} terms at x = {x!r}")


def _series_log_terms(s, omega, x):
    x = np.abs(np.asarray(x, dtype=float))
    sw = abs(s * omega)
    peak = float(np.max(sw * x * x)) / 4.0 if x.size else 0.0
    pmax = int(min(SERIES_MAX_TERMS, 3 * math.ceil(peak) + 40))
    p = np.arange(1, pmax + 1, dtype=float)
    with np.errstate(divide="ignore"):
        log_a = 2.0 * np.log(sw * x * x)
    log_t = np.multiply.outer(log_a, p) - _log_c(pmax)
    return x, p, log_t


def _logsumexp(a, axis=-1):
    m = np.max(a, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore", under="ignore"):
        return np.squeeze(m, axis) + np.log(np.sum(np.exp(a - m), axis=axis))


def harmonic_series_log_y(s, omega, x):
    """ln y from the power series, evaluated in log space (no overflow)."""
    x, p, log_t = _series_log_terms(s, omega, x)
    full = np.concatenate([np.zeros(x.shape + (1,)), log_t], axis=-1)
    _check_tail(full)
    return _logsumexp(full)


def harmonic_series_logderiv(s, omega, x):
    """u = y'/y from the power series; y' = sum_p 4p t_p / x."""
    xa, p, log_t = _series_log_terms(s, omega, x)
    den = _logsumexp(np.concatenate([np.zeros(xa.shape + (1,)), log_t], axis=-1))
    _check_tail(log_t)
    with np.errstate(divide="ignore"):
        num = _logsumexp(log_t + np.log(4.0 * p))
        u = np.where(xa > 0.0, np.exp(num - den) / np.where(xa > 0, xa, 1.0), 0.0)
    return np.sign(np.asarray(x, dtype=float)) * u


def _check_tail(log_t):
    if log_t.size == 0:
        return
    with np.errstate(invalid="ignore"):
        tail = log_t[..., -1] - _logsumexp(log_t)
        bad = np.any(tail > math.log(1e-17))
    if bad:
        raise ConvergenceError(f"harmonic series did not converge in {SERIES_MAX_TERMS} terms")
