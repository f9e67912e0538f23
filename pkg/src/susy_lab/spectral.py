"""Finite-difference partner Hamiltonians and their bound states.

H = -d^2/dx^2 + V on the interior nodes of a Grid, Dirichlet walls at +-L.
Eigenvalues come from Sturm-sequence bisection on the symmetric tridiagonal
matrix; eigenvectors (needed for node counts and the intertwining check) from
inverse iteration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _numeric
from .errors import DomainError, UsageError
from .sl_engine import (
    ConstantSquare,
    EvenPolynomial,
    EvenTabulated,
    Grid,
    HarmonicSquare,
    LogDerivProfile,
    NegConstantSquare,
)
from .susy_core import Superpotential

UNBROKEN_MINUS = "unbroken-minus"
UNBROKEN_PLUS = "unbroken-plus"
BROKEN = "broken"
UNDETERMINED = "undetermined"

DEFAULT_POINTS = 8001
BISECTION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DiscreteHamiltonian:
    grid: Grid
    V: np.ndarray  # full grid, walls included
    diag: np.ndarray  # interior nodes
    off: float

    @property
    def size(self):
        return self.diag.size

    def apply(self, psi):
        """H psi for psi on the interior nodes (zero at the walls)."""
        psi = np.asarray(psi, dtype=float)
        out = self.diag * psi
        out[:-1] += self.off * psi[1:]
        out[1:] += self.off * psi[:-1]
        return out

    def gershgorin(self):
        r = np.full(self.size, 2.0 * abs(self.off))
        r[0] = r[-1] = abs(self.off)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))


def discretize(V, grid: Grid) -> DiscreteHamiltonian:
    V = np.asarray(V, dtype=float)
    if V.shape != (grid.points,):
        raise UsageError(f"potential has {V.shape} samples, grid has {grid.points}")
    if not np.all(np.isfinite(V)):
        raise DomainError("potential contains non-finite samples")
    h2 = grid.h**2
    diag = np.ascontiguousarray(2.0 / h2 + V[1:-1])
    return DiscreteHamiltonian(grid=grid, V=V, diag=diag, off=-1.0 / h2)


def _pivmin(H):
    return 1e-290 * max(1.0, H.off**2)


def count_below(H: DiscreteHamiltonian, energy):
    e2 = np.full(H.size - 1, H.off**2)
    return int(_numeric.sturm_count(H.diag, e2, float(energy), _pivmin(H)))


def eigen_below(H: DiscreteHamiltonian, e_max, tol=BISECTION_TOL):
    """All eigenvalues below e_max, ascending, by bisection to absolute tol."""
    e_max = float(e_max)
    if not math.isfinite(e_max):
        raise DomainError("e_max must be finite")
    e2 = np.full(H.size - 1, H.off**2)
    n = int(_numeric.sturm_count(H.diag, e2, e_max, _pivmin(H)))
    lo, _ = H.gershgorin()
    if n == 0:
        return np.empty(0)
    return _numeric.bisect_eigenvalues(H.diag, e2, lo - 1.0, e_max, n, tol, _pivmin(H))


def eigenvector(H: DiscreteHamiltonian, energy, n_iter=3):
    """Unit-norm eigenvector on the interior nodes, sign fixed so its largest entry is positive."""
    off = np.full(H.size - 1, H.off)
    # nudge off the eigenvalue so the elimination stays well defined
    shift = float(energy) + 1e-9 * max(1.0, abs(float(energy)))
    v = _numeric.inverse_iteration(H.diag, off, shift, n_iter)
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return v


def node_count(psi, rel_floor=1e-7):
    """Sign changes of psi, ignoring entries below rel_floor * max|psi|."""
    psi = np.asarray(psi)
    big = psi[np.abs(psi) > rel_floor * np.max(np.abs(psi))]
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))


# --------------------------------------------------------------------------
# reports


@dataclass
class SpectrumReport:
    sector: str
    eigenvalues: list
    node_counts: list
    threshold_flags: list
    v_infinity: float
    delta: float = 0.0
    vectors: list = field(default_factory=list, repr=False)

    def to_dict(self):
        vinf = self.v_infinity
        return {
            "sector": self.sector,
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "node_counts": [int(n) for n in self.node_counts],
            "threshold_flags": [bool(f) for f in self.threshold_flags],
            "v_infinity": float(vinf) if math.isfinite(vinf) else None,
        }

    def __len__(self):
        return len(self.eigenvalues)


@dataclass
class PairingReport:
    pairs: list  # dicts: e_minus, e_plus, gap, threshold, ok
    unpaired: float | None
    unpaired_sector: str | None
    status: str
    ok: bool
    messages: list = field(default_factory=list)

    def to_dict(self):
        return {
            "pairs": [{"e_minus": p["e_minus"], "e_plus": p["e_plus"], "gap": p["gap"]}
                      for p in self.pairs],
            "unpaired": self.unpaired,
            "status": self.status,
            "unpaired_sector": self.unpaired_sector,
            "ok": self.ok,
            "messages": list(self.messages),
        }

    @property
    def max_gap(self):
        return max((p["gap"] for p in self.pairs), default=0.0)


def solve_sector(V, grid: Grid, sector, v_infinity=math.inf, delta=0.0, e_max=None,
                 with_vectors=False):
    """Bound states of one partner Hamiltonian.

    With a finite asymptote, levels below v_infinity - delta are ordinary bound
    states; of the levels within delta of the asymptote only the lowest is kept
    and flagged as a threshold state, the rest being box continuum.
    """
    H = discretize(V, grid)
    finite = math.isfinite(v_infinity)
    if finite:
        cut = v_infinity + delta if e_max is None else min(float(e_max), v_infinity + delta)
    else:
        if e_max is None:
            raise UsageError("confining potential: e_max is required")
        cut = float(e_max)
    values = eigen_below(H, cut)
    flags = [False] * len(values)
    if finite:
        bound = [e for e in values if e < v_infinity - delta]
        window = [e for e in values if e >= v_infinity - delta]
        values = np.array(bound + window[:1])
        flags = [False] * len(bound) + [True] * len(window[:1])
    vectors = [eigenvector(H, e) for e in values]
    nodes = [node_count(v) for v in vectors]
    return SpectrumReport(
        sector=sector,
        eigenvalues=[float(e) for e in values],
        node_counts=nodes,
        threshold_flags=flags,
        v_infinity=float(v_infinity),
        delta=float(delta),
        vectors=vectors if with_vectors else [],
    )


def kernel_asymptote(kernel):
    """lim k(x) as |x| -> inf, or +inf for confining kernels."""
    if isinstance(kernel, ConstantSquare):
        return kernel.omega**2
    if isinstance(kernel, EvenPolynomial):
        c = [v for v in kernel.coeffs]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        return c[0] if len(c) == 1 else math.copysign(math.inf, c[-1])
    if isinstance(kernel, EvenTabulated):
        return float(kernel.k[-1])
    # harmonic grows without bound; neg-constant lives between the poles of tan
    return math.inf


def kernel_scale(kernel):
    """Energy unit w^2 where the kernel has one, else 1."""
    omega = getattr(kernel, "omega", None)
    return omega**2 if omega else 1.0


def default_L(kernel, s):
    s = abs(s)
    if isinstance(kernel, ConstantSquare):
        # the shallowest bound state decays like exp(-|s| w x); 24 decay lengths keep
        # its wall value far below what the 1/h^2 stencil would amplify
        return 24.0 / (s * kernel.omega)
    if isinstance(kernel, HarmonicSquare):
        return max(8.0, 6.0 / math.sqrt(s * kernel.omega))
    if isinstance(kernel, NegConstantSquare):
        return 0.98 * kernel.max_extent(s)
    if isinstance(kernel, EvenTabulated):
        return float(kernel.x[-1])
    return 8.0


def default_emax(kernel, s=None):
    vinf = kernel_asymptote(kernel)
    if math.isfinite(vinf):
        return None
    return 10.0 * kernel_scale(kernel)


# --------------------------------------------------------------------------
# zero modes and normalisability


def zero_mode_residual(H: DiscreteHamiltonian, log_psi):
    """||H psi|| / ||psi|| (energy units) for psi given through its logarithm.

    log_psi may cover the full grid (walls dropped) or only the interior.
    """
    lp = np.asarray(log_psi, dtype=float)
    if lp.size == H.grid.points:
        lp = lp[1:-1]
    if lp.size != H.size:
        raise UsageError("candidate does not match the Hamiltonian's grid")
    if not np.any(np.isfinite(lp)) or np.all(lp == -np.inf):
        raise UsageError("candidate zero mode vanishes identically")
    psi = np.exp(lp - np.max(lp))
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise UsageError("candidate zero mode vanishes identically")
    return float(np.linalg.norm(H.apply(psi)) / norm)


def normalizability_sector(profile: LogDerivProfile, s=None, grid=None, eps=None):
    """Which of y^(1/s), y^(-1/s) decays at the edge of the grid.

    a = u(L)/s is the log-slope of y^(1/s); y^(-1/s) has slope -a.
    """
    s = profile.s if s is None else float(s)
    if eps is None:
        omega = getattr(profile.kernel, "omega", 1.0) or 1.0
        eps = 1e-6 * max(1.0, omega)
    a_plus = float(profile.u[-1]) / s
    a_minus = -a_plus
    if abs(a_plus) < eps and abs(a_minus) < eps:
        return UNDETERMINED
    if a_plus < -eps and a_minus >= -eps:
        return UNBROKEN_MINUS
    if a_minus < -eps and a_plus >= -eps:
        return UNBROKEN_PLUS
    return BROKEN


def zero_mode_log(profile: LogDerivProfile, log_y_full, status):
    """ln of the zero-mode candidate y^(+-1/s) on the full grid."""
    sign = 1.0 if status == UNBROKEN_MINUS else -1.0
    return sign * np.asarray(log_y_full) / profile.s


# --------------------------------------------------------------------------
# pairing


def pair_spectra(E_minus: SpectrumReport, E_plus: SpectrumReport, tol=1e-3, status=None,
                 zero_tol=5e-3, threshold_tol=5e-2) -> PairingReport:
    """Match the two sectors level by level.

    Gaps are tested against tol * max(1, |E|) (threshold_tol for flagged
    states). Without an explicit status, the sector whose lowest level is
    within zero_tol of 0 is taken as the unbroken one.
    """
    em, ep = list(E_minus.eigenvalues), list(E_plus.eigenvalues)
    fm, fp = list(E_minus.threshold_flags), list(E_plus.threshold_flags)
    messages = []
    if status is None:
        if em and abs(em[0]) <= zero_tol:
            status = UNBROKEN_MINUS
        elif ep and abs(ep[0]) <= zero_tol:
            status = UNBROKEN_PLUS
        elif em and ep:
            status = BROKEN
        else:
            status = UNDETERMINED

    ok = True
    unpaired = None
    unpaired_sector = None
    if status == UNBROKEN_MINUS:
        zero, zero_sector, rest_m, rest_p = em[:1], "minus", list(zip(em[1:], fm[1:])), list(zip(ep, fp))
    elif status == UNBROKEN_PLUS:
        zero, zero_sector, rest_m, rest_p = ep[:1], "plus", list(zip(em, fm)), list(zip(ep[1:], fp[1:]))
    else:
        zero, zero_sector, rest_m, rest_p = [], None, list(zip(em, fm)), list(zip(ep, fp))

    if status in (UNBROKEN_MINUS, UNBROKEN_PLUS):
        if not zero:
            ok = False
            messages.append(f"{status}: no levels in the {zero_sector} sector")
        else:
            unpaired, unpaired_sector = float(zero[0]), zero_sector
            if abs(unpaired) > zero_tol:
                ok = False
                messages.append(f"lowest {zero_sector} level {unpaired:.6g} is not a zero mode")
    elif status == UNDETERMINED:
        ok = False
        messages.append("supersymmetry status undetermined")

    if len(rest_m) != len(rest_p):
        ok = False
        messages.append(f"level count mismatch: {len(rest_m)} minus vs {len(rest_p)} plus after removing the zero mode")

    pairs = []
    for (a, fa), (b, fb) in zip(rest_m, rest_p):
        gap = abs(a - b)
        thr = bool(fa or fb)
        limit = (threshold_tol if thr else tol) * max(1.0, abs(a), abs(b))
        good = gap <= limit
        ok &= good
        pairs.append({"e_minus": float(a), "e_plus": float(b), "gap": float(gap),
                      "threshold": thr, "ok": bool(good)})
    return PairingReport(pairs=pairs, unpaired=unpaired, unpaired_sector=unpaired_sector,
                         status=status, ok=bool(ok), messages=messages)


# --------------------------------------------------------------------------
# intertwining


class ZeroModeSignal(UsageError):
    """A psi = 0: the candidate was the zero mode, which has no partner."""


def susy_intertwine_check(W: Superpotential, psi, energy, H_plus: DiscreteHamiltonian,
                          zero_tol=5e-3):
    """||H_plus phi - E phi|| / ||phi|| with phi = psi' + W psi.

    psi is an eigenvector of H_minus on the interior nodes; the derivative is a
    central difference with psi = 0 at the walls. Raises ZeroModeSignal when
    ||phi||^2 / ||psi||^2 (which equals E for an exact eigenstate) is below zero_tol.
    """
    grid = H_plus.grid
    if W.grid != grid:
        raise UsageError("superpotential and Hamiltonian live on different grids")
    psi = np.asarray(psi, dtype=float)
    padded = np.concatenate([[0.0], psi, [0.0]])
    phi = (padded[2:] - padded[:-2]) / (2.0 * grid.h) + W.W[1:-1] * psi
    ratio = float(np.dot(phi, phi) / np.dot(psi, psi))
    if ratio < zero_tol:
        raise ZeroModeSignal(f"||A psi||^2/||psi||^2 = {ratio:.3g}: psi is the zero mode")
    return float(np.linalg.norm(H_plus.apply(phi) - energy * phi) / np.linalg.norm(phi))


def bound_state_count_check(s, omega, E_minus: SpectrumReport):
    """H_minus of the constant kernel holds floor(-1/s) + 1 levels (threshold state included)."""
    if not s < 0.0:
        raise DomainError("level count formula is for s < 0")
    expected = math.floor(-1.0 / s + 1e-9) + 1
    return len(E_minus.eigenvalues) == expected
