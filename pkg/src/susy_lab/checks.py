"""Invariant checks run by ``susy-lab verify``.

Each check returns a list of Row(name, residual, tolerance, passed). Checks
call into the library through module attributes so that a deliberately broken
function (negative control) is picked up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic_examples, coupling, pipeline, sl_engine, spectral, susy_core
from .sl_engine import ConstantSquare, EvenPolynomial, Grid, HarmonicSquare, NegConstantSquare

S_SET = (0.25, -0.25, 1.0 / 3.0, -1.0 / 3.0, 0.6, -0.6)


@dataclass
class Row:
    name: str
    residual: float
    tolerance: float
    passed: bool

    @classmethod
    def le(cls, name, residual, tolerance):
        residual = float(residual)
        return cls(name, residual, float(tolerance), bool(residual <= tolerance))

    @classmethod
    def ge(cls, name, value, bound):
        # for lower-bound checks the "tolerance" column carries the bound
        value = float(value)
        return cls(name, value, float(bound), bool(value >= bound))


def builtin_kernels():
    """The kernel matrix the checks sweep: name -> (kernel, half extent for a given s)."""
    return {
        "constant": (ConstantSquare(2.0), lambda s: 8.0),
        "harmonic": (HarmonicSquare(1.0), lambda s: 6.0),
        "poly": (EvenPolynomial((0.0, 0.0, 1.0)), lambda s: 4.0),
        "neg-constant": (NegConstantSquare(1.0), lambda s: 0.5 / abs(s)),
    }


def _kernels(selected):
    table = builtin_kernels()
    if selected is None:
        return table
    if selected not in table:
        return {}
    return {selected: table[selected]}


def check_coupling(kernel=None):
    g = coupling.log_grid()
    rows = []
    s_res = max(abs(coupling.s_from_g(1.0 / v) + coupling.s_from_g(v)) for v in g)
    rows.append(Row.le("coupling: s(1/g) + s(g)", s_res, 1e-14))
    s_vals = np.array([coupling.s_from_g(v) for v in g])
    rows.append(Row.le("coupling: s decreasing in g", float(np.max(np.diff(s_vals))), 0.0))
    for variant in coupling.BFamily.BUILTIN:
        fam = coupling.BFamily(variant)
        b = np.abs(coupling.b_eval(fam, g))
        res = coupling.antisymmetry_report(fam, g)
        rows.append(Row.le(f"coupling: b(1/g) + b(g) [{variant}]", res, 1e-12 * (1.0 + b.max())))
    return rows


def _truncation_bound(W, h):
    # second-order central difference error is h^2/6 |W'''|; W''' from a 5-point stencil
    d3 = (W[4:] - 2.0 * W[3:-1] + 2.0 * W[1:-3] - W[:-4]) / (2.0 * h**3)
    return h * h / 6.0 * float(np.max(np.abs(d3)))


def check_riccati(kernel=None):
    """|W' - s(W^2 - k)| is pure O(h^2) truncation: bounded by h^2/6 max|W'''| and quartering under h/2."""
    rows = []
    for name, (k, extent) in _kernels(kernel).items():
        for s in S_SET:
            res = []
            for h in (1e-3, 5e-4):
                pair = susy_core.build_pair(k, s, Grid.with_step(extent(s), h))
                res.append((susy_core.riccati_residual(pair), _truncation_bound(pair.W, pair.grid.h)))
            (r1, b1), (r2, _) = res
            rows.append(Row.le(f"riccati [{name}, s={s:+.4g}] residual vs h^2/6 max|W'''|",
                               r1, 1.05 * b1 + 1e-11))
            rows.append(Row.ge(f"riccati [{name}, s={s:+.4g}] halving ratio", r1 / r2, 3.5))
    return rows


def check_factorization(kernel=None):
    rows = []
    for name, (k, extent) in _kernels(kernel).items():
        for s in S_SET:
            res = []
            for h in (1e-3, 5e-4):
                pair = susy_core.build_pair(k, s, Grid.with_step(extent(s), h))
                res.append(max(susy_core.factorization_residuals(pair)))
            rows.append(Row.ge(f"factorization [{name}, s={s:+.4g}] halving ratio",
                               res[0] / res[1], 3.5))
    return rows


def check_duality(kernel=None):
    rows = []
    for name, (k, extent) in _kernels(kernel).items():
        for s in S_SET:
            res, scale = susy_core.duality_residual(k, s, Grid.with_step(extent(s), 1e-3))
            rows.append(Row.le(f"duality [{name}, s={s:+.4g}]", res, 1e-9 * scale))
    return rows


def check_parity(kernel=None):
    rows = []
    for name, (k, extent) in _kernels(kernel).items():
        for s in (0.25, 0.6):
            grid = Grid.with_step(extent(s), 1e-3)
            a = sl_engine.riccati_logderiv(k, s, grid).u
            b = sl_engine.riccati_logderiv(k, -s, grid).u
            rows.append(Row.le(f"s-parity [{name}, |s|={s:.4g}] profiles bit-identical",
                               float(np.max(np.abs(a - b))), 0.0))
    return rows


def check_closed_form(kernel=None):
    if kernel not in (None, "constant"):
        return []
    rows = []
    for omega in (1.0, 2.0):
        for s in (0.25, -1.0 / 3.0, 0.6):
            grid = Grid.with_step(10.0 / (abs(s) * omega), 1e-3)
            prof = sl_engine.riccati_logderiv(ConstantSquare(omega), s, grid)
            err = np.max(np.abs(prof.u - analytic_examples.ex1_logderiv(s, omega, grid.x_half)))
            rows.append(Row.le(f"closed form u = s w tanh(s w x) [w={omega:g}, s={s:+.4g}]", err, 1e-8))
            pair = susy_core.partner_pair(prof, ConstantSquare(omega), s)
            vm, vp = analytic_examples.ex1_potentials(s, omega, grid.x)
            err = max(np.max(np.abs(pair.V_minus - vm)), np.max(np.abs(pair.V_plus - vp)))
            rows.append(Row.le(f"closed form V pair [w={omega:g}, s={s:+.4g}]", err, 1e-8))
    return rows


def check_series(kernel=None):
    if kernel not in (None, "harmonic"):
        return []
    rows = []
    for omega in (0.5, 1.0, 2.0):
        for s in (0.1, -0.5, 0.9):
            grid = Grid.with_step(2.0, 1e-3)
            prof = sl_engine.riccati_logderiv(HarmonicSquare(omega), s, grid)
            ode = sl_engine.log_y_from_u(prof)
            ser = sl_engine.harmonic_series_log_y(s, omega, grid.x_half)
            rows.append(Row.le(f"series vs ODE ln y [w={omega:g}, s={s:+.4g}]",
                               float(np.max(np.abs(ode - ser))), 1e-9))
    return rows


def check_calibration(kernel=None):
    if kernel not in (None, "sip-oscillator"):
        return []
    res = pipeline.solve(pipeline.SipOscillator(1.0), grid=Grid(12.0, 8001), e_max=9.0)
    got = np.array(res.minus.eigenvalues)
    want = np.array([0.0, 2.0, 4.0, 6.0, 8.0])
    if got.shape != want.shape:
        return [Row("calibration: oscillator level count", float(got.size), 5.0, False)]
    return [Row.le("calibration: oscillator levels {0,2,4,6,8}", float(np.max(np.abs(got - want))), 5e-4)]


def _ex1(s, omega, points=8001, with_vectors=False):
    k = ConstantSquare(omega)
    grid = Grid(spectral.default_L(k, s), points)
    return pipeline.solve(k, s, grid, with_vectors=with_vectors)


def check_ex1_spectrum(kernel=None):
    if kernel not in (None, "constant"):
        return []
    rows = []
    for omega in (1.0, 2.0):
        for s in (-0.5, -1.0 / 3.0, -0.25, -0.2):
            res = _ex1(s, omega)
            want = analytic_examples.ex1_sip_spectrum(s, omega).levels
            got = res.minus.eigenvalues
            tag = f"[w={omega:g}, s={s:+.4g}]"
            rows.append(Row.le(f"SIP count {tag}", abs(len(got) - len(want)), 0))
            if len(got) != len(want):
                continue
            flags = res.minus.threshold_flags
            err = max((abs(a - b) for a, b, f in zip(got, want, flags) if not f), default=0.0)
            rows.append(Row.le(f"SIP levels {tag}", err, 5e-3 * omega**2))
            thr = max((abs(a - b) for a, b, f in zip(got, want, flags) if f), default=0.0)
            rows.append(Row.le(f"SIP threshold level {tag}", thr, 5e-2 * omega**2))
            rows.append(Row.le(f"pairing {tag}", 0.0 if res.pairing.ok else 1.0, 0.0))
            nodes = max(abs(n - i) for rep in (res.minus, res.plus) for i, n in enumerate(rep.node_counts))
            rows.append(Row.le(f"node theorem {tag}", nodes, 0))
    return rows


def check_zero_mode(kernel=None):
    if kernel not in (None, "constant"):
        return []
    s, omega = -0.25, 2.0
    grid = Grid(24.0, 8001)
    pair = susy_core.build_pair(ConstantSquare(omega), s, grid)
    log_psi = analytic_examples.ex1_zero_mode_log(s, omega, grid.x)
    r_minus = spectral.zero_mode_residual(spectral.discretize(pair.V_minus, grid), log_psi)
    r_plus = spectral.zero_mode_residual(spectral.discretize(pair.V_plus, grid), log_psi)
    return [
        Row.le("zero mode: H_minus cosh(s w x)^(1/s)", r_minus, 1e-4),
        Row.ge("zero mode: H_plus cosh(s w x)^(1/s) is not annihilated", r_plus, 0.1 * omega**2),
    ]


def check_intertwine(kernel=None):
    if kernel not in (None, "constant"):
        return []
    res = _ex1(-0.25, 2.0, with_vectors=True)
    W = pipeline.superpotential_of(res)
    Hp = spectral.discretize(res.pair.V_plus, res.grid)
    r = spectral.susy_intertwine_check(W, res.minus.vectors[1], res.minus.eigenvalues[1], Hp)
    return [Row.le("intertwining A psi_1 is an H_plus eigenvector", r, 1e-3)]


def check_ex2(kernel=None):
    if kernel not in (None, "harmonic"):
        return []
    s, omega = -1.0 / 3.0, 1.0
    res = pipeline.solve(HarmonicSquare(omega), s)
    V = res.pair.V_minus
    mid = res.grid.mid
    interior = np.arange(1, V.size - 1)
    minima = interior[(V[interior] < V[interior - 1]) & (V[interior] < V[interior + 1])]
    rows = [
        Row.le("ex2: V_minus(0)", abs(V[mid]), 1e-12),
        Row.le("ex2: x = 0 is a strict local maximum", 0.0 if V[mid] > max(V[mid - 1], V[mid + 1]) else 1.0, 0.0),
        Row.le("ex2: two symmetric negative minima", 0.0 if (minima.size == 2 and np.all(V[minima] < 0)
                                                            and minima[0] + minima[1] == 2 * mid) else 1.0, 0.0),
        Row.le("ex2: ground state energy", abs(res.minus.eigenvalues[0]), 5e-3),
        Row.le("ex2: pairing", 0.0 if res.pairing.ok else 1.0, 0.0),
    ]
    return rows


CHECKS = {
    "coupling": check_coupling,
    "parity": check_parity,
    "riccati": check_riccati,
    "factorization": check_factorization,
    "duality": check_duality,
    "closed-form": check_closed_form,
    "series": check_series,
    "calibration": check_calibration,
    "ex1-spectrum": check_ex1_spectrum,
    "zero-mode": check_zero_mode,
    "intertwine": check_intertwine,
    "ex2": check_ex2,
}


def run(names=None, kernel=None):
    names = list(CHECKS) if not names else names
    rows = []
    for name in names:
        rows.extend(CHECKS[name](kernel))
    return rows


def format_table(rows):
    width = max([len(r.name) for r in rows] + [5])
    lines = [f"{'check':<{width}}  {'residual':>12}  {'tolerance':>12}  result"]
    for r in rows:
        lines.append(f"{r.name:<{width}}  {r.residual:12.4e}  {r.tolerance:12.4e}  {'PASS' if r.passed else 'FAIL'}")
    n_fail = sum(not r.passed for r in rows)
    lines.append(f"{len(rows) - n_fail}/{len(rows)} checks passed")
    return "\n".join(lines)
