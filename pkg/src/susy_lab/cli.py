"""Command-line entry point: dual-pair, spectrum, verify, figure, sweep.

Exit codes: 0 success, 1 verification failure, 2 mathematical/domain or usage
error, 3 IO error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import checks, output, pipeline, spectral, susy_core
from .coupling import g_from_s, s_from_g
from .errors import DegenerateCouplingError, SusyLabError, UsageError
from .sl_engine import (
    ConstantSquare,
    EvenPolynomial,
    EvenTabulated,
    Grid,
    HarmonicSquare,
    NegConstantSquare,
)

KERNELS = ("constant", "neg-constant", "harmonic", "poly", "table", "sip-oscillator")
FIGURES = {
    "A1": dict(kernel=ConstantSquare(2.0), s=-0.25, L=24.0, window=8.0, ylim=(-1.5, 5.0)),
    "A2": dict(kernel=HarmonicSquare(1.0), s=-1.0 / 3.0, L=None, window=3.0, ylim=(-1.0, 5.0)),
}
TOLERANCES = {"bisection": spectral.BISECTION_TOL, "pairing_rel": 1e-3, "threshold_rel": 5e-2,
              "zero_mode": 5e-3, "duality_rel": 1e-9}


@dataclass
class RunConfig:
    kernel: object
    g: float | None
    s: float | None
    L: float | None
    points: int
    e_max: float | None
    fmt: str
    out: str | None

    @classmethod
    def from_args(cls, args, need_coupling=True):
        kernel = make_kernel(args.kernel, args.omega, args.coeffs, args.table)
        g, s = args.g, args.s
        if g is not None:
            s = s_from_g(g)
        elif s is not None:
            g = g_from_s(s)
        elif need_coupling and not isinstance(kernel, pipeline.SipOscillator):
            raise UsageError("exactly one of --g or --s is required")
        return cls(kernel=kernel, g=g, s=s, L=args.L, points=args.points, e_max=args.emax,
                   fmt=args.format, out=args.out)

    def grid(self, s=None):
        s = self.s if s is None else s
        return pipeline.default_grid(self.kernel, s, self.L, self.points)

    def metadata(self, grid, **extra):
        return output.run_metadata(self.kernel, s=self.s, g=self.g, grid=grid,
                                   tolerances=TOLERANCES, **extra)


def make_kernel(name, omega=1.0, coeffs=None, table=None):
    if name == "constant":
        return ConstantSquare(omega)
    if name == "neg-constant":
        return NegConstantSquare(omega)
    if name == "harmonic":
        return HarmonicSquare(omega)
    if name == "sip-oscillator":
        return pipeline.SipOscillator(omega)
    if name == "poly":
        if not coeffs:
            raise UsageError("--kernel poly needs --coeffs c0,c1,... (coefficients of x^0, x^2, ...)")
        try:
            values = tuple(float(c) for c in coeffs.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --coeffs {coeffs!r}") from exc
        return EvenPolynomial(values)
    if name == "table":
        if not table:
            raise UsageError("--kernel table needs --table PATH")
        return EvenTabulated.from_csv(table)
    raise UsageError(f"unknown kernel {name!r}")


def _out_dir(path):
    d = Path(path or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def cmd_dual_pair(args):
    cfg = RunConfig.from_args(args)
    if isinstance(cfg.kernel, pipeline.SipOscillator):
        raise UsageError("dual-pair needs a coupling-dependent kernel, not sip-oscillator")
    if cfg.s == 0.0:
        raise DegenerateCouplingError("g = 1 (s = 0) has no dual pair")
    grid = cfg.grid()
    here = susy_core.build_pair(cfg.kernel, cfg.s, grid)
    there = susy_core.build_pair(cfg.kernel, -cfg.s, grid)
    residual, scale = susy_core.duality_residual(cfg.kernel, cfg.s, grid)
    d = _out_dir(cfg.out)
    pos, neg = (here, there) if cfg.s > 0 else (there, here)
    pos.to_csv(d / "pair_s_pos.csv")
    neg.to_csv(d / "pair_s_neg.csv")
    meta = cfg.metadata(grid, duality_residual=residual, duality_scale=scale,
                        duality_bound=1e-9 * scale, files=["pair_s_pos.csv", "pair_s_neg.csv"])
    output.write_json(d / "pair_meta.json", meta)
    print(f"s = {cfg.s:.17g}, g = {cfg.g:.17g}; duality residual {residual:.3e} "
          f"(bound {1e-9 * scale:.3e}); wrote {d}")
    return 0


def _spectrum_payload(cfg):
    grid = cfg.grid()
    res = pipeline.solve(cfg.kernel, cfg.s, grid, e_max=cfg.e_max)
    meta = cfg.metadata(grid, e_max=res.e_max, delta=res.delta)
    return res, {
        "metadata": meta,
        "status": res.status,
        "minus": res.minus.to_dict(),
        "plus": res.plus.to_dict(),
        "pairing": res.pairing.to_dict(),
    }


def cmd_spectrum(args):
    cfg = RunConfig.from_args(args)
    res, payload = _spectrum_payload(cfg)
    if cfg.fmt == "csv":
        rows = []
        for rep in (res.minus, res.plus):
            for i, (e, n, f) in enumerate(zip(rep.eigenvalues, rep.node_counts, rep.threshold_flags)):
                rows.append([rep.sector, i, float(e), n, int(f)])
        if cfg.out:
            output.write_table(cfg.out, ["sector", "index", "energy", "nodes", "threshold"], rows)
        else:
            print("sector,index,energy,nodes,threshold")
            for r in rows:
                print(f"{r[0]},{r[1]},{susy_core.format_float(r[2])},{r[3]},{r[4]}")
    else:
        _emit(output.dumps(payload), cfg.out)
    return 0


def cmd_verify(args):
    names = list(checks.CHECKS) if args.all or not args.check else args.check
    unknown = [n for n in names if n not in checks.CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s) {unknown}; valid: {', '.join(checks.CHECKS)}")
    rows = checks.run(names, kernel=args.kernel)
    if not rows:
        raise UsageError(f"no checks apply to kernel {args.kernel!r}")
    print(checks.format_table(rows))
    return 0 if all(r.passed for r in rows) else 1


def cmd_figure(args):
    spec = FIGURES[args.name]
    kernel, s = spec["kernel"], spec["s"]
    grid = pipeline.default_grid(kernel, s, spec["L"], args.points)
    res = pipeline.solve(kernel, s, grid)
    x = grid.x
    stride = max(1, int(round(0.01 / grid.h)))
    half = min(grid.mid, int(spec["window"] / grid.h + 1e-9)) // stride * stride
    # symmetric about the middle node so x = 0 is always sampled
    idx = np.arange(grid.mid - half, grid.mid + half + 1, stride)
    d = _out_dir(args.out)
    stem = f"figure_{args.name}"
    output.write_table(d / f"{stem}.csv", ["x", "V_minus", "V_plus"],
                       [[float(x[i]), float(res.pair.V_minus[i]), float(res.pair.V_plus[i])] for i in idx])
    levels = res.minus.eigenvalues if args.name == "A1" else res.minus.eigenvalues[:1]
    overlay = [{"sector": "minus", "energy": e, "threshold": f}
               for e, f in zip(levels, res.minus.threshold_flags)]
    meta = output.run_metadata(kernel, s=s, g=g_from_s(s), grid=grid, tolerances=TOLERANCES,
                               e_max=res.e_max, delta=res.delta)
    output.write_json(d / f"{stem}_levels.json", {
        "metadata": meta, "status": res.status, "overlay": overlay,
        "minus": res.minus.to_dict(), "plus": res.plus.to_dict(),
    })
    svg = output.svg_plot(
        [(x[idx], res.pair.V_minus[idx], 3, "V_minus"), (x[idx], res.pair.V_plus[idx], 1, "V_plus")],
        hlines=[(o["energy"], f"E = {o['energy']:.6f}") for o in overlay],
        xlim=(-spec["window"], spec["window"]), ylim=spec["ylim"],
        title=f"Figure {args.name}: {kernel.describe()['variant']} kernel, s = {s:.4g}",
    )
    (d / f"{stem}.svg").write_text(svg)
    print(f"{stem}: {len(overlay)} level line(s) at " + ", ".join(f"{o['energy']:.6f}" for o in overlay))
    return 0


def _s_values(args):
    if args.s_values:
        try:
            vals = [float(v) for v in args.s_values.split(",") if v.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --s-values {args.s_values!r}") from exc
    elif args.s_range:
        start, stop, num = args.s_range
        if int(num) != num:
            raise UsageError("--s-range NUM must be an integer")
        vals = list(np.linspace(float(start), float(stop), int(num)))
    else:
        vals = []
    if not vals:
        raise UsageError("sweep needs a non-empty --s-values list or --s-range")
    for v in vals:
        if not (-1.0 < v < 1.0) or v == 0.0:
            raise UsageError(f"s = {v} outside (-1, 0) U (0, 1)")
    return sorted(vals)


def sweep_row(kernel, s, L, points, e_max):
    grid = pipeline.default_grid(kernel, s, L, points)
    res = pipeline.solve(kernel, s, grid, e_max=e_max)
    residual, scale = susy_core.duality_residual(kernel, s, grid)
    rep = res.unbroken
    return {
        "s": float(s),
        "g": g_from_s(s),
        "status": res.status,
        "bound_state_count": len(rep.eigenvalues),
        "threshold_count": int(sum(rep.threshold_flags)),
        "ground_energy": rep.eigenvalues[0] if rep.eigenvalues else None,
        "duality_residual": residual,
        "duality_bound": 1e-9 * scale,
        "pairing_ok": res.pairing.ok,
        "L": grid.L,
        "points": grid.points,
        "h": grid.h,
    }


def cmd_sweep(args):
    kernel = make_kernel(args.kernel, args.omega, args.coeffs, args.table)
    if isinstance(kernel, pipeline.SipOscillator):
        raise UsageError("sweep needs a coupling-dependent kernel")
    values = _s_values(args)
    rows = [sweep_row(kernel, s, args.L, args.points, args.emax) for s in values]
    meta = output.run_metadata(kernel, tolerances=TOLERANCES, s_values=values,
                               L=args.L, points=args.points)
    _emit(output.dumps({"metadata": meta, "rows": rows}), args.out)
    return 0


# --------------------------------------------------------------------------
# parser


def _kernel_options(p, kernel_default="constant"):
    p.add_argument("--kernel", choices=KERNELS, default=kernel_default)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--coeffs", help="poly kernel: c0,c1,... multiplying x^0, x^2, ...")
    p.add_argument("--table", help="table kernel: CSV with header x,k")


def _grid_options(p):
    p.add_argument("--L", type=float, default=None, help="grid half extent (default depends on kernel and s)")
    p.add_argument("--points", type=int, default=spectral.DEFAULT_POINTS)
    p.add_argument("--emax", type=float, default=None)


def _coupling_options(p):
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--g", type=float)
    grp.add_argument("--s", type=float)


def build_parser():
    parser = argparse.ArgumentParser(prog="susy-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dual-pair", help="partner potentials at s and -s as CSV")
    _kernel_options(p)
    _coupling_options(p)
    _grid_options(p)
    p.add_argument("--format", choices=("csv",), default="csv")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_dual_pair)

    p = sub.add_parser("spectrum", help="bound states of both sectors and their pairing")
    _kernel_options(p)
    _coupling_options(p)
    _grid_options(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run the invariant checks")
    p.add_argument("--all", action="store_true")
    p.add_argument("--check", action="append", metavar="NAME", help=f"one of: {', '.join(checks.CHECKS)}")
    p.add_argument("--kernel", choices=KERNELS, default=None, help="restrict kernel-dependent checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figure", help="curve, level and SVG data for a figure")
    p.add_argument("name", choices=sorted(FIGURES))
    p.add_argument("--points", type=int, default=spectral.DEFAULT_POINTS)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("sweep", help="per-s summary over a coupling range")
    _kernel_options(p)
    _grid_options(p)
    p.add_argument("--s-values", help="comma-separated s values")
    p.add_argument("--s-range", nargs=3, type=float, metavar=("START", "STOP", "NUM"))
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SusyLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
