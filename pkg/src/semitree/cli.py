"""
Command-line front end.

Every subcommand writes a table (CSV or JSON) whose complex quantities are
split into ``re_*`` and ``im_*`` columns.  Exit codes: 0 success, 1 usage
error, 2 verification failure, 3 capacity exceeded.

Example::

    semitree spectrum --q-plus 5 --q-minus 2 --p 3 --samples 64
    semitree spherical --q-plus 3 --q-minus 5 --gamma=0.4,0.2 --depth 20
    semitree verify --format json --out report.json
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .branch_kernels import (
    BranchCutError,
    PoleError,
    alt_generalized_poisson,
    endpoints,
    generalized_poisson,
    hitting_F,
    in_cut,
    poisson_kernel,
)
from .oracle import F_series, monte_carlo_hitting
from .spectra import (
    Gamma_of_z,
    abs_B,
    boundary_curve,
    conjugate_exponent,
    lp_range_of_spherical,
    membership,
    parse_p,
    spectral_radius,
)
from .spherical import arc_sum_eval, closed_form, gamma_squared_of_z, recurrence_eval, z_of_gamma
from .tree_core import CapacityError, TreeParams, arc_partition, horospherical_index

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _gamma_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")


def _p_arg(text: str) -> float:
    try:
        return parse_p(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q-plus", type=int, default=5)
    common.add_argument("--q-minus", type=int, default=2)
    common.add_argument("--p", type=_p_arg, default=2.0, help='exponent in [1, inf]; "inf" allowed')
    common.add_argument("--gamma", type=_gamma_arg, default=complex(1.0),
                        help="eigenvalue as RE,IM (write --gamma=-1,0 for a negative part)")
    common.add_argument("--depth", type=int, default=None,
                        help="distance, series order or ball radius (command-specific default)")
    common.add_argument("--samples", type=int, default=None, help="curve points or random gamma")
    common.add_argument("--walks", type=int, default=None, help="Monte Carlo walks per start class")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semitree", description=__doc__.split("\n\n")[1])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()
    sub.add_parser("spectrum", parents=[common], help="boundary of the lp spectrum of mu1")
    sub.add_parser("radius-curve", parents=[common], help="lp spectral radius over a p-grid")
    sub.add_parser("spherical", parents=[common], help="spherical function by three evaluators")
    sub.add_parser("hitting", parents=[common], help="F+- by closed form, series and Monte Carlo")
    sub.add_parser("poisson", parents=[common], help="harmonic and generalized Poisson kernels")
    sub.add_parser("zmap", parents=[common], help="eigenvalue map and its inverse")
    sub.add_parser("classify", parents=[common], help="spectrum membership and lp class")
    v = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    v.add_argument("--perturb", type=float, default=0.0,
                   help="relative perturbation injected into B (self-test)")
    v.add_argument("--pairs", default="2,3,5",
                   help="degrees combined into all (q+, q-) pairs")
    return parser


def _opt(value, default: int) -> int:
    return default if value is None else value


def _depth(args, default: int) -> int:
    return _opt(args.depth, default)


def _validate(args) -> TreeParams:
    if args.q_plus < 2 or args.q_minus < 2:
        raise UsageError("--q-plus and --q-minus must be at least 2")
    if args.samples is not None and args.samples < 8:
        raise UsageError("--samples must be at least 8")
    if args.depth is not None and args.depth < 1:
        raise UsageError("--depth must be at least 1")
    if args.walks is not None and args.walks < 1:
        raise UsageError("--walks must be positive")
    return TreeParams(args.q_plus, args.q_minus)


# ---------------------------------------------------------------------------
# output


def _clean(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return None if math.isnan(x) else x
    return x


def _p_out(p: float):
    return "inf" if math.isinf(p) else p


class Table:
    """Column-oriented result with metadata, rendered as CSV or JSON."""

    def __init__(self, command: str, columns: list[str], meta: dict | None = None):
        self.command = command
        self.columns = columns
        self.meta = dict(meta or {})
        self.rows: list[list] = []

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row length does not match the header")
        self.rows.append(list(values))

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "meta": {k: _clean(v) for k, v in self.meta.items()},
            "columns": self.columns,
            "records": [dict(zip(self.columns, map(_clean, r))) for r in self.rows],
        }
        return json.dumps(doc, indent=1) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.meta.items():
            buf.write(f"# {k}={_fmt(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(x) for x in r])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _meta(params: TreeParams, **extra) -> dict:
    e = endpoints(params)
    meta = {"q_plus": params.q_plus, "q_minus": params.q_minus, "a": e.a, "b": e.b}
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# commands


def cmd_spectrum(args, params: TreeParams) -> Table:
    p = args.p
    curve = boundary_curve(params, p, _opt(args.samples, 256))
    zero = membership(params, p, 0)
    meta = _meta(params, p=_p_out(p), rho_p=spectral_radius(params, p),
                 zero_in_spectrum=zero.in_spectrum,
                 zero_isolated=zero.includes_isolated_zero,
                 zero_note=zero.note or "none")
    t = Table("spectrum", ["theta", "re_gamma2", "im_gamma2", "re_gamma_sheet1",
                           "im_gamma_sheet1", "re_gamma_sheet2", "im_gamma_sheet2"], meta)
    for th, g2, s1, s2 in zip(curve.theta, curve.gamma2, curve.sheet1, curve.sheet2):
        t.add(th, g2.real, g2.imag, s1.real, s1.imag, s2.real, s2.imag)
    return t


def cmd_radius_curve(args, params: TreeParams) -> Table:
    t = Table("radius-curve", ["p", "inv_p", "rho"], _meta(params))
    for inv in np.linspace(1.0, 0.0, _opt(args.samples, 101)):
        p = math.inf if inv == 0 else 1 / inv
        t.add(_p_out(p), inv, spectral_radius(params, p))
    return t


def _safe(fn):
    try:
        return complex(fn())
    except (BranchCutError, PoleError, ValueError):
        return complex(math.nan, math.nan)


def cmd_spherical(args, params: TreeParams) -> Table:
    g = args.gamma
    N = _depth(args, 40)
    rec = recurrence_eval(params, g, N).values
    closed = [_safe(lambda n=n: closed_form(params, g, n)) for n in range(N + 1)]
    arcs = [_safe(lambda n=n: arc_sum_eval(params, g, n)) for n in range(N + 1)]
    meta = _meta(params, re_gamma=g.real, im_gamma=g.imag, on_cut=in_cut(params, g))
    t = Table("spherical", ["n", "re_closed", "im_closed", "re_recurrence", "im_recurrence",
                            "re_arc_sum", "im_arc_sum", "max_rel_dev"], meta)
    for n in range(N + 1):
        vals = [v for v in (closed[n], rec[n], arcs[n]) if not math.isnan(v.real)]
        dev = 0.0
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                scale = max(abs(vals[i]), abs(vals[j]), 1e-300)
                dev = max(dev, abs(vals[i] - vals[j]) / scale)
        t.add(n, closed[n].real, closed[n].imag, rec[n].real, rec[n].imag,
              arcs[n].real, arcs[n].imag, dev)
    return t


def cmd_hitting(args, params: TreeParams) -> Table:
    g = args.gamma
    meta = _meta(params, re_gamma=g.real, im_gamma=g.imag, series_order=_depth(args, 200),
                 walks=_opt(args.walks, 100_000), seed=args.seed, mc_gamma=1.0)
    t = Table("hitting", ["sign", "re_F", "im_F", "re_series", "im_series", "tail_bound",
                          "F_at_1", "mc_estimate", "mc_stderr"], meta)
    import warnings

    for sign in (1, -1):
        F = _safe(lambda: hitting_F(params, g, sign))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            s = F_series(params, sign, g, _depth(args, 200))
        mc = monte_carlo_hitting(params, sign, _opt(args.walks, 100_000), seed=args.seed)
        t.add("+" if sign > 0 else "-", F.real, F.imag, s.partial_sum.real, s.partial_sum.imag,
              s.tail_bound, hitting_F(params, 1.0, sign).real, mc.estimate, mc.stderr)
    return t


def cmd_poisson(args, params: TreeParams) -> Table:
    g = args.gamma
    meta = _meta(params, re_gamma=g.real, im_gamma=g.imag)
    t = Table("poisson", ["n", "k", "h", "arc_measure", "harmonic", "re_K", "im_K",
                          "re_K_alt", "im_K_alt"], meta)
    for n in range(_depth(args, 6) + 1):
        arcs = arc_partition(params, n).measures
        par = 1 if n % 2 == 0 else -1
        for k in range(n + 1):
            h = horospherical_index(k, n)
            K = _safe(lambda: generalized_poisson(params, par, h, g))
            Kt = _safe(lambda: alt_generalized_poisson(params, par, h, g))
            t.add(n, k, h, float(arcs[k]), poisson_kernel(params, n, k),
                  K.real, K.imag, Kt.real, Kt.imag)
    return t


def cmd_zmap(args, params: TreeParams) -> Table:
    g = args.gamma
    t = Table("zmap", ["re_gamma", "im_gamma", "re_z", "im_z", "re_gamma2", "im_gamma2",
                       "roundtrip_residual", "re_Gamma_plus", "im_Gamma_plus",
                       "re_Gamma_minus", "im_Gamma_minus"], _meta(params))
    z = z_of_gamma(params, g)
    g2 = gamma_squared_of_z(params, z)
    resid = abs(g2 - g * g) / max(abs(g * g), 1e-300)
    gp = Gamma_of_z(params, z, 1)
    gm = Gamma_of_z(params, z, -1)
    t.add(g.real, g.imag, z.real, z.imag, g2.real, g2.imag, resid, gp.real, gp.imag,
          gm.real, gm.imag)
    return t


def cmd_classify(args, params: TreeParams) -> Table:
    g, p = args.gamma, args.p
    q = membership(params, p, g)
    t = Table("classify", ["p", "re_gamma", "im_gamma", "verdict", "in_spectrum",
                           "isolated_zero", "note", "abs_B", "lp_lower", "lp_bounded",
                           "phi_in_lp"], _meta(params))
    try:
        r = lp_range_of_spherical(params, g)
        lower, bounded, inside = r.lower, r.bounded, r.contains(p)
    except BranchCutError:
        # on the cuts |B| = 1: phi is in lp exactly for p > 2
        lower, bounded, inside = 2.0, True, p > 2
    t.add(_p_out(p), g.real, g.imag, q.verdict, q.in_spectrum, q.includes_isolated_zero,
          q.note or "none", abs_B(params, g), lower, bounded, inside)
    return t


def cmd_verify(args, _params: TreeParams) -> tuple[Table, bool]:
    from .verify import run_suite

    degrees = [int(x) for x in args.pairs.split(",") if x.strip()]
    if any(d < 2 for d in degrees):
        raise UsageError("--pairs entries must be at least 2")
    rows = run_suite(
        [TreeParams(a, b) for a in degrees for b in degrees],
        samples=_opt(args.samples, 200),
        depth=_depth(args, 8),
        walks=_opt(args.walks, 20_000),
        seed=args.seed,
        tol=args.tol,
        perturb=args.perturb,
    )
    t = Table("verify", ["check", "q_plus", "q_minus", "value", "tolerance", "passed"],
              {"seed": args.seed, "perturb": args.perturb})
    ok = True
    for r in rows:
        t.add(r.name, r.q_plus, r.q_minus, r.value, r.tolerance, r.passed)
        ok &= r.passed
    t.meta["all_passed"] = ok
    return t, ok


COMMANDS = {
    "spectrum": cmd_spectrum,
    "radius-curve": cmd_radius_curve,
    "spherical": cmd_spherical,
    "hitting": cmd_hitting,
    "poisson": cmd_poisson,
    "zmap": cmd_zmap,
    "classify": cmd_classify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = _validate(args)
        status = EXIT_OK
        if args.command == "verify":
            table, ok = cmd_verify(args, params)
            status = EXIT_OK if ok else EXIT_VERIFY
        else:
            table = COMMANDS[args.command](args, params)
    except UsageError as exc:
        print(f"semitree: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"semitree: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    text = table.render(args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
