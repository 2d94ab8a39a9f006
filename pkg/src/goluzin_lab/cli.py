"""Command-line front end.

Subcommands: ``params`` (parameter-pack inspection), ``pointwise`` (the
derivative-ratio bounds at one point), ``area`` (the area-type bound for
one map and base point), ``gronwall`` (the coefficient area theorem),
``sweep`` (a grid of pointwise checks, optionally with area checks), and
``selftest`` (fast internal invariant suite).

Exit codes: 0 all checks hold (or reach their expected equality), 1 a
bound is violated beyond tolerance, 2 numerical non-convergence, 64 usage
error.  Complex literals use the form ``1.5+0.5i`` with no spaces.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .catalog import catalog, resolve_map
from .elliptic import params_from_x0, x0_from_zeta_abs
from .errors import QuadratureError
from .inequalities import (
    AREA_SPEC,
    PsiEvaluator,
    VerificationReport,
    goluzin_bound,
    gronwall_check,
    koebe_bieberbach_bound,
    pointwise_from_area,
    verify_area_disk,
    verify_area_sigma,
)
from .maps import BridgeMaps, phi_from_psi
from .quadrature import QuadratureSpec

log = logging.getLogger("goluzin_lab")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_NONCONVERGENCE = 2
EXIT_USAGE = 64

CSV_COLUMNS = [
    "inequality",
    "lhs",
    "rhs",
    "ratio",
    "error_estimate",
    "status",
    "map",
    "point",
    "rel_tol",
    "abs_tol",
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' / 'a-bi' / 'a' / 'bi' literals (no spaces)."""
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError as exc:
        raise ValueError(f"cannot parse complex literal {text!r}") from exc


def format_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _emit(reports: list[VerificationReport], fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        text = json.dumps({"reports": [r.to_dict() for r in reports]}, indent=2, sort_keys=True)
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for r in reports:
            row = dict(r.to_dict())
            inputs = row.pop("inputs", {})
            row["map"] = inputs.get("map", "")
            row["point"] = inputs.get("zeta", inputs.get("z", inputs.get("x0", "")))
            row["rel_tol"] = inputs.get("rel_tol", "")
            row["abs_tol"] = inputs.get("abs_tol", "")
            writer.writerow(row)
        text = buf.getvalue()
    else:
        lines = []
        for r in reports:
            inputs = r.inputs
            where = inputs.get("zeta", inputs.get("z", inputs.get("x0", "")))
            lines.append(
                f"{r.inequality:<20s} map={inputs.get('map', '-'):<16s} at={where!s:<22s} "
                f"lhs={r.lhs:.10g} rhs={r.rhs:.10g} ratio={r.ratio:.8f} "
                f"err={r.error_estimate:.2e} status={r.status}"
            )
        text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_code(reports: list[VerificationReport]) -> int:
    return EXIT_VIOLATION if any(r.status == "violated" for r in reports) else EXIT_OK


def _spec_from_args(args, default: QuadratureSpec) -> QuadratureSpec:
    return QuadratureSpec(
        rel_tol=args.rel_tol if args.rel_tol is not None else default.rel_tol,
        abs_tol=args.abs_tol if args.abs_tol is not None else default.abs_tol,
    )


def _cmd_params(args) -> int:
    if args.x0 is not None:
        params = params_from_x0(args.x0)
    else:
        params = params_from_x0(x0_from_zeta_abs(args.zeta_abs))
    payload = params.to_dict()
    text = json.dumps(payload, indent=2, sort_keys=True) if args.format != "csv" else "\n".join(
        f"{k},{v}" for k, v in sorted(payload.items())
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text)
    return EXIT_OK


def _cmd_pointwise(args) -> int:
    m = resolve_map(args.map)
    z = parse_complex(args.z)
    reports = []
    if m.map_class == "S":
        reports.append(koebe_bieberbach_bound(m, z))
    else:
        reports.append(goluzin_bound(m, z))
        reports.append(pointwise_from_area(PsiEvaluator(m, z)))
    _emit(reports, args.format, args.out)
    return _exit_code(reports)


def _cmd_area(args) -> int:
    m = resolve_map(args.map)
    zeta = parse_complex(args.zeta)
    spec = _spec_from_args(args, AREA_SPEC)
    reports = [verify_area_sigma(m, zeta, spec)]
    if args.with_disk_form:
        bridge = BridgeMaps.from_zeta(zeta)
        reports.append(verify_area_disk(phi_from_psi(bridge, m), bridge.x0, spec))
    _emit(reports, args.format, args.out)
    return _exit_code(reports)


def _cmd_gronwall(args) -> int:
    m = resolve_map(args.map)
    spec = _spec_from_args(args, QuadratureSpec(rel_tol=1e-8, abs_tol=1e-12))
    reports = [gronwall_check(m, spec)]
    _emit(reports, args.format, args.out)
    return _exit_code(reports)


def _sweep_grid():
    for radius in (1.25, 1.5, 2.0, 3.0):
        for arg in (0.0, math.pi / 4.0, math.pi / 2.0):
            yield radius * complex(math.cos(arg), math.sin(arg))


def _cmd_sweep(args) -> int:
    names = args.maps or [m.name for m in catalog() if m.map_class == "Sigma"]
    maps = [resolve_map(n) for n in names]
    spec = _spec_from_args(args, AREA_SPEC)
    tasks = [(m, zeta) for m in maps for zeta in _sweep_grid()]

    def run(task):
        m, zeta = task
        out = [goluzin_bound(m, zeta), pointwise_from_area(PsiEvaluator(m, zeta))]
        if args.area:
            out.append(verify_area_sigma(m, zeta, spec))
        return out

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(run, tasks))
    else:
        chunks = [run(t) for t in tasks]
    reports = [r for chunk in chunks for r in chunk]
    _emit(reports, args.format, args.out)
    return _exit_code(reports)


def _cmd_selftest(args) -> int:
    checks: list[tuple[str, bool, str]] = []

    def record(name, ok, detail=""):
        checks.append((name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}{(' : ' + detail) if detail else ''}")

    xs = np.arange(0.05, 0.951, 0.05)
    leg = max(abs(params_from_x0(float(x)).legendre_residual()) for x in xs)
    record("legendre-relation", leg < 1e-12, f"max residual {leg:.2e}")
    lan = max(max(abs(r) for r in params_from_x0(float(x)).landen_residuals()) for x in xs)
    record("landen-relations", lan < 1e-12 * params_from_x0(0.5).K, f"max residual {lan:.2e}")

    from .theta import JacobiContext, jacobi_sn_cn_dn
    from .torus import GreenEvaluator, Q_D, dzbar_Q_D, green_G

    p = params_from_x0(0.5)
    ctx = JacobiContext(p, "kappa")
    rng = np.random.default_rng(0)
    z = rng.uniform(-p.K, p.K, 16) + 1j * rng.uniform(-0.45 * p.K_prime, 0.45 * p.K_prime, 16)
    sn, cn, dn = jacobi_sn_cn_dn(ctx, z)
    res = float(np.abs(sn**2 + cn**2 - 1.0).max())
    record("sn2+cn2=1", res < 1e-10, f"max residual {res:.2e}")

    ev = GreenEvaluator.from_params(p)
    zz = rng.uniform(-2 * p.L, 2 * p.L, 8) + 1j * rng.uniform(-0.45 * p.L_prime, 0.45 * p.L_prime, 8)
    ww = rng.uniform(-2 * p.L, 2 * p.L, 8) + 1j * rng.uniform(-0.45 * p.L_prime, 0.45 * p.L_prime, 8)
    sym = float(np.abs(green_G(ev, zz, ww) - green_G(ev, ww, zz)).max())
    record("green-symmetry", sym < 1e-10, f"max residual {sym:.2e}")
    odd = float(np.abs(Q_D(ev, -zz) + Q_D(ev, zz)).max())
    record("q-odd", odd < 1e-10, f"max residual {odd:.2e}")
    tgt = -p.M**2 * p.E_prime / p.K_prime
    dev = abs(dzbar_Q_D(ev, 0.0) - tgt)
    record("dzbar-q-at-0", dev < 1e-10, f"deviation {dev:.2e}")

    jk = resolve_map("joukowski")
    ok = all(goluzin_bound(jk, t).status == "equality" for t in (1.2, 1.5, 2.0, 3.0))
    record("goluzin-joukowski-equality", ok)
    kb = resolve_map("koebe")
    ok = all(koebe_bieberbach_bound(kb, t).status == "equality" for t in (0.0, 0.3, 0.6, 0.9))
    record("koebe-bieberbach-equality", ok)
    gr = gronwall_check(jk)
    record("gronwall-joukowski", gr.status == "equality" and gr.inputs["route_residual"] < 1e-6)

    if args.full:
        r = verify_area_sigma(jk, 2.0)
        record("area-sigma-joukowski", r.status == "equality", f"ratio {r.ratio:.6f}")

    failed = [c for c in checks if not c[1]]
    print(f"{len(checks) - len(failed)}/{len(checks)} selftest checks passed")
    return EXIT_OK if not failed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="goluzin-lab", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--out", default=None, help="write the report to this path instead of stdout")
        p.add_argument("--rel-tol", type=float, default=None)
        p.add_argument("--abs-tol", type=float, default=None)

    p = sub.add_parser("params", help="print the elliptic parameter pack")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--x0", type=float)
    grp.add_argument("--zeta-abs", type=float)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_params)

    p = sub.add_parser("pointwise", help="pointwise derivative-ratio bounds at one point")
    p.add_argument("--map", required=True)
    p.add_argument("--z", required=True, help="evaluation point, e.g. 1.5+0.5i")
    add_common(p)
    p.set_defaults(fn=_cmd_pointwise)

    p = sub.add_parser("area", help="area-type bound for one map / base point")
    p.add_argument("--map", required=True)
    p.add_argument("--zeta", required=True)
    p.add_argument("--with-disk-form", action="store_true", help="also run the unit-disk form")
    add_common(p)
    p.set_defaults(fn=_cmd_area)

    p = sub.add_parser("gronwall", help="coefficient area theorem for one map")
    p.add_argument("--map", required=True)
    add_common(p)
    p.set_defaults(fn=_cmd_gronwall)

    p = sub.add_parser("sweep", help="grid of checks over the catalog")
    p.add_argument("--maps", nargs="*", default=None)
    p.add_argument("--area", action="store_true", help="include the (slow) area checks")
    p.add_argument("--jobs", type=int, default=1)
    add_common(p)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("selftest", help="fast internal invariant suite")
    p.add_argument("--full", action="store_true", help="include one area verification")
    p.set_defaults(fn=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("GOLUZIN_LAB_LOG", "WARNING").upper())
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except QuadratureError as exc:
        log.error("non-convergence: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
