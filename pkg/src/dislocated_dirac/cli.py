"""Command-line front end: parameter queries, scan campaigns and validation reports.

Every command writes a table.  CSV output starts with a ``# schema=v1``
comment line followed by a header; JSON output carries the same columns
and rows.  Complex numbers are written as separate ``_re``/``_im`` columns
and read in ``a+bi`` form.  Errors map to exit codes: 2 for domain and
configuration errors, 3 for violated hypotheses, 4 for convergence
failures, and 1 when a validation suite reports a failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .birman_schwinger import (det_I_plus_Q, find_det_zero, first_order_root, potential_grid,
                               q_norm_certificate, weak_coupling_first_order)
from .bounds import lambda_region_membership, resolvent_norm_enclosure
from .errors import ConfigError, DiracError
from .oracle import auto_grid, resolvent_norm
from .params import SpectralPoint, classify_region, compute_params
from .potential import MatrixPotential
from .step import (StepConfig, eigen_equation_residual, eigen_special_points, real_eigenvalue_scan,
                   step_matrix_scaled_det)
from .validation import SUITES, run_suite

SCHEMA = "v1"


def parse_complex(token: str) -> complex:
    """Parse ``a+bi``, ``a``, ``bi``, ``-i`` and similar literals."""
    t = token.strip().replace(" ", "")
    try:
        if "j" in t or "J" in t or not t:
            raise ValueError
        return complex(t.replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse complex number {token!r}; use the form a+bi") from None


def parse_grid(spec: str) -> tuple[np.ndarray, np.ndarray]:
    """``re_lo:re_hi:n_re,im_lo:im_hi:n_im`` to the two axes."""
    try:
        re_s, im_s = spec.split(",")
        axes = []
        for part in (re_s, im_s):
            lo, hi, n = part.split(":")
            n = int(n)
            if n < 2:
                raise ConfigError(f"grid resolution must be at least 2 in {part!r}")
            axes.append(np.linspace(float(lo), float(hi), n))
    except ValueError as exc:
        raise ConfigError(f"cannot parse grid {spec!r}: expected re_lo:re_hi:n,im_lo:im_hi:n") from exc
    return axes[0], axes[1]


def parse_range(spec: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in spec.split(":"))
    except ValueError as exc:
        raise ConfigError(f"cannot parse window {spec!r}: expected lo:hi") from exc
    return lo, hi


def parse_eps(spec: str) -> list[float]:
    try:
        vals = [float(v) for v in spec.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse eps list {spec!r}") from exc
    if not vals or any(v <= 0 for v in vals):
        raise ConfigError("eps entries must be positive")
    return vals


def parse_oracle(spec: str) -> tuple[float, int]:
    try:
        r, order = spec.split(":")
        return float(r), int(order)
    except ValueError as exc:
        raise ConfigError(f"cannot parse oracle settings {spec!r}: expected R:order") from exc


# Output


class TableWriter:
    """Writes rows in a fixed column order, streaming CSV or collecting JSON."""

    def __init__(self, command: str, columns: list[str], fmt: str, out: Path | None, append: bool = False):
        self.command, self.columns, self.fmt, self.out = command, columns, fmt, out
        self.rows: list[list] = []
        self._fh = None
        if fmt == "csv":
            if out is None:
                self._fh = sys.stdout
            else:
                self._fh = open(out, "a" if append else "w", newline="")
            self._csv = csv.writer(self._fh)
            if not append:
                self._fh.write(f"# schema={SCHEMA} command={command}\n")
                self._csv.writerow(columns)

    def write(self, row: dict):
        vals = [row.get(c, "") for c in self.columns]
        if self.fmt == "csv":
            self._csv.writerow([_csv_cell(v) for v in vals])
            self._fh.flush()
        else:
            self.rows.append([_json_cell(v) for v in vals])

    def close(self):
        if self.fmt == "json":
            doc = json.dumps({"schema": SCHEMA, "command": self.command, "columns": self.columns,
                              "rows": self.rows}, indent=1)
            if self.out is None:
                sys.stdout.write(doc + "\n")
            else:
                self.out.write_text(doc + "\n")
        elif self._fh is not None and self._fh is not sys.stdout:
            self._fh.close()


def _csv_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _json_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def _cx(prefix: str, value) -> dict:
    value = complex(value) if value is not None else complex(np.nan, np.nan)
    return {f"{prefix}_re": value.real, f"{prefix}_im": value.imag}


def _cx_cols(*names: str) -> list[str]:
    return [f"{n}_{part}" for n in names for part in ("re", "im")]


def existing_rows(path: Path | None) -> int:
    """Number of data rows already present in a CSV output (for ``--resume``)."""
    if path is None or not path.exists():
        return 0
    lines = [ln for ln in path.read_text().splitlines() if ln and not ln.startswith("#")]
    return max(len(lines) - 1, 0)


def _grid_points(axes) -> list[complex]:
    re_ax, im_ax = axes
    return [complex(x, y) for y in im_ax for x in re_ax]


def _map(func, items, threads: int):
    """Ordered map over a worker pool (results come back in input order)."""
    if threads <= 1:
        yield from map(func, items)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(func, items)


# Commands


PARAM_FIELDS = ("mu_minus", "mu_plus", "w_minus", "w_plus", "k", "eta_minus", "eta_plus")


def cmd_params(args) -> int:
    z = parse_complex(args.z)
    p = SpectralPoint.from_complex(z, args.m)
    q = compute_params(p, step_offset=args.b)
    tag = classify_region(p)
    cols = ["m"] + _cx_cols("z", *PARAM_FIELDS, "mu0", "w0") + ["region"] + _cx_cols("corner") + ["provenance"]
    row = {"m": args.m, **_cx("z", z), "region": tag.region.value, "provenance": "CLOSED_FORM"}
    for name in PARAM_FIELDS + ("mu0", "w0"):
        row.update(_cx(name, getattr(q, name)))
    row.update(_cx("corner", tag.corner))
    w = TableWriter("params", cols, args.format or "json", args.out)
    w.write(row)
    w.close()
    return 0


PSEUDO_COLS = ["index", "re", "im", "lower", "upper", "bounds_provenance", "in_pseudospec",
               "lambda_plus", "lambda_minus", "oracle_norm", "oracle_provenance", "region", "status"]


def _pseudo_row(z, args, oracle):
    p = SpectralPoint.from_complex(z, args.m)
    row = {"re": z.real, "im": z.imag}
    try:
        row["region"] = classify_region(p).region.value
        lo, hi, prov = resolvent_norm_enclosure(p)
        row.update(lower=lo, upper=hi, bounds_provenance=prov, status="ok")
        level = 1 / args.eps
        row["in_pseudospec"] = "yes" if lo > level else "no" if hi <= level else "undecided"
        if args.m > 0:
            lp, lm = lambda_region_membership(p, args.alpha, args.eps)
            row.update(lambda_plus=lp, lambda_minus=lm)
        if oracle is not None and math.isfinite(hi):
            R, order = oracle
            row["oracle_norm"] = resolvent_norm(p, auto_grid(p, order=order, max_radius=R)).value
            row["oracle_provenance"] = "ORACLE"
    except DiracError as exc:
        row["status"] = type(exc).__name__
    return row


def cmd_pseudospec(args) -> int:
    pts = _grid_points(parse_grid(args.grid))
    oracle = parse_oracle(args.oracle) if args.oracle else None
    skip = existing_rows(args.out) if args.resume and args.format == "csv" else 0
    w = TableWriter("pseudospec", PSEUDO_COLS, args.format, args.out, append=skip > 0)
    todo = list(enumerate(pts))[skip:]
    try:
        for (i, _), row in zip(todo, _map(lambda item: _pseudo_row(item[1], args, oracle), todo, args.threads)):
            row["index"] = i
            w.write(row)
    except KeyboardInterrupt:
        w.close()
        print("interrupted; rerun with --resume to continue after the rows written", file=sys.stderr)
        return 130
    w.close()
    return 0


def cmd_validate(args) -> int:
    checks = run_suite(args.suite, args.seed)
    w = TableWriter("validate", ["suite", "check", "measured", "tolerance", "passed"], args.format, args.out)
    for c in checks:
        w.write({"suite": c.suite, "check": c.name, "measured": c.measured,
                 "tolerance": c.tolerance, "passed": c.passed})
    w.close()
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(f"FAIL {c.suite}: {c.name} (measured {c.measured:.3g}, tolerance {c.tolerance:.3g})",
              file=sys.stderr)
    return 1 if failed else 0


def _load_potential(args) -> MatrixPotential:
    if not args.potential:
        raise ConfigError("--potential FILE is required")
    return MatrixPotential.load(args.potential)


def cmd_bs(args) -> int:
    V = _load_potential(args)
    grid = potential_grid(V, args.order, args.panels_per_unit)
    if args.z is not None:
        z = find_det_zero(parse_complex(args.z), args.m, V, grid, coupling=args.coupling)
        cert = q_norm_certificate(SpectralPoint.from_complex(z, args.m), V)
        cols = _cx_cols("z") + ["det_abs", "nodes", "provenance"]
        w = TableWriter("bs-root", cols, args.format, args.out)
        w.write({**_cx("z", z), "det_abs": abs(det_I_plus_Q(z, args.m, V, grid, args.coupling)),
                 "nodes": grid.size, "provenance": "ORACLE"})
        w.close()
        if cert.bound * abs(args.coupling) < 1:
            print("warning: the norm certificate excludes an eigenvalue here", file=sys.stderr)
        return 0
    pts = _grid_points(parse_grid(args.grid))

    def row(z):
        out = {"re": z.real, "im": z.imag}
        try:
            d = det_I_plus_Q(z, args.m, V, grid, args.coupling)
            cert = q_norm_certificate(SpectralPoint.from_complex(z, args.m), V)
            out.update(det_re=d.real, det_im=d.imag, det_abs=abs(d), det_provenance="ORACLE",
                       q_bound=abs(args.coupling) * cert.bound, q_bound_formula=cert.formula_used,
                       excluded=abs(args.coupling) * cert.bound < 1, bound_provenance="BOUND", status="ok")
        except DiracError as exc:
            out["status"] = type(exc).__name__
        return out

    cols = ["index", "re", "im", "det_re", "det_im", "det_abs", "det_provenance", "q_bound",
            "q_bound_formula", "excluded", "bound_provenance", "status"]
    w = TableWriter("bs", cols, args.format, args.out)
    for i, r in enumerate(_map(row, pts, args.threads)):
        r["index"] = i
        w.write(r)
    w.close()
    return 0


def cmd_step(args) -> int:
    cfg = StepConfig(args.a, args.b, args.m)
    if args.grid:
        pts = _grid_points(parse_grid(args.grid))
        cols = ["index", "re", "im", "scaled_det_abs", "provenance", "status"]
        w = TableWriter("step-det", cols, args.format, args.out)
        for i, z in enumerate(pts):
            r = {"index": i, "re": z.real, "im": z.imag, "provenance": "CLOSED_FORM", "status": "ok"}
            try:
                r["scaled_det_abs"] = abs(step_matrix_scaled_det(cfg, z))
            except DiracError as exc:
                r["status"] = type(exc).__name__
            w.write(r)
        w.close()
        return 0
    if not args.window:
        raise ConfigError("step needs --window lo:hi or --grid")
    roots = real_eigenvalue_scan(cfg, parse_range(args.window))
    half = np.pi / (2 * cfg.a)
    cols = ["index", "kind", "z", "equation_residual", "scaled_det_abs", "spacing", "spacing_over_half_period",
            "provenance"]
    w = TableWriter("step", cols, args.format, args.out)
    for i, r in enumerate(roots):
        sp = r - roots[i - 1] if i else float("nan")
        w.write({"index": i, "kind": "root", "z": r, "equation_residual": abs(eigen_equation_residual(cfg, r)),
                 "scaled_det_abs": abs(step_matrix_scaled_det(cfg, r)), "spacing": sp,
                 "spacing_over_half_period": sp / half, "provenance": "CLOSED_FORM"})
    for z, is_eig, val in eigen_special_points(cfg):
        if is_eig:
            w.write({"index": len(roots), "kind": "special", "z": z.real, "equation_residual": abs(val),
                     "provenance": "CLOSED_FORM"})
    w.close()
    return 0


def cmd_weak(args) -> int:
    V = _load_potential(args)
    grid = potential_grid(V, args.order, args.panels_per_unit)
    eps_list = sorted(parse_eps(args.eps), reverse=True)
    m = args.m
    z = parse_complex(args.z) if args.z else args.sign * np.sqrt(m / eps_list[0])
    cols = ["eps"] + _cx_cols("z_star") + ["lhs"] + _cx_cols("eps_a_z") + [
        "residual", "residual_over_eps2"] + _cx_cols("first_order_root") + ["provenance"]
    w = TableWriter("weak", cols, args.format, args.out)
    prev = None
    for eps in eps_list:
        if prev is not None:
            z = z * np.sqrt(prev / eps)
        z = find_det_zero(z, m, V, grid, coupling=eps)
        rep = weak_coupling_first_order(SpectralPoint.from_complex(z, m), V, grid)
        try:
            z1 = first_order_root(m, V, eps, z, grid)
        except DiracError:
            z1 = None
        res = rep.residual(eps)
        w.write({"eps": eps, **_cx("z_star", z), "lhs": rep.lhs, **_cx("eps_a_z", eps * rep.a_z),
                 "residual": res, "residual_over_eps2": res / eps**2, **_cx("first_order_root", z1),
                 "provenance": "ORACLE"})
        prev = eps
    w.close()
    return 0


# Parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dislocated-dirac", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, default_fmt="csv"):
        p.add_argument("--out", type=Path, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=default_fmt)
        p.add_argument("--threads", type=int, default=1, help="worker threads for grid scans")

    p = sub.add_parser("params", help="spectral parameters and region tag at one point")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--z", required=True, help="complex point, e.g. 0+0.5i")
    p.add_argument("--b", type=float, default=None, help="step offset for mu0, w0")
    common(p, default_fmt=None)

    p = sub.add_parser("pseudospec", help="resolvent-norm bounds and region flags on a grid")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--grid", required=True, help="re_lo:re_hi:n_re,im_lo:im_hi:n_im")
    p.add_argument("--eps", type=float, default=0.02)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--oracle", help="R:order, adds the oracle norm column (expensive)")
    p.add_argument("--resume", action="store_true", help="append after the rows already in --out")
    common(p)

    p = sub.add_parser("validate", help="run a module self-check suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--seed", type=int, default=0)
    common(p)

    for name, helptext in (("bs", "det(I + Q) heat map or a refined zero"),
                           ("weak", "weak-coupling table over a list of couplings")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--m", type=float, required=True)
        p.add_argument("--potential", required=True, help="potential definition (JSON)")
        p.add_argument("--order", type=int, default=16)
        p.add_argument("--panels-per-unit", type=float, default=4.0)
        p.add_argument("--z", help="starting point of the root search")
        if name == "bs":
            p.add_argument("--grid", help="re_lo:re_hi:n_re,im_lo:im_hi:n_im")
            p.add_argument("--coupling", type=float, default=1.0)
        else:
            p.add_argument("--eps", required=True, help="comma-separated couplings")
            p.add_argument("--sign", type=int, choices=(1, -1), default=1, help="track the root near +-sqrt(m/eps)")
        common(p)

    p = sub.add_parser("step", help="real eigenvalues for the step potential")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--window", help="lo:hi real search window")
    p.add_argument("--grid", help="complex determinant scan instead of the real search")
    common(p)
    return ap


COMMANDS = {"params": cmd_params, "pseudospec": cmd_pseudospec, "validate": cmd_validate,
            "bs": cmd_bs, "step": cmd_step, "weak": cmd_weak}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "bs" and args.z is None and args.grid is None:
        print("error: bs needs --grid or --z", file=sys.stderr)
        return 2
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except DiracError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
