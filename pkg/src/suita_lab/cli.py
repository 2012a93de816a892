"""suita-lab: compute volumes, kernels and F; scan, maximize, verify.

Exit codes: 0 ok, 1 verification failure, 2 bad parameters,
3 numerical non-convergence, 4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import __version__, analysis, bergman, closed_form, oracle
from .domains import EllipsoidSpec, VolumeResult
from .errors import (ConstraintError, ConvergenceError, CoverageError, DomainError, GeometryError,
                     ParameterError)
from .quadrature import QuadratureSpec

SCHEMA_VERSION = 1
CSV_HEADER = ["family", "m", "b", "kernel", "volume", "F"]
EXIT_OK, EXIT_VERIFY, EXIT_PARAM, EXIT_CONVERGENCE, EXIT_IO = 0, 1, 2, 3, 4

# b ranges: (lower, upper, upper is open)
B_VALID = {"em": (0.0, 1.0), "l1diag": (0.0, 0.5), "l1offdiag": (0.0, 1.0)}
B_SCAN_DEFAULT = {"em": (0.0, 0.999), "l1diag": (0.0, 0.49), "l1offdiag": (0.0, 0.999)}


def fmt(x) -> str:
    """17 significant digits; round-trips binary64."""
    if x is None:
        return ""
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    subcommand: str
    family: str = "em"
    m: List[float] = field(default_factory=list)
    b: Optional[float] = None
    b_min: Optional[float] = None
    b_max: Optional[float] = None
    points: int = 200
    method: str = "closed"
    n: Optional[int] = None
    tol_abs: Optional[float] = None
    tol_rel: Optional[float] = None
    out: Optional[str] = None
    format: str = "csv"
    continue_b14: bool = False
    figure: Optional[str] = None
    suites: List[str] = field(default_factory=list)

    def validate(self) -> "RunConfig":
        if self.family == "em":
            if self.subcommand in ("volume", "kernel", "suita", "scan") and not self.m:
                raise ParameterError("--family em needs --m")
            for m in self.m:
                if not m >= 0.5 or not math.isfinite(m):
                    raise ParameterError(f"m must be a finite number >= 1/2, got {m!r}")
        elif self.m:
            raise ParameterError(f"--m does not apply to --family {self.family}")
        if self.subcommand in ("volume", "kernel", "suita"):
            if len(self.m) > 1:
                raise ParameterError("give a single --m")
            if self.b is None:
                raise ParameterError("--b is required")
            self._check_b(self.b)
        if self.subcommand == "scan":
            lo, hi = B_SCAN_DEFAULT[self.family]
            self.b_min = lo if self.b_min is None else self.b_min
            self.b_max = hi if self.b_max is None else self.b_max
            self._check_b(self.b_min)
            self._check_b(self.b_max)
            if not self.b_min < self.b_max:
                raise ParameterError("--b-min must be below --b-max")
            if self.points < 2:
                raise ParameterError("--points must be >= 2")
            if self.continue_b14 and self.family != "l1diag":
                raise ParameterError("--continue-b14 applies to --family l1diag only")
        if self.n is not None and self.n < 1:
            raise ParameterError("--n must be positive")
        for t in (self.tol_abs, self.tol_rel):
            if t is not None and not t > 0:
                raise ParameterError("tolerances must be positive")
        return self

    def _check_b(self, b):
        lo, hi = B_VALID[self.family]
        if not (lo <= b < hi):
            raise ParameterError(f"b={b!r} outside [{lo:g}, {hi:g}) for --family {self.family}")

    def spec(self) -> EllipsoidSpec:
        return EllipsoidSpec.omega(self.m[0]) if self.family == "em" else EllipsoidSpec.l1()


# ---------------------------------------------------------------------------
# output

def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def rows_to_csv(rows: Sequence[analysis.ScanRow], with_b14: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (["F_b14"] if with_b14 else []))
    for r in rows:
        line = [r.family, fmt(r.m), fmt(r.b), fmt(r.kernel), fmt(r.volume), fmt(r.F)]
        if with_b14:
            line.append(fmt(r.F_b14))
        w.writerow(line)
    return buf.getvalue()


def rows_to_json(rows: Sequence[analysis.ScanRow], with_b14: bool = False) -> str:
    cols = CSV_HEADER + (["F_b14"] if with_b14 else [])
    data = []
    for r in rows:
        d = {"family": r.family, "m": r.m, "b": r.b, "kernel": r.kernel, "volume": r.volume,
             "F": r.F}
        if with_b14:
            d["F_b14"] = r.F_b14
        data.append(d)
    return _json({"schema_version": SCHEMA_VERSION, "columns": cols, "rows": data})


def _result_dict(res: VolumeResult) -> dict:
    d = {"value": res.value, "method": res.method, "branch": res.branch, "b": res.b,
         "err_est": res.err_est, "domain": res.spec.label()}
    meta = {k: v for k, v in res.meta.items() if isinstance(v, (int, float, str, dict))}
    if meta:
        d["meta"] = meta
    return d


def _print_mapping(d: dict, cfg: RunConfig) -> None:
    if cfg.format == "json":
        _emit(_json({"schema_version": SCHEMA_VERSION, **d}), cfg.out)
        return
    lines = [f"{k}={fmt(v) if isinstance(v, float) else v}" for k, v in d.items()
             if not isinstance(v, dict)]
    _emit("\n".join(lines) + "\n", cfg.out)


# ---------------------------------------------------------------------------
# commands

def compute_volume(cfg: RunConfig) -> VolumeResult:
    fam, b, method = cfg.family, cfg.b, cfg.method
    qs = QuadratureSpec(cfg.tol_abs or oracle.PARAM_SPEC.abs_tol,
                        cfg.tol_rel or oracle.PARAM_SPEC.rel_tol,
                        oracle.PARAM_SPEC.max_subdivisions)
    if fam == "em":
        m = cfg.m[0]
        if method == "closed":
            return closed_form.volume_em(m, b)
        if method == "param":
            return oracle.volume_param_integral(cfg.spec(), b, qs)
        if method == "shadow":
            return oracle.volume_reinhardt_shadow(m, b, cfg.n or 10000)
    elif fam == "l1diag":
        if method == "closed":
            return closed_form.volume_l1_diag(b)
        if method == "param":
            return oracle.volume_param_integral(cfg.spec(), b, qs)
        if method == "gauge":
            return oracle.volume_gauge_l1(b, cfg.n or 100000)
    else:
        if method == "closed":
            return VolumeResult(closed_form.volume_l1_offdiag(b), "closed", b, EllipsoidSpec.l1(),
                                "OFF_DIAGONAL")
        if method == "gauge":
            return oracle.volume_gauge_l1_axis(b, cfg.n or 100000)
    raise ParameterError(f"--method {method} is not available for --family {fam}")


def kernel_value(family: str, m: Optional[float], b: float) -> float:
    if family == "em":
        return bergman.kernel_em_axis(m, b)
    if family == "l1diag":
        return bergman.kernel_l1_diag(b)
    return bergman.kernel_l1((b, 0.0))


def cmd_volume(cfg: RunConfig) -> int:
    _print_mapping(_result_dict(compute_volume(cfg)), cfg)
    return EXIT_OK


def cmd_kernel(cfg: RunConfig) -> int:
    m = cfg.m[0] if cfg.m else None
    k = kernel_value(cfg.family, m, cfg.b)
    _print_mapping({"family": cfg.family, "m": m, "b": cfg.b, "kernel": k}, cfg)
    return EXIT_OK


def cmd_suita(cfg: RunConfig) -> int:
    m = cfg.m[0] if cfg.m else None
    r = analysis.scan_row(cfg.family, cfg.b, m)
    _print_mapping({"family": r.family, "m": r.m, "b": r.b, "kernel": r.kernel,
                    "volume": r.volume, "F": r.F}, cfg)
    return EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    bs = np.linspace(cfg.b_min, cfg.b_max, cfg.points)
    rows: List[analysis.ScanRow] = []
    for m in (cfg.m or [None]):
        rows += analysis.scan(cfg.family, bs, m=m, continue_b14=cfg.continue_b14)
    text = (rows_to_json if cfg.format == "json" else rows_to_csv)(rows, cfg.continue_b14)
    _emit(text, cfg.out)
    if cfg.figure:
        from .figures import plot_rows
        plot_rows(rows, cfg.figure)
    return EXIT_OK


def cmd_maximize(cfg: RunConfig) -> int:
    m = cfg.m[0] if cfg.m else None
    r = analysis.maximize_f(cfg.family, m=m)
    d = {"family": r.family, "max": r.max, "iterations": r.iterations}
    d.update({f"argmax_{k}": v for k, v in r.argmax.items()})
    d.update({k: v for k, v in r.meta.items()})
    _print_mapping(d, cfg)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .verification import SUITES, run_suite

    names = cfg.suites or list(SUITES)
    reports = [run_suite(s, cfg.n) for s in names]
    ok = all(r.passed for r in reports)
    body = {"schema_version": SCHEMA_VERSION, "passed": ok,
            "suites": [r.to_dict() for r in reports]}
    _emit(_json(body), cfg.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_smoothness(cfg: RunConfig) -> int:
    reps = analysis.smoothness_probe()
    if cfg.format == "json":
        body = {"schema_version": SCHEMA_VERSION, "probes": [
            {"order": r.order, "side": r.side, "extrapolated": r.extrapolated,
             "exact": r.exact, "rel_error": r.rel_error,
             "divergence_exponent": r.divergence_exponent, "flagged": r.flagged,
             "step_ladder": [list(s) for s in r.step_ladder]} for r in reps]}
        _emit(_json(body), cfg.out)
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["order", "side", "extrapolated", "exact", "rel_error", "divergence_exponent"])
    for r in reps:
        w.writerow([r.order, r.side, fmt(r.extrapolated), fmt(r.exact), fmt(r.rel_error),
                    fmt(r.divergence_exponent)])
    _emit(buf.getvalue(), cfg.out)
    return EXIT_OK


COMMANDS = {"volume": cmd_volume, "kernel": cmd_kernel, "suita": cmd_suita, "scan": cmd_scan,
            "maximize": cmd_maximize, "verify": cmd_verify, "smoothness": cmd_smoothness}


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="suita-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, b_single=True):
        sp.add_argument("--family", choices=("em", "l1diag", "l1offdiag"), default="em")
        sp.add_argument("--m", type=float, action="append", default=[],
                        help="exponent of Omega_m (repeat to scan several)")
        if b_single:
            sp.add_argument("--b", type=float)
        sp.add_argument("--out", help="write here instead of stdout")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    for name in ("volume", "kernel", "suita"):
        sp = sub.add_parser(name)
        common(sp)
        if name == "volume":
            sp.add_argument("--method", choices=("closed", "param", "shadow", "gauge"),
                            default="closed")
            sp.add_argument("--n", type=int, help="directions (gauge) or curve points (shadow)")
            sp.add_argument("--tol-abs", type=float)
            sp.add_argument("--tol-rel", type=float)
    sp = sub.add_parser("scan")
    common(sp, b_single=False)
    sp.add_argument("--b-min", type=float)
    sp.add_argument("--b-max", type=float)
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--continue-b14", action="store_true",
                    help="add F from the b <= 1/4 formula continued past 1/4")
    sp.add_argument("--figure", help="also render the curves to this image file")
    sp = sub.add_parser("maximize")
    common(sp, b_single=False)
    sp = sub.add_parser("verify")
    sp.add_argument("--suite", action="append", default=[], dest="suites")
    sp.add_argument("--n", type=int, help="directions for the gauge suites")
    sp.add_argument("--out")
    sp = sub.add_parser("smoothness")
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    known = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in ns.items() if k in known and v is not None})


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as e:
        # argparse usage errors, --help and --version
        return int(e.code or 0)
    try:
        cfg.validate()
        return COMMANDS[cfg.subcommand](cfg)
    except (ParameterError, DomainError, ConstraintError) as e:
        print(f"suita-lab: {e}", file=sys.stderr)
        return EXIT_PARAM
    except (ConvergenceError, CoverageError, GeometryError) as e:
        print(f"suita-lab: numerical failure: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as e:
        print(f"suita-lab: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
