"""Command line front end.

    sardquad coeffs    --a 0 --b 1 --N 10 --omega 1.01 [--format json|csv]
    sardquad integrate --integrand x --N 10 --omega 1.01
    sardquad tables    [--paper-style]
    sardquad verify    [--N 2,5,10] [--omega 0,0.3]

Exit status: 0 success, 1 usage error, 2 numeric failure or tolerance breach.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .coefficients import DEFAULT_EPS_RES, CoefficientSet, Interval, coeffs_interval
from .errors import (
    ConfigurationError,
    ContractError,
    DomainError,
    EvaluationError,
    NumericError,
    RegimeError,
    SolverError,
)
from .oracle import compare, solve_interval
from .quadrature import INTEGRANDS, apply, apply_samples, exact_for, optimal_coefficients
from .tables import PUBLISHED, TABLE_NUMBER, build_table, mantissa_exponent

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

VERIFY_NS = (2, 5, 10, 20, 50)
VERIFY_OMEGAS = (0.0, 0.3, 0.505, 1.01, 10.01)
VERIFY_TOL = 1e-8

DEFAULTS = {
    "a": -1.0,
    "b": 1.0,
    "N": None,
    "omega": None,
    "integrand": "none",
    "eps_res": DEFAULT_EPS_RES,
    "format": None,
    "out": None,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    a: float = -1.0
    b: float = 1.0
    N: list[int] = field(default_factory=list)
    omega: list[float] = field(default_factory=list)
    integrand: str = "none"
    eps_res: float = DEFAULT_EPS_RES
    format: str = "json"
    out: str | None = None
    samples: str | None = None
    paper_style: bool = False
    perturb: float = 0.0

    def scalar_N(self) -> int:
        if len(self.N) != 1:
            raise UsageError(f"{self.command} needs exactly one --N")
        return self.N[0]

    def scalar_omega(self) -> float:
        if len(self.omega) != 1:
            raise UsageError(f"{self.command} needs exactly one --omega")
        return self.omega[0]


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def _int_list(text) -> list[int]:
    try:
        out = [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc
    return out


def _float_list(text) -> list[float]:
    try:
        out = [float(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc
    if not all(math.isfinite(v) for v in out):
        raise UsageError("frequencies must be finite")
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--a", type=float, default=None, help="left endpoint (default -1)")
    shared.add_argument("--b", type=float, default=None, help="right endpoint (default 1)")
    shared.add_argument("--N", default=None, help="number of steps; comma list for verify")
    shared.add_argument("--omega", default=None, help="frequency; comma list for verify")
    shared.add_argument("--eps-res", dest="eps_res", type=float, default=None)
    shared.add_argument("--format", choices=("csv", "json"), default=None)
    shared.add_argument("--out", default=None, help="output file (default stdout)")
    shared.add_argument("--config", default=None, help="key = value defaults file")

    parser = _Parser(prog="sardquad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("coeffs", parents=[shared], help="print optimal weights")
    p = sub.add_parser("integrate", parents=[shared], help="apply the rule to an integrand")
    p.add_argument("--integrand", default=None, help="one, x, exp_x or x_exp_x")
    p.add_argument("--samples", default=None, help="CSV file with columns x,re,im")
    p = sub.add_parser("tables", parents=[shared], help="reproduce the published error tables")
    p.add_argument("--paper-style", action="store_true", help="mantissa(exponent) numbers")
    p.add_argument("--integrand", default=None, help="restrict to one table")
    p = sub.add_parser("verify", parents=[shared], help="closed form vs dense oracle")
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    fmt = merged["format"] or ("csv" if args.command == "tables" else "json")
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt!r}")
    try:
        a, b, eps = float(merged["a"]), float(merged["b"]), float(merged["eps_res"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return RunConfig(
        command=args.command,
        a=a,
        b=b,
        N=_int_list(merged["N"]) if merged["N"] is not None else [],
        omega=_float_list(merged["omega"]) if merged["omega"] is not None else [],
        integrand=str(merged["integrand"]),
        eps_res=eps,
        format=fmt,
        out=merged["out"],
        samples=getattr(args, "samples", None),
        paper_style=getattr(args, "paper_style", False),
        perturb=getattr(args, "perturb", 0.0) or 0.0,
    )


# -- serialisation ---------------------------------------------------------------


def coefficients_to_dict(cs: CoefficientSet) -> dict:
    aux = cs.aux
    parts = {}
    for name in ("K", "a1", "b1"):
        v = getattr(aux, name) if aux is not None else None
        parts[f"{name}_re"] = None if v is None else float(complex(v).real)
        parts[f"{name}_im"] = None if v is None else float(complex(v).imag)
    out = {
        "a": cs.interval.a,
        "b": cs.interval.b,
        "N": cs.interval.N,
        "omega": float(cs.omega),
        "regime": cs.regime.value,
        "lambda1": cs.lambda1,
        "weights": [
            {"beta": k, "re": float(w.real), "im": float(w.imag)} for k, w in enumerate(cs.weights)
        ],
        "aux": parts,
    }
    if cs.p0 is not None:
        out["p0_re"], out["p0_im"] = cs.p0.real, cs.p0.imag
        out["d_re"], out["d_im"] = cs.d.real, cs.d.imag
    if cs.warning:
        out["warning"] = cs.warning
    return out


def weights_from_dict(data: dict) -> np.ndarray:
    rows = sorted(data["weights"], key=lambda r: r["beta"])
    return np.array([complex(r["re"], r["im"]) for r in rows])


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(config: RunConfig, text: str):
    if config.out:
        with open(config.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- commands --------------------------------------------------------------------


def cmd_coeffs(config: RunConfig) -> int:
    interval = Interval(config.a, config.b, config.scalar_N())
    cs = optimal_coefficients(config.scalar_omega(), interval, config.eps_res)
    if config.format == "json":
        text = _json_text(coefficients_to_dict(cs))
    else:
        text = _csv_text(
            ("beta", "re", "im"),
            [(k, repr(float(w.real)), repr(float(w.imag))) for k, w in enumerate(cs.weights)],
        )
    total = complex(cs.weights.sum())
    print(f"# regime={cs.regime.value} sum of weights = {total.real:.17g}{total.imag:+.17g}j", file=sys.stderr)
    _emit(config, text)
    return EXIT_OK


def read_samples(path: str, interval: Interval) -> np.ndarray:
    """Load ``x,re,im`` rows; nodes must sit on the lattice within 1e-12*h."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["x", "re", "im"]:
            raise UsageError(f"{path}: header must be x,re,im")
        try:
            rows = [(float(r["x"]), complex(float(r["re"]), float(r["im"]))) for r in reader]
        except (TypeError, ValueError) as exc:
            raise UsageError(f"{path}: line {reader.line_num}: {exc}") from exc
    nodes = interval.nodes
    if len(rows) != len(nodes):
        raise UsageError(f"{path}: expected {len(nodes)} samples, found {len(rows)}")
    rows.sort(key=lambda r: r[0])
    xs = np.array([r[0] for r in rows])
    off = np.abs(xs - nodes)
    if off.max() > 1e-12 * interval.h:
        k = int(off.argmax())
        raise UsageError(f"{path}: x={xs[k]!r} is not lattice node {nodes[k]!r}")
    return np.array([r[1] for r in rows])


def cmd_integrate(config: RunConfig) -> int:
    interval = Interval(config.a, config.b, config.scalar_N())
    omega = config.scalar_omega()
    cs = optimal_coefficients(omega, interval, config.eps_res)
    if config.samples:
        name = config.samples
        approx = apply_samples(cs, read_samples(config.samples, interval))
        exact = None
    else:
        if config.integrand not in INTEGRANDS:
            raise UsageError(f"unknown integrand {config.integrand!r}; choose from {', '.join(INTEGRANDS)}")
        f = INTEGRANDS[config.integrand]
        name = f.id
        approx = apply(cs, f)
        exact = exact_for(f, omega, interval)
    R = None if exact is None else abs(approx - exact)
    record = {
        "integrand": name,
        "omega": omega,
        "N": interval.N,
        "a": interval.a,
        "b": interval.b,
        "regime": cs.regime.value,
        "approx_re": approx.real,
        "approx_im": approx.imag,
        "exact_re": None if exact is None else exact.real,
        "exact_im": None if exact is None else exact.imag,
        "R": R,
    }
    if config.format == "json":
        text = _json_text(record)
    else:
        text = _csv_text(list(record), [["" if v is None else (repr(v) if isinstance(v, float) else v) for v in record.values()]])
    _emit(config, text)
    return EXIT_OK


def cmd_tables(config: RunConfig) -> int:
    names = list(PUBLISHED)
    if config.integrand not in ("none", ""):
        if config.integrand not in PUBLISHED:
            raise UsageError(f"no published table for {config.integrand!r}")
        names = [config.integrand]
    reports = [build_table(n, eps_res=config.eps_res) for n in names]
    fmt = mantissa_exponent if config.paper_style else (lambda x: f"{x:.6e}")
    rows = []
    for rep in reports:
        for row in rep.cells:
            for c in row:
                rows.append(
                    {
                        "integrand": rep.integrand,
                        "omega": c.record.omega,
                        "N": c.record.N,
                        "R_computed": fmt(c.record.R),
                        "R_paper": fmt(c.expected),
                        "rel_dev": f"{c.rel_dev:.3e}",
                        "pass": "true" if c.passed else "false",
                    }
                )
    if config.format == "json":
        text = _json_text(rows)
    else:
        header = ("integrand", "omega", "N", "R_computed", "R_paper", "rel_dev", "pass")
        text = _csv_text(header, [[r[k] for k in header] for r in rows])
    _emit(config, text)
    bad = [c for rep in reports for c in rep.failures()]
    for rep in reports:
        n_bad = len(rep.failures())
        print(f"# table {TABLE_NUMBER[rep.integrand]} ({rep.integrand}): {n_bad} cell(s) outside tolerance", file=sys.stderr)
    return EXIT_NUMERIC if bad else EXIT_OK


def verify_grid(config: RunConfig) -> list[tuple[float, int]]:
    Ns = config.N or list(VERIFY_NS)
    grid = []
    for N in Ns:
        if config.omega:
            omegas = list(config.omega)
        else:
            h = (config.b - config.a) / N
            omegas = list(VERIFY_OMEGAS) + [1.0 / h, 2.0 / h]
        grid.extend((w, N) for w in omegas)
    return grid


def kernel_checks(h: float = 0.1, M: int = 200) -> list[tuple[str, float, float]]:
    """(name, max deviation, allowance) for the lattice identities."""
    ctx = kernel.KernelContext.from_step(h)
    out = []
    conv = kernel.convolve_check(ctx, M)
    dev = np.abs(conv.values - kernel.delta(conv.half_width).values)
    inner = np.abs(conv.betas) <= 50
    out.append(("d2*g2 = delta", float(dev[inner].max()), 1e-8))
    samples = {
        "d2*exp(+x) = 0": np.exp,
        "d2*exp(-x) = 0": lambda x: np.exp(-x),
        "d2*1 = 0": np.ones_like,
        "d2*x = 0": lambda x: x,
    }
    for name, s in samples.items():
        vals = np.abs(kernel.convolve_check(ctx, M, s).values)
        bound = kernel.truncation_bound(ctx, M, s)
        worst = int(np.argmax(vals - bound))
        out.append((name, float(vals[worst]), float(bound[worst])))
    return out


def cmd_verify(config: RunConfig) -> int:
    lines = []
    failures = []
    for omega, N in verify_grid(config):
        interval = Interval(config.a, config.b, N)
        ref = solve_interval(omega, interval, config.eps_res)
        closed = coeffs_interval(omega, interval, config.eps_res)
        if config.perturb:
            w = np.array(closed.weights)
            w[0] += config.perturb
            closed = CoefficientSet(w, closed.interval, closed.omega, closed.regime, closed.aux)
        dev = compare(ref, closed)
        ok = dev <= VERIFY_TOL
        lines.append(
            {
                "check": "oracle",
                "omega": omega,
                "N": N,
                "regime": closed.regime.value,
                "max_dev": dev,
                "tol": VERIFY_TOL,
                "pass": ok,
            }
        )
        if not ok:
            failures.append(f"omega={omega!r} N={N}")
    for name, dev, tol in kernel_checks():
        ok = dev <= tol
        lines.append({"check": name, "max_dev": dev, "tol": tol, "pass": ok})
        if not ok:
            failures.append(name)

    if config.format == "json":
        text = _json_text({"results": lines, "failures": failures})
    else:
        header = ("check", "omega", "N", "regime", "max_dev", "tol", "pass")
        text = _csv_text(header, [[_cell(r.get(k)) for k in header] for r in lines])
    _emit(config, text)
    if failures:
        print("verify: tolerance exceeded for " + "; ".join(failures), file=sys.stderr)
        return EXIT_NUMERIC
    print(f"verify: {len(lines)} checks passed", file=sys.stderr)
    return EXIT_OK


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.3e}"
    return v


COMMANDS = {
    "coeffs": cmd_coeffs,
    "integrate": cmd_integrate,
    "tables": cmd_tables,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_config(args)
        return COMMANDS[config.command](config)
    except (UsageError, DomainError, ConfigurationError, ContractError, RegimeError, OSError) as exc:
        print(f"sardquad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, SolverError, EvaluationError) as exc:
        print(f"sardquad: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
