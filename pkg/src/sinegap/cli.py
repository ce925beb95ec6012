"""Command line interface: ``sinegap {eval,regimes,sweep,verify,mc}``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

from . import asymptotics as asy
from .errors import ConvergenceError, PrecisionEnvelopeError, RegimeError
from .fredholm import GapParams, log_det, log_det_lu
from .thinning import McConfig, mc_gue_gap_estimate

METHODS = ("numeric", "lu", "eq2", "eq3", "eq5", "eq6")
B_MODES = ("unit", "kappa_up", "omit")
CSV_HEADER = ("s", "v", "gamma", "kappa", "regime", "method", "ln_D", "err_est", "a", "V", "tau_im", "theta", "residual_vs_numeric")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2
_DOMAIN_ERRORS = (ValueError, ArithmeticError)


class UsageError(Exception):
    pass


@dataclass
class OutputRow:
    s: float
    v: float
    gamma: float
    kappa: float
    regime: str
    method: str
    ln_D: float | None = None
    err_est: float | None = None
    a: float | None = None
    V: float | None = None
    tau_im: float | None = None
    theta: float | None = None
    residual_vs_numeric: float | None = None
    error: str | None = None


@dataclass
class SweepSpec:
    s_grid: list[float]
    v_grid: list[float] | None = None
    kappa_grid: list[float] | None = None
    methods: tuple[str, ...] = ("numeric",)
    b_mode: str = "unit"
    output_path: str = "sweep.csv"

    def __post_init__(self):
        if (self.v_grid is None) == (self.kappa_grid is None):
            raise UsageError("exactly one of v_grid / kappa_grid is required")
        for name in ("s_grid", "v_grid", "kappa_grid"):
            g = getattr(self, name)
            if g is None:
                continue
            if not g:
                raise UsageError(f"{name} is empty")
            if not all(math.isfinite(x) for x in g):
                raise UsageError(f"{name} must be finite")
            if any(b <= a for a, b in zip(g, g[1:])):
                raise UsageError(f"{name} must be strictly increasing")
        self.methods = tuple(_parse_methods(self.methods))
        if self.b_mode not in B_MODES:
            raise UsageError(f"b_mode must be one of {B_MODES}")

    def points(self) -> list[tuple[float, float]]:
        if self.v_grid is not None:
            return [(s, v) for s in self.s_grid for v in self.v_grid]
        return [(s, k * s) for s in self.s_grid for k in self.kappa_grid]


def _parse_methods(methods) -> list[str]:
    if isinstance(methods, str):
        methods = [m for m in methods.split(",") if m]
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise UsageError(f"unknown method(s) {bad}; choose from {','.join(METHODS)}")
    return list(methods)


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class EvalOptions:
    precision: str = "baseline"
    tol: float = 1e-12
    unsafe_envelope: bool = False
    b_mode: str = "unit"


def _regime_label(p: GapParams) -> str:
    return "+".join(str(r) for r in asy.classify(p))


def _one(p: GapParams, method: str, opts: EvalOptions) -> OutputRow:
    row = OutputRow(p.s, p.v, p.gamma, p.kappa, _regime_label(p), method)
    try:
        if method == "numeric":
            rep = log_det(p, opts.tol, opts.precision, opts.unsafe_envelope)
        elif method == "lu":
            rep = log_det_lu(p, opts.tol)
        elif method == "eq2":
            if not (math.isinf(p.v) or p.kappa > asy.saturation_edge_kappa(p.s)):
                raise RegimeError("eq2 describes gamma = 1 and the saturation band only")
            rep = asy.eq2_lnD(p.s)
        elif method == "eq3":
            if math.isinf(p.v):
                raise RegimeError("eq3 needs finite v")
            rep = asy.eq3_lnD(p.s, p.v)
        elif method == "eq5":
            rep = asy.eq5_lnD(p.s, p.v)
        else:
            data = asy.solve_modulus(p.kappa) if 0 < p.kappa < 1 else None
            rep = asy.eq6_lnD(p.s, p.v, opts.b_mode, data)
            row.a, row.V, row.tau_im = data.a, data.V, data.tau_im
            row.theta = math.exp(rep.components["theta"])
        row.ln_D, row.err_est = rep.ln_D, rep.err_est
    except _DOMAIN_ERRORS as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def evaluate_point(p: GapParams, methods, opts: EvalOptions) -> list[OutputRow]:
    rows = [_one(p, m, opts) for m in methods]
    num = next((r for r in rows if r.method == "numeric" and r.ln_D is not None), None)
    if num is not None:
        for r in rows:
            if r is not num and r.ln_D is not None:
                r.residual_vs_numeric = num.ln_D - r.ln_D
    return rows


def _eval_job(job):
    s, v, methods, opts = job
    return evaluate_point(GapParams(s, v), methods, opts)


# ---------------------------------------------------------------------------
# formatting


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "inf" if math.isinf(x) else repr(x)
    return str(x)


def rows_to_csv(rows: list[OutputRow], extra: tuple[str, ...] = ()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + extra)
    for r in rows:
        d = asdict(r)
        w.writerow([_fmt(d[c]) for c in CSV_HEADER + extra])
    return buf.getvalue()


def _json_safe(d: dict) -> dict:
    return {k: ("inf" if isinstance(v, float) and math.isinf(v) else v) for k, v in d.items()}


def rows_to_json(rows: list[OutputRow], linear: bool = False) -> str:
    out = []
    for r in rows:
        d = {k: v for k, v in asdict(r).items() if k != "error" or v is not None}
        if linear and r.ln_D is not None:
            d["D"] = math.exp(r.ln_D)
        out.append(_json_safe(d))
    return json.dumps(out, indent=2)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fail(kind: str, msg: str) -> int:
    _emit(json.dumps({"error": msg, "kind": kind}))
    return EXIT_USAGE


# ---------------------------------------------------------------------------
# commands


def _params_from_args(args) -> GapParams:
    if (args.v is None) == (args.gamma is None):
        raise UsageError("give exactly one of --v / --gamma")
    if args.v is not None and not math.isfinite(args.v):
        raise UsageError("v must be finite; use --gamma 1 for v = infinity")
    if args.gamma is not None:
        return GapParams.from_gamma(args.s, args.gamma)
    return GapParams(args.s, args.v)


def _opts(args) -> EvalOptions:
    return EvalOptions(args.precision, args.tol, args.unsafe_envelope, getattr(args, "b_mode", "unit"))


def cmd_eval(args) -> int:
    p = _params_from_args(args)
    rows = evaluate_point(p, _parse_methods(args.method), _opts(args))
    if args.format == "json":
        _emit(rows_to_json(rows, args.linear))
    else:
        _emit(rows_to_csv(rows))
    failed = [r for r in rows if r.error]
    for r in failed:
        if args.format == "csv":
            sys.stderr.write(json.dumps({"method": r.method, "error": r.error}) + "\n")
    return EXIT_USAGE if failed else EXIT_OK


def regime_table(s: float) -> list[dict]:
    if s <= 1:
        raise UsageError("regimes needs s > 1")
    ln = math.log(s)
    rows = [{"name": "saturation_edge", "v": asy.saturation_edge_kappa(s) * s}]
    rows += [{"name": f"stokes_k{k}", "v": asy.stokes_curve_v(s, k)} for k in range(6)]
    rows.append({"name": "elliptic_edge", "v": asy.elliptic_edge_kappa(s) * s})
    rows.append({"name": "green_curve", "v": s - 0.25 * ln ** (4.0 / 3.0)})
    rows.append({"name": "ladder_lower_edge", "v": s - 0.5 * (asy.ladder_cap(s) + 0.5) * ln})
    rows.append({"name": "perturbative_edge", "v": s ** (1.0 / 3.0)})
    for r in rows:
        r["kappa"] = r["v"] / s
    return rows


def cmd_regimes(args) -> int:
    rows = regime_table(args.s)
    if args.format == "json":
        _emit(json.dumps({"s": args.s, "ladder_cap": asy.ladder_cap(args.s), "curves": rows}, indent=2))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("name", "v", "kappa"))
        for r in rows:
            w.writerow((r["name"], repr(r["v"]), repr(r["kappa"])))
        _emit(buf.getvalue())
    return EXIT_OK


def run_sweep(spec: SweepSpec, opts: EvalOptions, workers: int = 1) -> list[OutputRow]:
    jobs = [(s, v, spec.methods, opts) for s, v in spec.points()]
    if workers <= 1:
        chunks = map(_eval_job, jobs)
    else:
        pool = ProcessPoolExecutor(workers)
        chunks = pool.map(_eval_job, jobs)
    rows = [r for chunk in chunks for r in chunk]
    if workers > 1:
        pool.shutdown()
    return rows


PLOT_SCRIPT = '''\
"""Regime atlas and residual curves for {csv_name}.

Generated by `sinegap sweep`; needs pandas and matplotlib.
"""
import math
import sys

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

path = sys.argv[1] if len(sys.argv) > 1 else {csv_name!r}
df = pd.read_csv(path)
df = df[np.isfinite(df["v"].astype(float))]

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
for regime, grp in df.drop_duplicates(["s", "v"]).groupby("regime"):
    ax1.scatter(grp["s"], grp["v"], s=12, label=regime)
s = np.linspace(max(df["s"].min(), 1.5), df["s"].max(), 200)
ax1.plot(s, s, "k-", lw=1)
for k in range(4):
    ax1.plot(s, s - 0.25 * (2 * k + 1) * np.log(s), "-.", lw=0.8, color="gray")
ax1.plot(s, s - 0.25 * np.log(s) ** (4 / 3), ":", color="green")
ax1.set_xlabel("s")
ax1.set_ylabel("v")
ax1.legend(fontsize=7)

res = df.dropna(subset=["residual_vs_numeric"])
for method, grp in res.groupby("method"):
    ax2.plot(grp["s"], grp["residual_vs_numeric"], "o-", ms=3, label=method)
ax2.axhline(0, color="k", lw=0.5)
ax2.set_xlabel("s")
ax2.set_ylabel("ln D numeric - ln D asymptotic")
ax2.legend(fontsize=7)
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def _load_sweep_config(path: str) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    allowed = {f.name for f in fields(SweepSpec)}
    unknown = set(cfg) - allowed
    if unknown:
        raise UsageError(f"unknown sweep config keys {sorted(unknown)}")
    return cfg


def cmd_sweep(args) -> int:
    cfg = _load_sweep_config(args.config) if args.config else {}
    for key, val in (
        ("s_grid", args.s_grid),
        ("v_grid", args.v_grid),
        ("kappa_grid", args.kappa_grid),
        ("methods", args.methods),
        ("b_mode", args.b_mode),
        ("output_path", args.output),
    ):
        if val is not None:
            cfg[key] = val
    if "s_grid" not in cfg:
        raise UsageError("sweep needs --s-grid (or s_grid in --config)")
    spec = SweepSpec(**cfg)
    opts = EvalOptions(args.precision, args.tol, args.unsafe_envelope, spec.b_mode)
    rows = run_sweep(spec, opts, args.workers)
    if args.format == "json":
        text = rows_to_json(rows)
    else:
        text = rows_to_csv(rows)
    with open(spec.output_path, "w", newline="") as fh:
        fh.write(text)
    errors = [r for r in rows if r.error]
    if errors:
        with open(spec.output_path + ".errors.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("s", "v", "method", "error"))
            for r in errors:
                w.writerow((_fmt(r.s), _fmt(r.v), r.method, r.error))
    if args.plot_script:
        with open(args.plot_script, "w") as fh:
            fh.write(PLOT_SCRIPT.format(csv_name=spec.output_path))
    sys.stderr.write(f"{len(rows) - len(errors)}/{len(rows)} rows ok -> {spec.output_path}\n")
    return EXIT_OK if len(errors) < len(rows) else EXIT_USAGE


def cmd_verify(args) -> int:
    from .verification import run_suite

    t0 = time.perf_counter()
    checks = run_suite(args.suite, quick=args.quick)
    for c in checks:
        _emit(c.line())
    failed = sum(not c.passed for c in checks)
    _emit(f"{len(checks) - failed}/{len(checks)} checks passed in {time.perf_counter() - t0:.1f}s")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_mc(args) -> int:
    cfg = McConfig(args.s, args.gamma, args.size, args.samples, args.seed)
    est = mc_gue_gap_estimate(cfg, workers=args.workers)
    det = math.exp(log_det(GapParams.from_gamma(cfg.s, cfg.gamma)).ln_D)
    z = (est.p_hat - det) / est.stderr if est.stderr > 0 else math.copysign(math.inf, est.p_hat - det)
    out = {**asdict(est), "det_reference": det, "z_score": z, **asdict(cfg)}
    _emit(json.dumps(out, indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _u64(text: str) -> int:
    val = int(text)
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return val


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--precision", choices=("baseline", "extended"), default=d("baseline"))
    parser.add_argument("--tol", type=float, default=d(1e-12), help="target tolerance for the numeric determinant")
    parser.add_argument("--format", choices=("csv", "json"), default=d("json"))
    parser.add_argument("--seed", type=_u64, default=d(20180901), help="Monte Carlo master seed")
    parser.add_argument("--unsafe-envelope", action="store_true", default=d(False), help="evaluate outside the precision envelope")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sinegap", description="Sine-kernel gap probabilities: numerics and asymptotics.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate ln D at one point")
    _global_flags(p, suppress=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--v", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--method", default="numeric", help=f"comma list from {','.join(METHODS)}")
    p.add_argument("--b-mode", choices=B_MODES, default="unit")
    p.add_argument("--linear", action="store_true", help="also report D = exp(ln D) (JSON only)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("regimes", help="Stokes curves and regime edges at fixed s")
    _global_flags(p, suppress=True)
    p.add_argument("--s", type=float, required=True)
    p.set_defaults(func=cmd_regimes)

    p = sub.add_parser("sweep", help="evaluate over an (s, v) or (s, kappa) grid")
    _global_flags(p, suppress=True)
    p.add_argument("--config", help="JSON file with SweepSpec fields")
    p.add_argument("--s-grid", type=_floats)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--v-grid", type=_floats)
    g.add_argument("--kappa-grid", type=_floats)
    p.add_argument("--methods")
    p.add_argument("--b-mode", choices=B_MODES)
    p.add_argument("--output")
    p.add_argument("--plot-script", help="also write a matplotlib script for the CSV")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run invariant and acceptance checks")
    _global_flags(p, suppress=True)
    p.add_argument("suite", nargs="?", default="all", choices=("specialfn", "fredholm", "asymptotics", "thinning", "all"))
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mc", help="Monte Carlo gap estimate from thinned GUE spectra")
    _global_flags(p, suppress=True)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail("UsageError", str(exc))
    except (PrecisionEnvelopeError, ConvergenceError, RegimeError) as exc:
        return _fail(type(exc).__name__, str(exc))
    except _DOMAIN_ERRORS as exc:
        return _fail(type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
