"""Command-line front end.

Subcommands: ``rate``, ``domain``, ``cgf``, ``simulate``, ``verify`` and
``figures``.  Output is CSV (default) or JSON; floats use the shortest
round-trip representation and +inf is written as ``inf``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import cgf, rates, seeding, toeplitz, verification
from .model import Ar1Params, Ma1Params, paths, prefix_statistics

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

RATE_NAMES = ("J", "I1", "I2", "Itheta", "JS", "IXbar", "Kphi", "KS", "IYbar")

DEFAULTS = {
    "theta": "0.0",
    "phi": "0.0",
    "grid": None,
    "n": 256,
    "n_grid": "25:200:36",  # step 5
    "replicates": 10**6,
    "count": 1000,
    "seed": 0,
    "format": "csv",
    "out": None,
    "dense_cap": toeplitz.DENSE_CAP,
    "process": "ar1",
    "pivot": False,
}


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# formatting


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isnan(v):
        raise ValueError("refusing to emit nan")
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            raise ValueError("refusing to emit nan")
        return "inf" if v == math.inf else v
    if isinstance(v, (np.integer, np.bool_)):
        return int(v)
    return v


def render(header, rows, form: str) -> str:
    if form == "json":
        return json.dumps([{k: _json_value(v) for k, v in zip(header, r)} for r in rows]) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
        return
    try:
        sys.stdout.write(text)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        import os

        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())


# --------------------------------------------------------------------------
# parsing helpers


def parse_axis(spec: str) -> np.ndarray:
    try:
        lo, hi, count = spec.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise UsageError(f"bad grid axis {spec!r}; expected min:max:count")
    if count < 2 or not lo < hi:
        if count == 1 and lo == hi:
            return np.array([lo])
        raise UsageError(f"bad grid axis {spec!r}; need count >= 2 and min < max")
    return np.linspace(lo, hi, count)


def parse_values(spec) -> list[float]:
    if isinstance(spec, (int, float)):
        return [float(spec)]
    if isinstance(spec, list):
        return [float(v) for v in spec]
    try:
        return [float(v) for v in str(spec).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad parameter list {spec!r}")


def parse_n_grid(spec) -> list[int]:
    if isinstance(spec, list):
        return [int(v) for v in spec]
    if ":" in str(spec):
        return [int(round(v)) for v in parse_axis(spec)]
    return [int(v) for v in str(spec).split(",")]


def _axes(grid, count: int) -> list[np.ndarray]:
    if not grid:
        raise UsageError("--grid is required")
    if len(grid) != count:
        raise UsageError(f"expected {count} --grid axis/axes, got {len(grid)}")
    return [parse_axis(g) for g in grid]


# --------------------------------------------------------------------------
# commands


def rate_rows(name: str, params: list[float], grid: list[str]):
    if name not in RATE_NAMES:
        raise UsageError(f"unknown rate function {name!r}; choose from {', '.join(RATE_NAMES)}")
    pname = "phi" if name in rates.MA1_RATES else "theta"
    if name in rates.RATES_2D:
        xs, ys = _axes(grid, 2)
        f = rates.RATES_2D[name]
        rows = [(p, x, y, f(x, y, p)) for p in params for x in xs for y in ys]
        return [pname, "x", "y", "value"], rows
    (cs,) = _axes(grid, 1)
    f = rates.RATES_1D[name]
    var = "x" if name == "Kphi" else "c"
    return [pname, var, "value"], [(p, c, f(c, p)) for p in params for c in cs]


def domain_rows(thetas, grid, n=None):
    l1s, l2s = _axes(grid, 2)
    header = ["theta", "lambda1", "lambda2", "tag"] + (["n", "pd"] if n else [])
    rows = []
    for theta in thetas:
        a, b = np.meshgrid(l1s, l2s, indexing="ij")
        tags = toeplitz.domain_tags(a.ravel(), b.ravel(), theta)
        if n:
            pd, _ = toeplitz.pivot_log_det(1.0 - 2.0 * a.ravel(), 1.0 + theta * theta - 2.0 * a.ravel(),
                                           -theta - b.ravel(), n)
        for i, (l1, l2) in enumerate(zip(a.ravel(), b.ravel())):
            tag = ("Outside", "D1", "D2")[int(tags[i])]
            row = (theta, l1, l2, tag)
            rows.append(row + ((n, bool(pd[i])) if n else ()))
    return header, rows


def cgf_rows(kind, params, grid, n, pivot, dense_cap):
    if kind == "ma1":
        (l1s,) = _axes(grid, 1)
        return ["phi", "lambda1", "value"], [(p, l, cgf.l_limit_ma1_qm(l, p)) for p in params for l in l1s]
    l1s, l2s = _axes(grid, 2)
    if kind == "limit":
        return (["theta", "lambda1", "lambda2", "value"],
                [(t, a, b, cgf.l_limit_ar1((a, b), t)) for t in params for a in l1s for b in l2s])
    if not pivot and n > dense_cap:
        raise UsageError(f"n={n} exceeds the dense cap {dense_cap}; pass --pivot for the O(n) route")
    rows = []
    for t in params:
        for a in l1s:
            for b in l2s:
                v = cgf.l_n_ar1_pivot((a, b), t, n) if pivot else cgf.l_n_ar1((a, b), t, n, dense_cap)
                rows.append((t, n, a, b, v))
    return ["theta", "n", "lambda1", "lambda2", "value"], rows


def simulate_rows(process, param, n, count, seed):
    params = Ar1Params(param) if process == "ar1" else Ma1Params(param)
    seeds = seeding.replicate_seeds(seed, 0, count)
    stats = prefix_statistics(paths(params, n, seeds), [n])
    derived = [int(s) for s in seeds]
    if process == "ar1":
        header = ["replicate", "seed", "gamma0", "gamma1", "mean", "yule_walker"]
        cols = ("quad_mean", "lag1_cov", "mean", "yule_walker")
    else:
        header = ["replicate", "seed", "mean", "quad_mean"]
        cols = ("mean", "quad_mean")
    rows = [(r, derived[r], *(stats[c][r, 0] for c in cols)) for r in range(count)]
    return header, rows


FIGURES = {
    "fig1_domain": ("domain", [0.9], ["-2:0.6:131", "-2.5:1:176"]),
    "fig2_domain_union": ("domain", [0.9], ["-2:0.6:131", "-2.5:1:176"]),
    "fig3_J": ("J", [0.3], ["0:3:61", "-3:3:121"]),
    "fig4_I1": ("I1", [0.0, 0.3, 0.6, 0.9], ["0:10:201"]),
    "fig5_I2": ("I2", [-0.99, -0.6, 0.0, 0.6, 0.99], ["-4:4:401"]),
    "fig6_Itheta": ("Itheta", [-0.5, 0.0, 0.5], ["-1:1:201"]),
    "fig7_IXbar": ("IXbar", [-0.5, 0.0, 0.5], ["-10:10:201"]),
    "fig8_Kphi": ("Kphi", [0.2, 0.4, 0.6, 0.8], ["0:5:101"]),
}


def figure_tables():
    """``{file stem: (header, rows)}`` for every figure grid."""
    out = {}
    for stem, (what, params, grid) in FIGURES.items():
        if what == "domain":
            header, rows = domain_rows(params, grid)
            if stem == "fig2_domain_union":
                header = header + ["value"]
                rows = [r + (int(r[3] != "Outside"),) for r in rows]
            out[stem] = (header, rows)
        else:
            out[stem] = rate_rows(what, params, grid)
    # blow-up abscissas of I2: c^2 = (11 + 5 sqrt 5) / denominator
    out["fig5_I2_cutoffs"] = (
        ["theta", "c", "value"],
        [(t, rates.i2_cutoff(t), 2.0 * (1.0 + t * t) ** 2) for t in FIGURES["fig5_I2"][1]],
    )
    return out


def run_verify(suite: str, replicates: int, seed: int, n_grid=verification.MC_GRID):
    results = []
    for check in verification.SUITES[suite]:
        if check is verification.check_montecarlo:
            results.append(check(replicates=replicates, seed=seed, n_grid=n_grid))
        else:
            results.append(check())
    return results


# --------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys mirror flag names; flags win")
    common.add_argument("--theta", help="AR(1) parameter(s), comma separated")
    common.add_argument("--phi", help="MA(1) parameter(s), comma separated")
    common.add_argument("--grid", action="append", help="axis min:max:count; repeat for a 2-D grid")
    common.add_argument("--n", type=int)
    common.add_argument("--n-grid", dest="n_grid", help="sample sizes: min:max:count or a comma list")
    common.add_argument("--replicates", type=int)
    common.add_argument("--count", type=int, help="number of simulated replicates")
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out")
    common.add_argument("--dense-cap", dest="dense_cap", type=int)
    common.add_argument("--pivot", action="store_true", default=None, help="use the O(n) pivot route")

    p = argparse.ArgumentParser(prog="gaussldp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("rate", parents=[common], help="evaluate a rate function on a grid")
    r.add_argument("name", help="one of " + ", ".join(RATE_NAMES))
    sub.add_parser("domain", parents=[common], help="tag a lambda grid with D1/D2/Outside")
    c = sub.add_parser("cgf", parents=[common], help="evaluate a CGF on a lambda grid")
    c.add_argument("kind", choices=("finite_n", "limit", "ma1"))
    s = sub.add_parser("simulate", parents=[common], help="per-replicate statistics")
    s.add_argument("--process", choices=("ar1", "ma1"))
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", required=True, choices=tuple(verification.SUITES))
    sub.add_parser("figures", parents=[common], help="write CSV grids for every figure into --out")
    return p


def merge_config(args) -> dict:
    opts = {k: v for k, v in vars(args).items()}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config: {exc}")
        for k, v in cfg.items():
            key = k.replace("-", "_")
            if opts.get(key) is None:
                opts[key] = v
    for k, v in DEFAULTS.items():
        if opts.get(k) is None:
            opts[k] = v
    if opts["replicates"] < 1:
        raise UsageError("--replicates must be >= 1")
    if isinstance(opts["grid"], str):
        opts["grid"] = [opts["grid"]]
    return opts


VALUE_FLAGS = ("--grid", "--theta", "--phi", "--n-grid")


def _bind_values(argv):
    """Attach values such as ``-3:3:61`` to their flag so argparse does not read them as options."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_bind_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        o = merge_config(args)
        cmd = args.command
        if cmd == "rate":
            key = "phi" if args.name in rates.MA1_RATES else "theta"
            header, rows = rate_rows(args.name, parse_values(o[key]), o["grid"])
        elif cmd == "domain":
            header, rows = domain_rows(parse_values(o["theta"]), o["grid"], args.n)
        elif cmd == "cgf":
            key = "phi" if args.kind == "ma1" else "theta"
            header, rows = cgf_rows(args.kind, parse_values(o[key]), o["grid"], o["n"], o["pivot"], o["dense_cap"])
        elif cmd == "simulate":
            key = "phi" if o["process"] == "ma1" else "theta"
            header, rows = simulate_rows(o["process"], parse_values(o[key])[0], o["n"], o["count"], o["seed"])
        elif cmd == "figures":
            if not o["out"]:
                raise UsageError("figures needs --out DIR")
            target = Path(o["out"])
            target.mkdir(parents=True, exist_ok=True)
            for stem, (h, rs) in figure_tables().items():
                (target / f"{stem}.csv").write_text(render(h, rs, "csv"))
            return EXIT_OK
        else:
            results = run_verify(args.suite, o["replicates"], o["seed"], parse_n_grid(o["n_grid"]))
            summary = {
                "suite": args.suite,
                "passed": all(r.passed for r in results),
                "checks": [r.to_dict() for r in results],
            }
            text = json.dumps(summary, default=_json_value, indent=2) + "\n"
            if o["format"] == "json":
                sys.stdout.write(text)
            else:
                for r in results:
                    print(r.line())
                if o["out"]:
                    Path(o["out"]).write_text(text)
            return EXIT_OK if summary["passed"] else EXIT_FAIL
        emit(render(header, rows, o["format"]), o["out"])
        return EXIT_OK
    except UsageError as exc:
        print(f"gaussldp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"gaussldp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
