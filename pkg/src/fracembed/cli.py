"""Command-line entry point: ``fracembed <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    AUTO_EPS_FACTORS,
    box_data_for_bubble,
    bubble_quotient,
    BubbleParams,
    bubble_resolution,
    constant_value_at_critical,
    epsilon_threshold,
    estimate_big_E,
    phase_sweep,
    reduced_sharp_constant,
    staircase_violations,
)
from .field_transforms import mean_free_fraction
from .functionals import ProblemParams, critical_exponent, phi1_cubed_integral
from .inequality import chain_holds, verify_chain
from .minimize import SolverOptions, local_min_test_at_one, minimize_quotient
from .spectral_domain import (
    ConfigurationError,
    DomainSpec,
    SpectralDataError,
    build_box_basis,
    load_sample,
    load_spectral_data,
    save_spectral_data,
    triangle_ritz_basis,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("minimize", "bifurcation", "phase", "big-e", "bubble", "verify-ineq", "make-domain")

DEFAULTS = {
    "n": 1,
    "modes": 16,
    "nodes": None,
    "spectral_data": None,
    "sample": None,
    "s": 0.5,
    "q": 4.0,
    "eps": 1.0,
    "q_grid": "2.5:6:6",
    "eps_grid": "auto",
    "tol_factor": 0.02,
    "eps_max": None,
    "widths": "0.4,0.2,0.1,0.05",
    "n_max": 20,
    "s_step": 0.01,
    "kind": "triangle",
    "vertices": "0,0;1,0;0.3,0.8",
    "degree": 10,
    "max_iters": 4000,
    "tol_grad": 1e-9,
    "n_random_starts": 6,
    "seed": 0,
    "workers": 1,
    "out": None,
    "manifest": None,
}


class UsageError(ValueError):
    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


def fmt(x) -> str:
    """Lossless float formatting (17 significant digits)."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def parse_grid(text: str) -> list[float]:
    """``lo:hi:count`` (inclusive linspace) or a comma-separated list."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid {text!r} must be lo:hi:count")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("grid count must be >= 1")
        return [float(v) for v in np.linspace(lo, hi, count)]
    return [float(v) for v in text.split(",") if v.strip()]


@dataclass
class RunConfig:
    command: str
    values: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None

    def solver_options(self) -> SolverOptions:
        return SolverOptions(max_iters=int(self.max_iters), tol_grad=float(self.tol_grad),
                             n_random_starts=int(self.n_random_starts), seed=int(self.seed))

    def validate(self) -> None:
        v = self.values
        if not 0 < float(v["s"]) <= 1:
            raise UsageError("s", f"must lie in (0, 1], got {v['s']}")
        if float(v["eps"]) <= 0:
            raise UsageError("eps", "must be positive")
        if int(v["modes"]) < 2:
            raise UsageError("modes", "need at least 2 modes per axis")
        if int(v["n"]) < 1:
            raise UsageError("n", "dimension must be >= 1")
        if int(v["workers"]) < 1:
            raise UsageError("workers", "must be >= 1")
        if self.command in ("phase", "big-e"):
            crit = critical_exponent(int(v["n"]), float(v["s"]))
            try:
                grid = parse_grid(v["q_grid"])
            except ValueError as exc:
                raise UsageError("q_grid", str(exc)) from exc
            for q in grid:
                if not 2 < q <= crit:
                    raise UsageError("q_grid", f"q={q} outside (2, {crit}]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracembed", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--out", help="output file (CSV or JSON)")
        p.add_argument("--manifest", help="run manifest path (default: <out>.manifest.json)")

    def domain(p):
        p.add_argument("--n", type=int, help="dimension of the unit box")
        p.add_argument("--modes", type=int, help="cosine modes per axis, constant included")
        p.add_argument("--nodes", type=int, help="Gauss-Legendre nodes per axis (default 4N)")
        p.add_argument("--spectral-data", help="spectral-data JSON file instead of a box")
        p.add_argument("--sample", help="shipped sample spectral data, e.g. asym_triangle")

    def params(p, eps=True, q=True):
        p.add_argument("--s", type=float, help="fractional order in (0, 1]")
        if q:
            p.add_argument("--q", type=float, help="exponent q")
        if eps:
            p.add_argument("--eps", type=float, help="dilation eps > 0")

    def solver(p):
        p.add_argument("--max-iters", type=int)
        p.add_argument("--tol-grad", type=float)
        p.add_argument("--n-random-starts", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int, help="worker processes for sweeps")

    p = sub.add_parser("minimize", help="global minimizer at one (s, q, eps)")
    common(p), domain(p), params(p), solver(p)

    p = sub.add_parser("bifurcation", help="minimum value along an eps grid at fixed q")
    common(p), domain(p), params(p, eps=False), solver(p)
    p.add_argument("--eps-grid", help="lo:hi:count, comma list, or auto")

    p = sub.add_parser("phase", help="constancy verdicts on a (q, eps) grid")
    common(p), domain(p), params(p, eps=False, q=False), solver(p)
    p.add_argument("--q-grid", help="lo:hi:count or comma list")
    p.add_argument("--eps-grid", help="lo:hi:count, comma list, or auto")

    p = sub.add_parser("big-e", help="global threshold by bisection for each q")
    common(p), domain(p), params(p, eps=False, q=False), solver(p)
    p.add_argument("--q-grid", help="lo:hi:count or comma list")
    p.add_argument("--tol-factor", type=float, help="bisection tolerance as a fraction of eps_s(q)")
    p.add_argument("--eps-max", type=float, help="cap for the bisection bracket")

    p = sub.add_parser("bubble", help="bubble test-function quotients on the unit box")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--widths", help="comma-separated bubble widths")

    p = sub.add_parser("verify-ineq", help="check the Gamma-function inequality chain")
    common(p)
    p.add_argument("--n-max", type=int)
    p.add_argument("--s-step", type=float)

    p = sub.add_parser("make-domain", help="write spectral data for a box or a triangle")
    common(p)
    p.add_argument("--kind", choices=("box", "triangle"))
    p.add_argument("--n", type=int)
    p.add_argument("--modes", type=int)
    p.add_argument("--nodes", type=int)
    p.add_argument("--vertices", help="triangle vertices 'x,y;x,y;x,y'")
    p.add_argument("--degree", type=int, help="polynomial degree of the Ritz space")
    return parser


def merge_config(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError("config", str(exc)) from exc
        for k, v in cfg.items():
            key = k.replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(key, "unknown config key")
            values[key] = v
    for k, v in vars(args).items():
        if k in ("command", "config") or v is None:
            continue
        values[k] = v
    return RunConfig(args.command, values)


def load_domain(cfg: RunConfig):
    if cfg.spectral_data:
        return load_spectral_data(cfg.spectral_data)
    if cfg.sample:
        return load_sample(cfg.sample)
    big_n = int(cfg.modes) - 1
    nodes = cfg.nodes if cfg.nodes is None else int(cfg.nodes)
    return build_box_basis(DomainSpec(int(cfg.n), big_n, nodes))


# ---------------------------------------------------------------------------
# Output helpers


def csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    return buf.getvalue()


def emit(cfg: RunConfig, text: str, started: float, extra: dict | None = None) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
        manifest_path = cfg.manifest or f"{cfg.out}.manifest.json"
        manifest = {
            "tool": "fracembed",
            "version": __version__,
            "command": cfg.command,
            "config": cfg.values,
            "seed": cfg.values.get("seed"),
            "started_utc": datetime.fromtimestamp(started, timezone.utc).isoformat(),
            "wall_time_s": time.time() - started,
            "outputs": [str(cfg.out)],
        }
        manifest.update(extra or {})
        Path(manifest_path).write_text(json.dumps(manifest, indent=2, default=str))
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands


def cmd_minimize(cfg: RunConfig, started: float) -> int:
    data = load_domain(cfg)
    p = ProblemParams(float(cfg.s), float(cfg.q), float(cfg.eps), data.dimension)
    res = minimize_quotient(p, data, cfg.solver_options())
    out = res.to_dict()
    out.update({
        "s": p.s, "q": p.q, "eps": p.eps,
        "eps_threshold_local": epsilon_threshold(p.q, p.s, data),
        "local_verdict_at_one": local_min_test_at_one(p, data).value,
        "n_modes": data.n_modes, "domain": data.name,
    })
    text = json.dumps(out, indent=2, default=fmt) + "\n"
    emit(cfg, text, started, {"partial": not res.converged})
    return EXIT_OK if res.converged else EXIT_NUMERIC


def cmd_bifurcation(cfg: RunConfig, started: float) -> int:
    data = load_domain(cfg)
    s, q = float(cfg.s), float(cfg.q)
    es = epsilon_threshold(q, s, data)
    if cfg.eps_grid == "auto":
        grid = [f * es for f in np.linspace(0.5, 1.5, 11)]
    else:
        grid = parse_grid(cfg.eps_grid)
    rows, failed = [], 0
    for eps in grid:
        p = ProblemParams(s, q, eps, data.dimension)
        res = minimize_quotient(p, data, cfg.solver_options())
        failed += not res.converged
        rows.append([eps, eps / es, res.value, p.eps2s, p.eps2s - res.value,
                     mean_free_fraction(res.minimizer), res.is_constant,
                     local_min_test_at_one(p, data).value, res.converged])
    header = ["eps", "eps_over_threshold", "min_value", "constant_value", "gap",
              "mean_free_fraction", "is_constant", "local_verdict", "converged"]
    emit(cfg, csv_text(header, rows), started, {"partial": failed > 0, "failed_points": failed})
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_phase(cfg: RunConfig, started: float) -> int:
    data = load_domain(cfg)
    tpl = ProblemParams(float(cfg.s), 2.0 + 1e-9, 1.0, data.dimension)
    eps_grid = cfg.eps_grid if cfg.eps_grid == "auto" else parse_grid(cfg.eps_grid)
    cells = phase_sweep(parse_grid(cfg.q_grid), eps_grid, tpl, data,
                        cfg.solver_options(), workers=int(cfg.workers))
    header = ["q", "eps", "constant_global", "min_value", "eps_threshold_local"]
    rows = [[c.q, c.eps, c.constant_global, c.min_value, c.eps_threshold_local] for c in cells]
    violations = staircase_violations(cells)
    failed = [c for c in cells if not c.converged or c.error]
    emit(cfg, csv_text(header, rows), started, {
        "staircase_violations": len(violations),
        "partial": bool(failed),
        "failed_cells": [asdict(c) for c in failed],
        "auto_eps_factors": list(AUTO_EPS_FACTORS) if cfg.eps_grid == "auto" else None,
    })
    if violations:
        return EXIT_VERIFY
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_big_e(cfg: RunConfig, started: float) -> int:
    data = load_domain(cfg)
    tpl = ProblemParams(float(cfg.s), 2.0 + 1e-9, 1.0, data.dimension)
    rows, failed = [], 0
    for q in parse_grid(cfg.q_grid):
        es = epsilon_threshold(q, tpl.s, data)
        est = estimate_big_E(q, tpl, data, float(cfg.tol_factor) * es, cfg.solver_options(),
                             eps_max=None if cfg.eps_max is None else float(cfg.eps_max))
        failed += len(est.failed_probes)
        rows.append([q, es, est.value, est.lower, est.upper, est.at_cap])
    header = ["q", "eps_threshold_local", "big_e", "lower", "upper", "at_cap"]
    emit(cfg, csv_text(header, rows), started, {"partial": failed > 0, "failed_probes": failed})
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_bubble(cfg: RunConfig, started: float) -> int:
    n, s = int(cfg.n), float(cfg.s)
    if not n > 2 * s:
        raise UsageError("s", "bubble quotients need n > 2s")
    rows = []
    for a in parse_grid(cfg.widths):
        big_n, m = bubble_resolution(a)
        data = box_data_for_bubble(a, n)
        rows.append([a, big_n, m, bubble_quotient(BubbleParams(a), s, data),
                     constant_value_at_critical(n, s), reduced_sharp_constant(n, s)])
    header = ["a", "modes_per_axis", "nodes_per_axis", "quotient", "constant_value", "limit"]
    emit(cfg, csv_text(header, rows), started)
    return EXIT_OK


def cmd_verify_ineq(cfg: RunConfig, started: float) -> int:
    reports = verify_chain(int(cfg.n_max), float(cfg.s_step))
    text = "".join(r.line() + "\n" for r in reports)
    ok = chain_holds(reports)
    text += ("ALL LINKS HOLD\n" if ok else "CHAIN FAILED\n")
    emit(cfg, text, started, {"holds": ok})
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_make_domain(cfg: RunConfig, started: float) -> int:
    if cfg.kind == "box":
        data = build_box_basis(DomainSpec(int(cfg.n), int(cfg.modes) - 1,
                                          None if cfg.nodes is None else int(cfg.nodes)))
    else:
        try:
            verts = [tuple(float(t) for t in v.split(",")) for v in str(cfg.vertices).split(";")]
        except ValueError as exc:
            raise UsageError("vertices", str(exc)) from exc
        if len(verts) != 3 or any(len(v) != 2 for v in verts):
            raise UsageError("vertices", "need three 2D points")
        data = triangle_ritz_basis(verts, degree=int(cfg.degree), n_modes=int(cfg.modes),
                                   name="triangle")
    if not cfg.out:
        raise UsageError("out", "make-domain needs --out")
    save_spectral_data(data, cfg.out)
    sys.stdout.write(f"wrote {cfg.out}: {data.n_modes} modes, {data.n_nodes} nodes, "
                     f"lambda_1={fmt(data.lambda1)}, phi1_cubed={fmt(phi1_cubed_integral(data))}\n")
    return EXIT_OK


HANDLERS = {
    "minimize": cmd_minimize,
    "bifurcation": cmd_bifurcation,
    "phase": cmd_phase,
    "big-e": cmd_big_e,
    "bubble": cmd_bubble,
    "verify-ineq": cmd_verify_ineq,
    "make-domain": cmd_make_domain,
}


def run(cfg: RunConfig) -> int:
    started = time.time()
    cfg.validate()
    return HANDLERS[cfg.command](cfg, started)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = merge_config(args)
        return run(cfg)
    except (UsageError, ConfigurationError, SpectralDataError) as exc:
        print(f"fracembed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, FloatingPointError) as exc:
        print(f"fracembed: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
