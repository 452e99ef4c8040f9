"""``g2check`` command line: exact algebra suite and per-point holonomy checks.

Exit codes: 0 pass or parallel, 1 failed or not parallel, 2 bad
configuration, 3 internal numeric error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np

from . import __version__, report
from .errors import ConfigError, ContractError, StepTooLargeError
from .g2 import (
    OMEGA0_TERMS,
    CrossProduct,
    check_cross_axioms,
    cross_from_form,
    form_from_cross,
    metric_from_form,
    omega0,
)
from .holonomy import INCONCLUSIVE, NOT_PARALLEL, PARALLEL, PointResult, check_point, default_tol
from .hyperkahler import kahler_forms, standard_structures, validate_structure
from .hypersurface import CATALOG, DEFAULT_STEP, make_immersion, sample_points
from .linalg_core import Metric

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

EXAMPLES = {
    "torus": {"command": "check", "immersion": {"name": "torus-hyperplane"}, "sampling": {"count": 100, "seed": 0}},
    "sphere": {"command": "check", "immersion": {"name": "sphere", "params": {"radius": 1.0}},
               "sampling": {"count": 100, "seed": 0}},
}


def exact_requested() -> bool:
    return os.environ.get("G2CHECK_EXACT", "0") not in ("", "0")


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

def _parse_coordinate(x) -> Fraction | float:
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cannot read chart coordinate {x!r}") from exc
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"chart coordinates must be numbers or rational strings, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if not math.isfinite(x):
        raise ConfigError("chart coordinates must be finite")
    return float(x)


@dataclass
class RunConfig:
    immersion: str
    params: dict = field(default_factory=dict)
    jets: str = "analytic"
    count: int = 100
    seed: int = 0
    sobol: bool = False
    points: list | None = None
    h: float = DEFAULT_STEP
    tolerance: float | None = None
    output: str = "-"
    command: str = "check"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {"command", "immersion", "sampling", "steps", "output"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown configuration keys: {sorted(extra)}")
        command = data.get("command", "check")
        if command != "check":
            raise ConfigError(f"configuration command must be 'check', got {command!r}")
        imm = data.get("immersion")
        if isinstance(imm, str):
            imm = {"name": imm}
        if not isinstance(imm, dict) or "name" not in imm:
            raise ConfigError("configuration needs immersion.name")
        sampling = data.get("sampling", {})
        steps = data.get("steps", {})
        if not isinstance(sampling, dict) or not isinstance(steps, dict):
            raise ConfigError("sampling and steps must be objects")
        points = sampling.get("points")
        if points is not None:
            if not isinstance(points, list) or not points:
                raise ConfigError("sampling.points must be a non-empty list")
            for p in points:
                if not isinstance(p, list) or len(p) != 7:
                    raise ConfigError("each explicit point needs 7 chart coordinates")
        cfg = cls(
            immersion=imm["name"],
            params=dict(imm.get("params", {})),
            jets=imm.get("jets", "analytic"),
            count=sampling.get("count", len(points) if points else 100),
            seed=sampling.get("seed", 0),
            sobol=bool(sampling.get("sobol", False)),
            points=points,
            h=steps.get("h", DEFAULT_STEP),
            tolerance=steps.get("tolerance"),
            output=data.get("output", "-"),
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.immersion not in CATALOG:
            raise ConfigError(f"unknown immersion {self.immersion!r}; known: {sorted(CATALOG)}")
        if self.jets not in ("analytic", "fd"):
            raise ConfigError("immersion.jets must be 'analytic' or 'fd'")
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise ConfigError("sampling.count must be an integer >= 1")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("sampling.seed must be a non-negative integer")
        if not _positive(self.h):
            raise ConfigError("steps.h must be > 0")
        if self.tolerance is not None and not _positive(self.tolerance):
            raise ConfigError("steps.tolerance must be > 0")
        if not isinstance(self.output, str):
            raise ConfigError("output must be a path or '-'")

    def echo(self, exact: bool) -> dict:
        return {
            "command": self.command,
            "immersion": {"name": self.immersion, "params": self.params, "jets": self.jets},
            "sampling": {"count": self.count, "seed": self.seed, "sobol": self.sobol,
                         "explicit_points": self.points is not None},
            "steps": {"h": float(self.h), "tolerance": self.tolerance},
            "exact": exact,
        }


def _positive(x) -> bool:
    return not isinstance(x, bool) and isinstance(x, (int, float)) and math.isfinite(x) and x > 0


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return RunConfig.from_dict(data)


# --------------------------------------------------------------------------
# axioms
# --------------------------------------------------------------------------

def _flip_sign(P: CrossProduct) -> CrossProduct:
    """Test hook: negate one structure constant pair, breaking every identity."""
    T = P.table.copy()
    T[0, 1] = -T[0, 1]
    T[1, 0] = -T[1, 0]
    return CrossProduct(T, P.metric)


def run_axioms(fault: str | None = None) -> dict:
    """Exact algebra suite; every residual must be exactly zero."""
    start = time.perf_counter()
    checks: list[dict] = []

    def record(name, residual, detail=None):
        entry = {"name": name, "residual": float(residual), "passed": residual == 0}
        if detail is not None:
            entry["detail"] = detail
        checks.append(entry)

    form = omega0(exact=True)
    expected = {tuple(i - 1 for i in idx): s for idx, s in OMEGA0_TERMS}
    coeff_err = max(abs(form[idx] - s) for idx, s in expected.items())
    rest = sum(abs(c) for idx, c in form.terms().items() if idx not in expected)
    record("omega0_coefficients", coeff_err + rest)

    g = Metric.euclidean(7, exact=True)
    P = cross_from_form(form, g)
    if fault == "sign-flip":
        P = _flip_sign(P)
    rep = check_cross_axioms(P)
    for name, value in rep.residuals.items():
        pair = rep.failing.get(name)
        detail = None if pair is None else f"first failing {pair}"
        record(f"cross_{name}", value, detail)

    try:
        back = form_from_cross(P, g)
        record("round_trip", max(abs(c) for c in (back - form).coeffs) if back is not None else 1)
    except ContractError as exc:
        record("round_trip", 1, str(exc))
    gm, vol = metric_from_form(form)
    record("metric_from_form", max(abs(x) for x in (gm.matrix - g.matrix).reshape(-1)))
    record("volume_form", abs(vol.coeffs[0] - 1))

    q = standard_structures()
    srep = validate_structure(q)
    for name, value in srep.residuals.items():
        record(f"quaternion_{name}", value)
    kf = kahler_forms(q, Metric.euclidean(8, exact=True))
    record("kahler_top_power_nonzero", 0 if kf.nondegenerate() else 1)

    failing = [c["name"] for c in checks if not c["passed"]]
    return {
        "version": __version__,
        "command": "axioms",
        "conventions": report.conventions(),
        "seed": rep.seed,
        "n_random": rep.n_random,
        "checks": checks,
        "failing": failing,
        "verdict": "pass" if not failing else "fail",
        "elapsed_ms": (time.perf_counter() - start) * 1e3,
    }


# --------------------------------------------------------------------------
# check
# --------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _immersion(name: str, params_json: str, jets: str):
    return make_immersion(name, json.loads(params_json), jets)


def _point_task(args) -> PointResult:
    name, params_json, jets, u, h, tol, exact = args
    imm = _immersion(name, params_json, jets)
    return check_point(imm, u, h=h, tol=tol, exact=exact)


def _points_for(cfg: RunConfig, imm, exact: bool) -> list:
    if cfg.points is not None:
        raw = [[_parse_coordinate(x) for x in p] for p in cfg.points]
    else:
        raw = [list(map(float, row)) for row in sample_points(imm, cfg.count, cfg.seed, cfg.sobol)]
    if exact:
        return [[Fraction(x) for x in p] for p in raw]
    return [[float(x) for x in p] for p in raw]


def _point_entry(res: PointResult) -> dict:
    if res.status != "ok":
        return {"u": res.u, "r_final1": None, "r_final2": None, "nabla_p_closed": None, "nabla_p_fd": None,
                "verdict": "skipped", "reason": res.reason}
    r = res.residuals
    return {
        "u": res.u,
        "r_final1": float(r.r_final1),
        "r_final2": float(r.r_final2),
        "nabla_p_closed": float(r.r_nablaP_closed),
        "nabla_p_fd": None if r.r_nablaP_fd is None else float(r.r_nablaP_fd),
        "verdict": r.verdict,
        "diagnostics": {k: float(v) for k, v in r.diagnostics.items()},
    }


def _aggregate(entries: list[dict]) -> dict:
    ok = [e for e in entries if e["verdict"] != "skipped"]
    agg: dict[str, Any] = {"points": len(entries), "evaluated": len(ok), "skipped": len(entries) - len(ok)}
    for key in ("r_final1", "r_final2", "nabla_p_closed", "nabla_p_fd"):
        vals = [e[key] for e in ok if e[key] is not None]
        agg[key] = {"max": max(vals), "mean": math.fsum(vals) / len(vals)} if vals else {"max": None, "mean": None}
    agg["verdicts"] = {v: sum(e["verdict"] == v for e in entries)
                       for v in (PARALLEL, NOT_PARALLEL, INCONCLUSIVE, "skipped")}
    return agg


def run_verdict(entries: list[dict]) -> str:
    verdicts = [e["verdict"] for e in entries]
    if NOT_PARALLEL in verdicts:
        return NOT_PARALLEL
    if INCONCLUSIVE in verdicts or all(v == "skipped" for v in verdicts):
        return INCONCLUSIVE
    return PARALLEL


def run_check(cfg: RunConfig, jobs: int | None = 1) -> dict:
    start = time.perf_counter()
    imm = _immersion(cfg.immersion, json.dumps(cfg.params, sort_keys=True), cfg.jets)
    exact = exact_requested() and imm.exact_capable and imm.analytic
    tol = default_tol(imm) if cfg.tolerance is None else float(cfg.tolerance)
    pts = _points_for(cfg, imm, exact)
    params_json = json.dumps(cfg.params, sort_keys=True)
    tasks = [(cfg.immersion, params_json, cfg.jets, u, float(cfg.h), tol, exact) for u in pts]
    if jobs is None:
        jobs = os.cpu_count() or 1
    jobs = max(1, min(jobs, len(tasks)))
    if jobs == 1:
        results = [_point_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_point_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    entries = [_point_entry(r) for r in results]
    echo = cfg.echo(exact)
    echo["steps"]["tolerance"] = tol
    return {
        "version": __version__,
        "config": echo,
        "conventions": report.conventions(),
        "points": entries,
        "aggregate": _aggregate(entries),
        "verdict": run_verdict(entries),
        "elapsed_ms": (time.perf_counter() - start) * 1e3,
    }


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="g2check", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"g2check {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ax = sub.add_parser("axioms", help="exact algebra suite")
    ax.add_argument("--output", "-o", default="-")
    ax.add_argument("--inject-fault", choices=["sign-flip"], help=argparse.SUPPRESS)

    def overrides(p):
        p.add_argument("--tol", type=float, help="parallel-within-tol threshold")
        p.add_argument("--h", type=float, help="finite-difference step")
        p.add_argument("--n", type=int, help="number of sampled points")
        p.add_argument("--seed", type=int, help="sampling seed")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
        p.add_argument("--sobol", action="store_true", default=None, help="Sobol sampling instead of uniform")
        p.add_argument("--output", "-o", help="write the report here instead of stdout")

    ck = sub.add_parser("check", help="holonomy residuals over sampled chart points")
    ck.add_argument("config", help="JSON run configuration")
    overrides(ck)

    ex = sub.add_parser("example", help="built-in torus or sphere run")
    ex.add_argument("name", choices=sorted(EXAMPLES))
    overrides(ex)
    return parser


def _apply_overrides(cfg: RunConfig, ns) -> RunConfig:
    changes = {}
    if ns.tol is not None:
        changes["tolerance"] = ns.tol
    if ns.h is not None:
        changes["h"] = ns.h
    if ns.n is not None:
        changes["count"] = ns.n
        changes["points"] = None
    if ns.seed is not None:
        changes["seed"] = ns.seed
    if ns.sobol:
        changes["sobol"] = True
    if ns.output is not None:
        changes["output"] = ns.output
    cfg = replace(cfg, **changes)
    cfg.validate()
    return cfg


def _write(text: str, dest: str) -> None:
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "axioms":
            rep = run_axioms(ns.inject_fault)
            _write(report.dumps(rep), ns.output)
            return EXIT_OK if rep["verdict"] == "pass" else EXIT_FAIL
        if ns.command == "check":
            cfg = load_config(ns.config)
        else:
            cfg = RunConfig.from_dict(EXAMPLES[ns.name])
        cfg = _apply_overrides(cfg, ns)
        if ns.jobs is not None and ns.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        rep = run_check(cfg, jobs=ns.jobs)
    except ConfigError as exc:
        print(f"g2check: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (StepTooLargeError, ArithmeticError, np.linalg.LinAlgError, ContractError) as exc:
        print(f"g2check: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _write(report.dumps(rep), cfg.output)
    return EXIT_OK if rep["verdict"] == PARALLEL else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
