"""Command-line front end.

Usage examples::

    kharmonic classify --family clifford --m 2 --p 1 --k 5 --format json
    kharmonic classify --family hypersurface --n 4 --k 6
    kharmonic scan --family product_sphere --n-max 5 --k-max 10 --format csv
    kharmonic verify-closed-forms
    kharmonic tension --m-eff 3 --beta 3 --tau2 1.5 --k 2
    kharmonic hopf-check --k 4 --samples 1000

Exit status is 0 when every requested check passes, 1 when a check fails
and 2 for an invalid configuration. ``KHARMONIC_FORMAT`` sets the default
output format; ``--config FILE`` reads a JSON object with the same keys as
the long flags (flags given on the command line win).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import closedform, hopf, polysolve
from .errors import ModelError, ResidualCheckFailed
from .models import ScalarInvariants
from .tension import DEFAULT_REL_TOL, tau_k

FORMATS = ("json", "csv", "table")
FORMAT_ENV = "KHARMONIC_FORMAT"
FAMILY_DIMS = {
    "clifford": ("m", "p"),
    "hypersurface": ("n",),
    "small_sphere": ("m",),
    "product_sphere": ("n1", "n2"),
}
SCAN_CAP = 12


class ConfigError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--output", "-o", default=None, help="write here instead of stdout")
    common.add_argument("--config", default=None, help="JSON file with default flag values")
    common.add_argument("--tol", type=float, default=None, help="root interval width")
    common.add_argument("--residual-tol", type=float, default=None, help="tension residual bound")

    parser = argparse.ArgumentParser(prog="kharmonic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="certified proper k-harmonic parameters")
    p.add_argument("--family", choices=sorted(FAMILY_DIMS))
    for name in ("m", "p", "n", "n1", "n2", "k"):
        p.add_argument(f"--{name}", type=int)

    p = sub.add_parser("scan", parents=[common], help="classify over a parameter grid")
    p.add_argument("--family", choices=sorted(FAMILY_DIMS))
    p.add_argument("--m-max", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--no-cap", action="store_true", default=None, help=f"allow grids beyond {SCAN_CAP}")

    p = sub.add_parser("verify-closed-forms", parents=[common], help="audit the printed closed forms")
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)

    p = sub.add_parser("tension", parents=[common], help="term-by-term tau_k for explicit invariants")
    p.add_argument("--m-eff", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--tau2", type=float)
    p.add_argument("--k", type=int)

    p = sub.add_parser("hopf-check", parents=[common], help="scaled Hopf map checks")
    p.add_argument("--k", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    return parser


DEFAULTS = {
    "format": "json",
    "output": None,
    "tol": polysolve.DEFAULT_WIDTH,
    "residual_tol": polysolve.DEFAULT_RESIDUAL_TOL,
    "m_max": 10,
    "n_max": 5,
    "k_min": 2,
    "k_max": 10,
    "jobs": 1,
    "no_cap": False,
    "samples": 1000,
    "seed": 0,
}


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < environment < config file < command-line flags."""
    cfg = dict(DEFAULTS)
    env_format = os.environ.get(FORMAT_ENV)
    if env_format:
        if env_format not in FORMATS:
            raise ConfigError(f"{FORMAT_ENV}={env_format!r} is not one of {FORMATS}")
        cfg["format"] = env_format
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        cfg.update({key.replace("-", "_"): value for key, value in loaded.items()})
    cfg.update({key: value for key, value in vars(args).items() if value is not None})
    cfg.pop("config", None)
    _validate(cfg)
    return cfg


def _validate(cfg: dict) -> None:
    if cfg["format"] not in FORMATS:
        raise ConfigError(f"unknown format {cfg['format']!r}")
    for key in ("tol", "residual_tol"):
        if not cfg[key] > 0:
            raise ConfigError(f"{key} must be positive")
    command = cfg["command"]
    if command in ("classify", "scan") and cfg.get("family") not in FAMILY_DIMS:
        raise ConfigError("--family is required")
    if command in ("classify", "tension", "hopf-check"):
        if cfg.get("k") is None or cfg["k"] < 2:
            raise ConfigError("--k must be given and >= 2")
    if command == "classify":
        missing = [d for d in FAMILY_DIMS[cfg["family"]] if cfg.get(d) is None]
        if missing:
            raise ConfigError(f"missing dimensions for {cfg['family']}: {', '.join(missing)}")
    if command in ("scan", "verify-closed-forms"):
        if cfg["k_min"] < 2 or cfg["k_max"] < cfg["k_min"]:
            raise ConfigError("need 2 <= k-min <= k-max")
    if command == "scan":
        if cfg["m_max"] < 2 or cfg["n_max"] < 1 or cfg["jobs"] < 1:
            raise ConfigError("grid bounds and --jobs must be positive (m-max >= 2)")
        if not cfg["no_cap"] and (cfg["m_max"] > SCAN_CAP or cfg["k_max"] > SCAN_CAP or cfg["n_max"] > SCAN_CAP):
            raise ConfigError(f"grid exceeds the cap of {SCAN_CAP}; pass --no-cap to override")
    if command == "tension":
        for key in ("m_eff", "beta", "tau2"):
            if cfg.get(key) is None:
                raise ConfigError(f"--{key.replace('_', '-')} is required")
        if cfg["m_eff"] < 1 or cfg["beta"] < 0 or cfg["tau2"] < 0:
            raise ConfigError("need m-eff >= 1, beta >= 0, tau2 >= 0")
    if command == "hopf-check" and cfg["samples"] < 1:
        raise ConfigError("--samples must be positive")


# -- commands -------------------------------------------------------------------


def _dims(cfg: dict) -> dict:
    return {d: cfg[d] for d in FAMILY_DIMS[cfg["family"]]}


def _root_rows(report: polysolve.RootReport) -> list[dict]:
    rows = []
    for excluded, roots in ((False, report.proper_roots), (True, report.excluded)):
        for r in roots:
            rows.append(
                {
                    "family": report.family,
                    **report.dims,
                    "k": report.k,
                    "parameter": r.value,
                    "residual": r.residual,
                    "excluded": excluded,
                }
            )
    return rows


def _classify_one(job: tuple) -> polysolve.RootReport:
    family, dims, k, tol, residual_tol = job
    return polysolve.classify(family, k, tol=tol, residual_tol=residual_tol, **dims)


def scan_grid(family: str, m_max: int, n_max: int, k_min: int, k_max: int) -> list[dict]:
    ks = range(k_min, k_max + 1)
    if family == "clifford":
        return [{"m": m, "p": p, "k": k} for m in range(2, m_max + 1) for p in range(1, m) for k in ks]
    if family == "product_sphere":
        return [{"n1": a, "n2": b, "k": k} for a in range(1, n_max + 1) for b in range(1, n_max + 1) for k in ks]
    key = "m" if family == "small_sphere" else "n"
    return [{key: n, "k": k} for n in range(1, n_max + 1) for k in ks]


def run_classify(cfg: dict) -> dict:
    report = polysolve.classify(cfg["family"], cfg["k"], tol=cfg["tol"], residual_tol=cfg["residual_tol"], **_dims(cfg))
    return {
        "results": [report.as_dict()],
        "residuals": [r.residual for r in report.proper_roots],
        "passed": True,
        "rows": _root_rows(report),
    }


def run_scan(cfg: dict) -> dict:
    grid = scan_grid(cfg["family"], cfg["m_max"], cfg["n_max"], cfg["k_min"], cfg["k_max"])
    jobs = []
    for point in grid:
        dims = {key: value for key, value in point.items() if key != "k"}
        jobs.append((cfg["family"], dims, point["k"], cfg["tol"], cfg["residual_tol"]))
    if cfg["jobs"] > 1:
        with ProcessPoolExecutor(max_workers=cfg["jobs"]) as pool:
            reports = list(pool.map(_classify_one, jobs, chunksize=8))
    else:
        reports = [_classify_one(job) for job in jobs]
    # grid order is already sorted by coordinates; map preserves it
    rows = [row for report in reports for row in _root_rows(report)]
    return {
        "results": [r.as_dict() for r in reports],
        "residuals": [root.residual for r in reports for root in r.proper_roots],
        "passed": True,
        "rows": rows,
    }


def run_verify(cfg: dict) -> dict:
    entries = closedform.audit(range(cfg["k_min"], cfg["k_max"] + 1))
    rows = [
        {
            "formula": e.formula,
            "params": json.dumps(e.params, sort_keys=True),
            "status": e.status,
            "residual": e.residual,
            "detail": e.detail,
        }
        for e in entries
    ]
    return {
        "results": [e.as_dict() for e in entries],
        "residuals": [e.residual for e in entries],
        "passed": all(e.status != "fail" for e in entries),
        "rows": rows,
    }


def run_tension(cfg: dict) -> dict:
    inv = ScalarInvariants(cfg["m_eff"], cfg["beta"], cfg["tau2"])
    ev = tau_k(inv, cfg["k"])
    ok = ev.agrees(DEFAULT_REL_TOL)
    row = {"k": ev.k, "total": float(ev.total), "factored_total": float(ev.factored_total), "agrees": ok}
    return {"results": [ev.as_dict()], "residuals": [float(ev.discrepancy)], "passed": ok, "rows": [row]}


def run_hopf(cfg: dict) -> dict:
    report = hopf.hopf_checks(cfg["k"], cfg["samples"], cfg["seed"])
    row = {key: value for key, value in report.as_dict().items() if key != "checks"}
    row["passed"] = report.passed
    return {
        "results": [report.as_dict()],
        "residuals": [report.norm_deviation, report.fiber_deviation, report.dilation_spread, report.vertical_norm],
        "passed": report.passed,
        "rows": [row],
    }


COMMANDS = {
    "classify": run_classify,
    "scan": run_scan,
    "verify-closed-forms": run_verify,
    "tension": run_tension,
    "hopf-check": run_hopf,
}

_INPUT_KEYS = {
    "classify": ("family", "m", "p", "n", "n1", "n2", "k", "tol", "residual_tol"),
    "scan": ("family", "m_max", "n_max", "k_min", "k_max", "tol", "residual_tol"),
    "verify-closed-forms": ("k_min", "k_max"),
    "tension": ("m_eff", "beta", "tau2", "k"),
    "hopf-check": ("k", "samples", "seed"),
}


# -- output ---------------------------------------------------------------------


def render(cfg: dict, outcome: dict) -> str:
    fmt = cfg["format"]
    if fmt == "json":
        inputs = {key: cfg.get(key) for key in _INPUT_KEYS[cfg["command"]] if cfg.get(key) is not None}
        doc = {
            "command": cfg["command"],
            "inputs": inputs,
            "results": outcome["results"],
            "residuals": outcome["residuals"],
            "passed": outcome["passed"],
        }
        return json.dumps(doc, indent=2) + "\n"
    rows = outcome["rows"]
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return buf.getvalue()
    return _table(rows) + f"passed: {outcome['passed']}\n"


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return "" if value is None else str(value)


def _table(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    headers = list(rows[0])
    cells = [[_cell(row.get(h)) for h in headers] for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.ljust(w) for c, w in zip(cell, widths)) for cell in cells)
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
    except ConfigError as exc:
        print(f"kharmonic: error: {exc}", file=sys.stderr)
        return 2
    try:
        outcome = COMMANDS[cfg["command"]](cfg)
    except (ModelError, ValueError) as exc:
        print(f"kharmonic: error: {exc}", file=sys.stderr)
        return 2
    except ResidualCheckFailed as exc:
        print(f"kharmonic: check failed: {exc}", file=sys.stderr)
        return 1
    text = render(cfg, outcome)
    if cfg["output"]:
        Path(cfg["output"]).write_text(text)
    else:
        sys.stdout.write(text)
    if not outcome["passed"]:
        print("kharmonic: one or more checks failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
