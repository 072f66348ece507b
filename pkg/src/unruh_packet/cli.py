"""Command-line scenario runner.

Examples:
  unruh-packet --mode rate --omega 0.159 --accel 1 --b 0.01 --hbar 1e-3 --L 9.42
  unruh-packet --mode spectrum --omega 0.04:0.32:4-log --config classical.cfg --out spec.csv
  unruh-packet --mode limit-point-first --b 1e-1:1e-3:5-log --out decouple.csv
  unruh-packet --mode validate
"""

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__, quad, response, validation
from .errors import AccuracyError

MODES = ("rate", "spectrum", "limit-classical-first", "limit-point-first", "validate")
COLUMNS = ("mode", "omega", "a", "m", "hbar", "b", "z0", "L", "N_ladder",
           "probability", "rate", "quad_err", "flags")
VERDICT_COLUMNS = ("criterion", "name", "passed", "summary")
EXIT_OK, EXIT_NUMERIC, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

# config-file key -> ScenarioSpec attribute
KEYS = {"mode": "mode", "omega": "omega", "accel": "a", "mass": "m", "hbar": "hbar",
        "b": "b", "z0": "z0", "L": "L", "eps": "eps", "tol": "tol", "n-max": "n_max",
        "seed": "seed", "out": "out", "format": "fmt", "jobs": "jobs"}
GRID_KEYS = {"omega", "hbar", "b", "L"}


class UsageError(ValueError):
    pass


@dataclass
class ScenarioSpec:
    mode: str = "rate"
    omega: list = field(default_factory=lambda: [1 / (2 * math.pi)])
    a: float = 1.0
    m: float = 1.0
    hbar: list = field(default_factory=lambda: [1.0])
    b: list = field(default_factory=lambda: [0.5])
    z0: float = None
    L: list = field(default_factory=lambda: [3 * math.pi])
    eps: float = 1e-3
    tol: float = 1e-5
    n_max: int = None
    seed: int = 0
    out: str = "-"
    fmt: str = "csv"
    jobs: int = None

    def validate(self):
        if self.mode not in MODES:
            raise UsageError(f"mode: expected one of {', '.join(MODES)}, got {self.mode!r}")
        if self.fmt not in ("csv", "json-lines"):
            raise UsageError(f"format: expected csv or json-lines, got {self.fmt!r}")
        for name in ("a", "m", "eps", "tol"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name}: must be positive, got {getattr(self, name)}")
        for name in ("omega", "hbar", "b", "L"):
            grid = getattr(self, name)
            if not grid:
                raise UsageError(f"{name}: grid is empty")
            if any(not x > 0 for x in grid):
                raise UsageError(f"{name}: all values must be positive")
        if self.z0 is not None and not math.isclose(self.z0 * self.a, 1.0, rel_tol=1e-12):
            raise UsageError(f"z0: must equal 1/accel = {1 / self.a!r}, got {self.z0!r}")
        if self.mode in ("rate", "spectrum", "limit-point-first") and len(self.hbar) != 1:
            raise UsageError(f"hbar: mode {self.mode} takes a single value")
        if self.mode in ("rate", "spectrum") and len(self.b) != 1:
            raise UsageError(f"b: mode {self.mode} takes a single value")
        if self.mode == "limit-point-first" and len(self.b) < 2:
            raise UsageError("b: limit-point-first needs a grid of at least two values")
        if self.n_max is not None and self.n_max < 1:
            raise UsageError("n-max: must be at least 1")
        if self.jobs is not None and self.jobs < 1:
            raise UsageError("jobs: must be at least 1")
        return self


def parse_grid(text):
    """Comma list ``0.1,0.2`` or log range ``start:stop:count-log`` (``-lin`` for linear)."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad range {text!r}: expected start:stop:count-log")
        start, stop, count = parts
        kind = "log"
        for suffix in ("-log", "-lin"):
            if count.endswith(suffix):
                count, kind = count[: -len(suffix)], suffix[1:]
        try:
            start, stop, count = float(start), float(stop), int(count)
        except ValueError:
            raise UsageError(f"bad range {text!r}") from None
        if count < 1:
            raise UsageError(f"bad range {text!r}: count must be positive")
        if kind == "log":
            if start <= 0 or stop <= 0:
                raise UsageError(f"bad range {text!r}: log range needs positive ends")
            return [float(x) for x in np.geomspace(start, stop, count)]
        return [float(x) for x in np.linspace(start, stop, count)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad list {text!r}") from None


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("_", "-") if key != "n_max" else "n-max"
            if key not in KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def _coerce(key, value):
    if key in GRID_KEYS:
        return parse_grid(value)
    try:
        if key in ("seed", "n-max", "jobs"):
            return int(value)
        if key in ("accel", "mass", "z0", "eps", "tol"):
            return float(value)
    except ValueError:
        raise UsageError(f"{key}: cannot parse {value!r}") from None
    return str(value)


def build_parser():
    p = argparse.ArgumentParser(prog="unruh-packet", description=__doc__.splitlines()[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--mode", help="one of: " + ", ".join(MODES))
    p.add_argument("--omega", help="transition frequency, value or grid")
    p.add_argument("--accel", help="proper acceleration a")
    p.add_argument("--mass", help="detector mass m")
    p.add_argument("--hbar", help="hbar, value or grid")
    p.add_argument("--b", help="initial packet width, value or grid")
    p.add_argument("--z0", help="initial packet centre (must be 1/a)")
    p.add_argument("--L", help="switch-on window, value or grid")
    p.add_argument("--eps", help="i-epsilon regulator for the direct oracles")
    p.add_argument("--tol", help="relative quadrature tolerance")
    p.add_argument("--n-max", dest="n_max", help="cap on the residue ladder")
    p.add_argument("--seed", help="Monte Carlo seed")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--out", help="output table path, '-' for stdout")
    p.add_argument("--format", dest="fmt", help="csv or json-lines")
    p.add_argument("--jobs", help="worker processes (default: available CPUs)")
    return p


def spec_from_args(argv=None):
    args = build_parser().parse_args(argv)
    raw = read_config(args.config) if args.config else {}
    for key in KEYS:
        value = getattr(args, {"n-max": "n_max", "format": "fmt"}.get(key, key))
        if value is not None:
            raw[key] = value
    spec = ScenarioSpec()
    for key, value in raw.items():
        setattr(spec, KEYS[key], _coerce(key, value))
    return spec.validate()


def format_number(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def format_csv(rows, columns=COLUMNS):
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for c in columns:
            v = row[c]
            cells.append(v if isinstance(v, str) else format_number(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def format_record(row, columns=COLUMNS):
    """One JSON object per line, numbers written with 17 significant digits."""
    parts = []
    for c in columns:
        v = row[c]
        if isinstance(v, str) or isinstance(v, bool):
            text = json.dumps(v)
        elif isinstance(v, float) and not math.isfinite(v):
            text = "null"
        else:
            text = format_number(v)
        parts.append(f"{json.dumps(c)}: {text}")
    return "{" + ", ".join(parts) + "}"


def parse_records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _row(mode, cfg, result):
    return {"mode": mode, "omega": cfg.omega, "a": cfg.a, "m": cfg.m, "hbar": cfg.hbar, "b": cfg.b,
            "z0": cfg.z0, "L": cfg.L, "N_ladder": int(result.ladder_truncation),
            "probability": float(result.probability), "rate": float(result.rate),
            "quad_err": float(result.quad_err), "flags": ";".join(sorted(result.flags))}


def _evaluate(job):
    """Worker: one cell. Returns (result, error message, seconds)."""
    cfg, tol, n_max = job
    start = time.perf_counter()
    try:
        res = response.transition_probability(cfg, tol, n_max)
        return res, None, time.perf_counter() - start
    except AccuracyError as exc:
        return exc.partial, str(exc), time.perf_counter() - start


def _run_cells(configs, spec):
    jobs = [(cfg, spec.tol, spec.n_max) for cfg in configs]
    n_workers = spec.jobs or len(os.sched_getaffinity(0))
    if n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(n_workers, len(jobs))) as pool:
            return list(pool.map(_evaluate, jobs))
    return [_evaluate(j) for j in jobs]


def _configs(spec):
    """Cells of the requested mode, in a fixed order."""
    hb = sorted(spec.hbar, reverse=True)
    bs = sorted(spec.b, reverse=True)
    out = []
    for omega in spec.omega:
        for L in spec.L:
            base = response.DetectorConfig(m=spec.m, hbar=hb[0], a=spec.a, b=bs[0], omega=omega, L=L,
                                           z0=spec.z0)
            if spec.mode in ("rate", "spectrum"):
                out.append(base)
            elif spec.mode == "limit-classical-first":
                out += [replace(base, hbar=h) for h in hb]
                out += [replace(base, hbar=hb[-1], b=b) for b in bs[1:]]
            else:
                out += [replace(base, b=b) for b in bs]
    return out


def _summaries(spec, configs, outcomes):
    """Per-sweep header values: the closed-form target or the fitted exponent."""
    out = []
    groups = {}
    for cfg, (res, err, _) in zip(configs, outcomes):
        groups.setdefault((cfg.omega, cfg.L), []).append((cfg, res, err))
    for (omega, L), cells in groups.items():
        entry = {"omega": omega, "L": L}
        if spec.mode in ("rate", "spectrum", "limit-classical-first"):
            entry["target_rate"] = response.unruh_probability_closed_form(omega, spec.a, L) / L
            entry["thermal_rate"] = response.unruh_rate_closed_form(omega, spec.a)
        if spec.mode == "limit-point-first":
            good = [(c.b, r.probability, r.quad_err) for c, r, e in cells
                    if e is None and r.probability > 3 * r.quad_err]
            if len(good) >= 2:
                b, P, err = (np.array(x) for x in zip(*good))
                k, _, k_err = response.fit_power_law(b, P)
                powers = (3, 5) if len(good) >= 4 else (3,)
                p0, p0_err = response.extrapolate_to_zero(b, P, np.maximum(err, 1e-300), powers)
                entry.update(exponent=k, exponent_err=k_err, extrapolated=p0, extrapolated_err=p0_err)
            else:
                entry["exponent"] = None
        out.append(entry)
    return out


def run(spec, stdout=sys.stdout):
    """Execute a validated spec; returns (table text, report dict, timings, exit code)."""
    if spec.mode == "validate":
        start = time.perf_counter()
        verdicts = validation.run_battery(seed=spec.seed, stream=stdout)
        rows = [{"criterion": v.criterion, "name": v.name, "passed": "true" if v.passed else "false",
                 "summary": v.summary} for v in verdicts]
        report = {"version": __version__, "mode": spec.mode, "seed": spec.seed,
                  "verdicts": [{"criterion": v.criterion, "passed": v.passed} for v in verdicts]}
        timings = {f"criterion {v.criterion}": v.seconds for v in verdicts}
        timings["total"] = time.perf_counter() - start
        code = EXIT_OK if all(v.passed for v in verdicts) else EXIT_NUMERIC
        return rows, VERDICT_COLUMNS, report, timings, code

    configs = _configs(spec)
    outcomes = _run_cells(configs, spec)
    rows = []
    failures = 0
    for cfg, (res, err, _) in zip(configs, outcomes):
        if err is not None:
            failures += 1
            res.flags = set(res.flags) | {quad.BUDGET_EXHAUSTED}
        rows.append(_row(spec.mode, cfg, res))
    report = {"version": __version__, "mode": spec.mode,
              "config": {k: getattr(spec, k) for k in ("a", "m", "hbar", "b", "omega", "L", "eps",
                                                       "tol", "n_max", "seed")},
              "cells": len(rows), "failed_cells": failures,
              "sweeps": _summaries(spec, configs, outcomes)}
    timings = {"cells": [t for _, _, t in outcomes]}
    return rows, COLUMNS, report, timings, (EXIT_NUMERIC if failures else EXIT_OK)


def emit(rows, columns, fmt, out, report=None, timings=None):
    """Write the table (and, for file output, ``.report.json`` / ``.timing.json`` sidecars)."""
    if fmt == "csv":
        text = format_csv(rows, columns)
    else:
        text = "".join(format_record(r, columns) + "\n" for r in rows)
    if out == "-":
        sys.stdout.write(text)
        if report is not None:
            print(json.dumps(report, sort_keys=True), file=sys.stderr)
        return
    path = Path(out)
    path.write_text(text)
    if report is not None:
        Path(str(path) + ".report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    if timings is not None:
        Path(str(path) + ".timing.json").write_text(json.dumps(timings, indent=2) + "\n")


def main(argv=None):
    try:
        spec = spec_from_args(argv)
    except UsageError as exc:
        print(f"unruh-packet: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"unruh-packet: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"unruh-packet: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if spec.out != "-":
        parent = Path(spec.out).resolve().parent
        if not parent.is_dir() or not os.access(parent, os.W_OK):
            print(f"unruh-packet: cannot write to {spec.out}", file=sys.stderr)
            return EXIT_IO
    # in validate mode the verdict lines go to stderr when the table goes to stdout
    log = sys.stderr if spec.out == "-" else sys.stdout
    rows, columns, report, timings, code = run(spec, stdout=log)
    try:
        emit(rows, columns, spec.fmt, spec.out, report, timings)
    except OSError as exc:
        print(f"unruh-packet: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
