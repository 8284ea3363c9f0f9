"""Command-line front end.

    tdho run <config.json>
    tdho figure <1-7> --out <dir> [--param k=v ...] [--no-render]

A run configuration is a JSON object:

    {
      "scenario": {"kind": "pulsating-mass", "m0": 1.0, "omega0": 1.0,
                   "nu": 0.5, "hbar": 1.0},
      "sweep":    {"t_start": 0.0, "t_end": 1.2, "n_steps": 100},
      "grid":     {"x_min": -40.0, "x_max": 40.0, "n_points": 4096},
      "n":        0,
      "outputs":  [{"target": "entropy", "path": "out/entropy.csv"}],
      "figure":   1,
      "kernel":   {"x_start": 0.0, "x_end": 1.0}
    }

"grid" is optional (auto-sized per time slice when omitted), "n" defaults
to 0, "figure" is required only by figure outputs, and "kernel" only by
kernel outputs. Unknown keys are rejected. Outputs are deterministic:
re-running a config rewrites byte-identical CSV files. There is no seed
option because nothing here is random; TDHO_THREADS caps sweep
parallelism without affecting results.

Exit codes: 0 success, 2 configuration error, 3 domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from .entropy import entropy_sweep
from .ermakov import analytic_rho_solution
from .errors import CausticError, ConfigError, DomainError, IoError, TdhoError
from .figures import FIGURE_IDS, emit_figure_data, figure_params
from .model import (Scenario, ScenarioKind, SpatialGrid, TimeGrid,
                    ensure_valid_span, scenario_from_json)
from .output import write_csv
from .propagator import BoundaryData, kernel
from .wavefunction import density_pair

TARGETS = ("density_x", "density_p", "entropy", "kernel", "figure")

_PULSATING_FIGURES = (1, 2, 3, 4)
_INVERSE_SQUARE_FIGURES = (5, 6, 7)


@dataclass(frozen=True)
class OutputSpec:
    target: str
    path: str


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    sweep: TimeGrid
    outputs: tuple
    grid: Optional[SpatialGrid] = None
    n: int = 0
    figure: Optional[int] = None
    kernel_x_start: float = 0.0
    kernel_x_end: float = 1.0


_CONFIG_KEYS = {"scenario", "sweep", "grid", "n", "outputs", "figure", "kernel"}


def _require_keys(obj, allowed, context):
    if not isinstance(obj, dict):
        raise ConfigError(f"{context} must be a JSON object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown {context} keys: {sorted(unknown)}")


def _number(obj, key, context):
    value = obj.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{context}.{key} must be a number")
    return value


def config_from_json(obj: dict) -> RunConfig:
    """Validate a parsed JSON object into a RunConfig."""
    _require_keys(obj, _CONFIG_KEYS, "config")
    for key in ("scenario", "sweep", "outputs"):
        if key not in obj:
            raise ConfigError(f"config is missing {key!r}")
    scenario = scenario_from_json(obj["scenario"])

    sweep_obj = obj["sweep"]
    _require_keys(sweep_obj, ("t_start", "t_end", "n_steps"), "sweep")
    try:
        sweep = TimeGrid(_number(sweep_obj, "t_start", "sweep"),
                         _number(sweep_obj, "t_end", "sweep"),
                         int(_number(sweep_obj, "n_steps", "sweep")))
    except TdhoError as exc:
        raise ConfigError(f"bad sweep: {exc}") from None
    try:
        ensure_valid_span(scenario, sweep.t_start, sweep.t_end)
    except DomainError as exc:
        raise ConfigError(f"sweep outside the scenario domain: {exc}") from None

    grid = None
    if "grid" in obj:
        grid_obj = obj["grid"]
        _require_keys(grid_obj, ("x_min", "x_max", "n_points"), "grid")
        try:
            grid = SpatialGrid(_number(grid_obj, "x_min", "grid"),
                               _number(grid_obj, "x_max", "grid"),
                               int(_number(grid_obj, "n_points", "grid")))
        except TdhoError as exc:
            raise ConfigError(f"bad grid: {exc}") from None

    n = 0
    if "n" in obj:
        if not isinstance(obj["n"], int) or isinstance(obj["n"], bool) or obj["n"] < 0:
            raise ConfigError("n must be a nonnegative integer")
        n = obj["n"]

    figure = None
    if "figure" in obj:
        if obj["figure"] not in FIGURE_IDS:
            raise ConfigError("figure must be an integer 1..7")
        figure = obj["figure"]
        wanted = (ScenarioKind.PULSATING_MASS if figure in _PULSATING_FIGURES
                  else ScenarioKind.INVERSE_SQUARE_FREQUENCY)
        if scenario.kind is not wanted:
            raise ConfigError(f"figure {figure} needs a {wanted.value} scenario")

    kernel_x_start, kernel_x_end = 0.0, 1.0
    if "kernel" in obj:
        kernel_obj = obj["kernel"]
        _require_keys(kernel_obj, ("x_start", "x_end"), "kernel")
        kernel_x_start = float(_number(kernel_obj, "x_start", "kernel"))
        kernel_x_end = float(_number(kernel_obj, "x_end", "kernel"))

    if not isinstance(obj["outputs"], list) or not obj["outputs"]:
        raise ConfigError("outputs must be a nonempty list")
    outputs = []
    for entry in obj["outputs"]:
        _require_keys(entry, ("target", "path"), "output")
        target = entry.get("target")
        if target not in TARGETS:
            raise ConfigError(f"unknown output target {target!r}")
        if target == "figure" and figure is None:
            raise ConfigError("a figure output needs the config 'figure' id")
        path = entry.get("path")
        if not isinstance(path, str) or not path:
            raise ConfigError("output path must be a nonempty string")
        outputs.append(OutputSpec(target=target, path=path))

    return RunConfig(scenario=scenario, sweep=sweep, outputs=tuple(outputs),
                     grid=grid, n=n, figure=figure,
                     kernel_x_start=kernel_x_start, kernel_x_end=kernel_x_end)


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    return config_from_json(obj)


@dataclass
class RunReport:
    """What a run produced: per-file row counts, the worst bound margin
    seen across entropy rows, and the closed-form adjudication gap for
    pulsating-mass entropy sweeps."""

    files: list = field(default_factory=list)
    min_bound_margin: Optional[float] = None
    bound_violations: int = 0
    adjudication_gap: Optional[float] = None

    def add_file(self, path, rows=None):
        self.files.append((str(path), rows))

    def to_text(self) -> str:
        lines = [f"wrote {path}" if rows is None else f"wrote {rows} rows -> {path}"
                 for path, rows in self.files]
        if self.min_bound_margin is not None:
            status = ("no violations" if self.bound_violations == 0
                      else f"{self.bound_violations} VIOLATIONS")
            lines.append(f"min bound margin: {self.min_bound_margin:.3e} ({status})")
        if self.adjudication_gap is not None:
            lines.append("closed-form adjudication gap (pulsating ground state): "
                         f"{self.adjudication_gap:.6e}")
        return "\n".join(lines)


def _threads() -> Optional[int]:
    raw = os.environ.get("TDHO_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"TDHO_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)


def _scenario_meta(s: Scenario) -> list:
    parts = [f"kind: {s.kind.value}", f"m0: {s.m0}", f"omega0: {s.omega0}",
             f"hbar: {s.hbar}"]
    if s.kind is ScenarioKind.PULSATING_MASS:
        parts.insert(3, f"nu: {s.nu}")
    return parts


def _figure_overrides(config: RunConfig) -> dict:
    s = config.scenario
    overrides = {"m0": s.m0, "hbar": s.hbar}
    if config.figure in (1, 2, 3, 4, 5):
        overrides["omega0"] = s.omega0
    if config.figure == 1:
        overrides["nu"] = s.nu
    return overrides


def run(config: RunConfig) -> RunReport:
    """Execute every output in the config; deterministic for a fixed config."""
    report = RunReport()
    s = config.scenario
    times = config.sweep.times
    meta = _scenario_meta(s) + [f"n: {config.n}"]
    try:
        for spec in config.outputs:
            if spec.target == "entropy":
                records = entropy_sweep(config.n, s, times, grid=config.grid,
                                        max_workers=_threads())
                rows = [(r.t, r.s_x, r.s_p, r.s_joint, r.s_closed, r.bound_margin,
                         r.method) for r in records]
                count = write_csv(spec.path,
                                  ("t", "s_x", "s_p", "s_joint", "s_closed",
                                   "bound_margin", "method"),
                                  rows, meta)
                worst = min(r.bound_margin for r in records)
                if report.min_bound_margin is None or worst < report.min_bound_margin:
                    report.min_bound_margin = worst
                report.bound_violations += sum(r.bound_margin < -1e-6 for r in records)
                if s.kind is ScenarioKind.PULSATING_MASS and config.n == 0:
                    gap = max(abs(r.s_closed - r.s_joint) for r in records)
                    if report.adjudication_gap is None or gap > report.adjudication_gap:
                        report.adjudication_gap = gap
                report.add_file(spec.path, count)
            elif spec.target in ("density_x", "density_p"):
                rows = []
                for t in times:
                    pair = density_pair(config.n, s, t, grid=config.grid)
                    if spec.target == "density_x":
                        rows.extend(zip([t] * len(pair.x), pair.x, pair.density_x))
                    else:
                        rows.extend(zip([t] * len(pair.p), pair.p, pair.density_p))
                coord = "x" if spec.target == "density_x" else "p"
                count = write_csv(spec.path, ("t", coord, spec.target), rows, meta)
                report.add_file(spec.path, count)
            elif spec.target == "kernel":
                rho = analytic_rho_solution(s, config.sweep)
                rows = []
                for t in times[1:]:
                    b = BoundaryData(config.kernel_x_start, config.kernel_x_end,
                                     config.sweep.t_start, t)
                    try:
                        value = kernel(s, rho, b)
                    except CausticError:
                        continue  # separation on a caustic: no row
                    rows.append((b.x_start, b.x_end, b.t_start, b.t_end,
                                 value.value.real, value.value.imag,
                                 int(value.caustic_near)))
                count = write_csv(spec.path,
                                  ("x_start", "x_end", "t_start", "t_end",
                                   "re_K", "im_K", "caustic_flag"),
                                  rows, meta)
                report.add_file(spec.path, count)
            elif spec.target == "figure":
                written = emit_figure_data(config.figure, spec.path,
                                           params=_figure_overrides(config))
                for path in written:
                    rows = _count_rows(path) if str(path).endswith(".csv") else None
                    report.add_file(path, rows)
    except OSError as exc:
        raise IoError(str(exc)) from None
    return report


def _count_rows(path) -> int:
    with open(path) as fh:
        return sum(1 for line in fh if line and not line.startswith("#")) - 1


def _parse_param(raw: str):
    if "=" not in raw:
        raise ConfigError(f"--param needs k=v, got {raw!r}")
    key, value = raw.split("=", 1)
    try:
        return key, float(value)
    except ValueError:
        raise ConfigError(f"--param value for {key!r} must be a number") from None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tdho",
        description="Time-dependent oscillator sweeps: densities, kernels, "
                    "joint entropies, figure data.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="execute a JSON run configuration")
    run_parser.add_argument("config", help="path to the JSON config")

    figure_parser = sub.add_parser("figure", help="emit data (and a PNG) for one figure")
    figure_parser.add_argument("figure_id", type=int, choices=list(FIGURE_IDS),
                               metavar="1-7")
    figure_parser.add_argument("--out", required=True, help="output directory")
    figure_parser.add_argument("--param", action="append", default=[],
                               metavar="k=v", help="override a figure parameter")
    figure_parser.add_argument("--no-render", action="store_true",
                               help="skip the PNG, write CSV only")

    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            report = run(load_config(args.config))
            print(report.to_text())
            if report.bound_violations:
                print("bound violations detected", file=sys.stderr)
                return 3
            return 0
        overrides = dict(_parse_param(raw) for raw in args.param)
        written = emit_figure_data(args.figure_id, args.out, params=overrides,
                                   render=not args.no_render)
        for path in written:
            print(f"wrote {path}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except (IoError, OSError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
