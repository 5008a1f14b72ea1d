"""Command-line front end.

Subcommands: analytic | nonrwa | oracle | compare | report. Series are
emitted as CSV (header ``t_s,re,im``, 17 significant digits, LF-terminated);
identical requests produce byte-identical files.

Exit codes: 0 success / compare pass, 2 usage error (argparse), 3 config or
validation error, 4 failed comparison, 5 oracle capacity or grid error,
6 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analytic, nonrwa, oracle
from .config import ConfigError, parse_config, serialize_config
from .model import (
    ORACLE_QUBIT_CAP,
    FidSeries,
    FullFrameSpec,
    SpinSystem,
    preset,
    validate,
)

EXIT_OK = 0
EXIT_CONFIG = 3
EXIT_COMPARE = 4
EXIT_CAP = 5
EXIT_IO = 6


@dataclass(frozen=True)
class RunRequest:
    command: str
    system: SpinSystem
    t_max: float
    dt: float
    step: float | None = None
    output: str | None = None
    window: tuple[float, float] | None = None
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.t_max <= 0:
            raise ValueError("t_max must be > 0")
        if not 0 < self.dt <= self.t_max:
            raise ValueError("dt must be in (0, t_max]")
        if self.step is not None and self.step > self.dt:
            raise ValueError("step must be <= dt")


@dataclass(frozen=True)
class CompareReport:
    series_a: str
    series_b: str
    max_abs_dev: float
    dev_time: float
    recursion_a: float | None
    recursion_b: float | None
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_abs_dev <= self.tolerance


def time_grid(t_max: float, dt: float) -> np.ndarray:
    n = int(round(t_max / dt))
    return dt * np.arange(n + 1)


def emit_csv(series: FidSeries, path) -> None:
    lines = ["t_s,re,im"]
    for t, re, im in zip(series.times, series.re, series.im):
        lines.append(f"{t:.17g},{re:.17g},{im:.17g}")
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def read_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1], data[:, 2]


def _compute_series(kind: str, request: RunRequest) -> FidSeries:
    grid = time_grid(request.t_max, request.dt)
    if kind == "analytic":
        return analytic.fid_series_analytic(request.system, grid)
    if kind == "nonrwa":
        return nonrwa.fid_nonrwa(request.system, grid, request.step)
    if kind == "oracle":
        frame = "rotating-nonrwa" if request.system.nonrwa is not None else "rwa"
        return oracle.fid_series_oracle(
            request.system, FullFrameSpec(frame=frame), grid, request.step
        )
    raise ValueError(f"unknown series kind {kind!r}")


def run_compare(kind_a: str, kind_b: str, request: RunRequest) -> CompareReport:
    """Evaluate two solver paths on the shared grid and compare."""
    workers = int(os.environ.get("SPINBATH_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fa = pool.submit(_compute_series, kind_a, request)
            fb = pool.submit(_compute_series, kind_b, request)
            a, b = fa.result(), fb.result()
    else:
        a = _compute_series(kind_a, request)
        b = _compute_series(kind_b, request)
    dev = np.abs(a.re - b.re)
    worst = int(np.argmax(dev))
    rec_a = rec_b = None
    if request.window is not None:
        rec_a = analytic.recursion_metric(a, request.window)
        rec_b = analytic.recursion_metric(b, request.window)
    return CompareReport(
        series_a=kind_a,
        series_b=kind_b,
        max_abs_dev=float(dev[worst]),
        dev_time=float(a.times[worst]),
        recursion_a=rec_a,
        recursion_b=rec_b,
        tolerance=request.tolerance,
    )


def _load_system(args) -> SpinSystem:
    if args.config is not None:
        system = parse_config(Path(args.config).read_text())
        if getattr(args, "j_hz", None) is not None:
            raise ConfigError(["--j-hz only applies to --preset tms"])
        return system
    kwargs = {}
    if getattr(args, "j_hz", None) is not None:
        kwargs["j_hz"] = args.j_hz
    try:
        return preset(args.preset, **kwargs)
    except ValueError as exc:
        raise ConfigError([str(exc)]) from None


def _add_common(parser, with_step=True):
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=("tms", "tes", "tes-virtual-13c", "tes-lowfield"))
    src.add_argument("--config", help="path to a JSON configuration file")
    parser.add_argument("--j-hz", type=float, default=None,
                        help="coupling in Hz (required for --preset tms)")
    parser.add_argument("--tmax", type=float, default=3.0)
    parser.add_argument("--dt", type=float, default=1e-3)
    if with_step:
        parser.add_argument("--step", type=float, default=None,
                            help="internal integrator step in s")
    parser.add_argument("--out", default=None, help="output CSV path")


def _parse_window(text):
    lo, _, hi = text.partition(":")
    return (float(lo), float(hi))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbath",
        description="FID signals of a central qubit in structured qubit environments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="closed-form rotating-frame signal")
    _add_common(p, with_step=False)

    p = sub.add_parser("nonrwa", help="strong-coupling per-part propagation")
    _add_common(p)

    p = sub.add_parser("oracle", help="brute-force full-Hilbert-space signal")
    _add_common(p)
    p.add_argument("--frame", choices=("rwa", "rotating-nonrwa"), default=None)

    p = sub.add_parser("compare", help="compare two solver paths")
    _add_common(p)
    p.add_argument("--a", required=True, choices=("analytic", "nonrwa", "oracle"))
    p.add_argument("--b", required=True, choices=("analytic", "nonrwa", "oracle"))
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--window", type=_parse_window, default=None,
                   help="recursion-metric window as t_a:t_b")

    p = sub.add_parser("report", help="recursion metric of an emitted CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--window", type=_parse_window, required=True)
    return parser


def _cmd_series(kind: str, args) -> int:
    system = _load_system(args)
    violations = validate(system)
    if violations:
        print("invalid system:", file=sys.stderr)
        for v in violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_CONFIG
    request = RunRequest(
        command=kind,
        system=system,
        t_max=args.tmax,
        dt=args.dt,
        step=getattr(args, "step", None),
        output=args.out,
    )
    if kind == "oracle" and args.frame is not None:
        grid = time_grid(request.t_max, request.dt)
        series = oracle.fid_series_oracle(
            system, FullFrameSpec(frame=args.frame), grid, request.step
        )
    else:
        series = _compute_series(kind, request)
    if args.out is not None:
        emit_csv(series, args.out)
    else:
        sys.stdout.write("t_s,re,im\n")
        for t, re, im in zip(series.times, series.re, series.im):
            sys.stdout.write(f"{t:.17g},{re:.17g},{im:.17g}\n")
    return EXIT_OK


def _cmd_compare(args) -> int:
    system = _load_system(args)
    request = RunRequest(
        command="compare",
        system=system,
        t_max=args.tmax,
        dt=args.dt,
        step=args.step,
        window=args.window,
        tolerance=args.tolerance,
    )
    report = run_compare(args.a, args.b, request)
    print(f"series: {report.series_a} vs {report.series_b}")
    print(f"max_abs_dev: {report.max_abs_dev:.6e} at t = {report.dev_time:.6g} s")
    if report.recursion_a is not None:
        print(f"recursion_metric[{report.series_a}]: {report.recursion_a:.6g}")
        print(f"recursion_metric[{report.series_b}]: {report.recursion_b:.6g}")
    print(f"tolerance: {report.tolerance:.6e} -> {'pass' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_COMPARE


def _cmd_report(args) -> int:
    times, re, im = read_csv(args.infile)
    lo, hi = args.window
    mask = (times >= lo) & (times <= hi)
    if not np.any(mask):
        print("window contains no samples", file=sys.stderr)
        return EXIT_CAP
    print(f"samples: {int(mask.sum())}")
    print(f"recursion_metric: {float(np.max(np.abs(re[mask]))):.17g}")
    print(f"max_abs_im: {float(np.max(np.abs(im[mask]))):.17g}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("analytic", "nonrwa", "oracle"):
            return _cmd_series(args.command, args)
        if args.command == "compare":
            return _cmd_compare(args)
        return _cmd_report(args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(problem, file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
