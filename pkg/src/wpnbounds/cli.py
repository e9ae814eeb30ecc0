"""Command-line front end: bound tables, figure data and verification.

Output is data only (CSV or JSON); every file starts with the run manifest.
Exit codes: 0 success, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__, bounds, entropy, verify

SIG_DIGITS = 12


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    arguments: dict
    seed: int | None
    tool_version: str = __version__
    timestamp: str = "unset"
    checks: dict = field(default_factory=dict)

    def header_lines(self):
        yield f"command: {self.command}"
        yield f"arguments: {json.dumps(self.arguments, sort_keys=True)}"
        yield f"seed: {self.seed}"
        yield f"tool_version: {self.tool_version}"
        yield f"timestamp: {self.timestamp}"
        for name, ok in self.checks.items():
            yield f"check {name}: {'pass' if ok else 'FAIL'}"

    def as_dict(self):
        return {
            "command": self.command,
            "arguments": self.arguments,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "checks": {k: ("pass" if v else "fail") for k, v in self.checks.items()},
        }


@dataclass(frozen=True)
class SweepSpec:
    p_min: float = 0.5
    p_max: float = 50.0
    p_steps: int = 100
    inv_sigma_min: float = 1.0
    inv_sigma_max: float = 100.0
    inv_sigma_steps: int = 100
    output_format: str = "csv"

    def __post_init__(self):
        if not (self.p_min < self.p_max and self.inv_sigma_min < self.inv_sigma_max):
            raise UsageError("sweep minima must be below maxima")
        if self.p_steps < 2 or self.inv_sigma_steps < 2:
            raise UsageError("sweeps need at least 2 steps")
        if self.p_min < 0 or self.inv_sigma_min <= 0:
            raise UsageError("P must be >= 0 and 1/sigma2 > 0")

    def powers(self):
        return np.linspace(self.p_min, self.p_max, self.p_steps)

    def inv_sigmas(self):
        return np.linspace(self.inv_sigma_min, self.inv_sigma_max, self.inv_sigma_steps)


# --------------------------------------------------------------------------
# serialisation


def fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.{SIG_DIGITS}g}"


def _json_value(v):
    if isinstance(v, str):
        return v
    v = float(v)
    if not math.isfinite(v):
        return fmt(v)
    return float(fmt(v))


def render(manifest, columns, rows, fmt_name, notes=(), summary=None):
    if fmt_name == "json":
        obj = {
            "manifest": manifest.as_dict(),
            "rows": [{c: _json_value(r[c]) for c in columns} for r in rows],
        }
        if notes:
            obj["notes"] = list(notes)
        if summary:
            obj["summary"] = {k: _json_value(v) for k, v in summary.items()}
        return json.dumps(obj, indent=1) + "\n"
    lines = [f"# {h}" for h in manifest.header_lines()]
    lines += [f"# note: {n}" for n in notes]
    if summary:
        lines.append("# summary: " + ", ".join(f"{k}={fmt(v)}" for k, v in summary.items()))
    lines.append(",".join(columns))
    lines += [",".join(fmt(r[c]) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _manifest(args, command, checks=None):
    skip = {"func", "command", "out", "stamp"}
    arguments = {k: v for k, v in vars(args).items() if k not in skip}
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if args.stamp else "unset"
    return RunManifest(command=command, arguments=arguments, seed=getattr(args, "seed", None),
                       timestamp=stamp, checks=checks or {})


# --------------------------------------------------------------------------
# commands


def _report_row(point):
    P, s = point
    return bounds.report(bounds.ChannelParams(P, s)).as_dict()


def cmd_bounds(args):
    points = [(float(P), float(s)) for P in args.p for s in args.sigma2]
    for P, s in points:
        if not (math.isfinite(P) and math.isfinite(s)) or P < 0 or s < 0:
            raise UsageError(f"invalid parameter point P={P}, sigma2={s}")
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as ex:
            rows = list(ex.map(_report_row, points))
    else:
        rows = [_report_row(pt) for pt in points]
    columns = list(bounds.BoundReport.__dataclass_fields__)
    ok = all(r["gap_exact"] <= r["gap_cap"] + 1e-9 for r in rows if r["power"] > 0)
    checks = {"gap_within_cap": ok}
    _emit(render(_manifest(args, "bounds", checks), columns, rows, args.format), args.out)
    return 0 if ok else 1


def fig1_rows(sigma2_max=6.0, steps=600):
    grid = np.linspace(0.0, sigma2_max, steps + 1)
    grid[0] = 1e-4
    rows = []
    for s in grid:
        rows.append({
            "sigma2": s,
            "h_exact": entropy.wrapped_entropy_exact(s).bits,
            "h_lower": entropy.wrapped_entropy_lower(s).bits,
            "gaussian_entropy": 0.5 * math.log2(2 * math.pi * math.e * s),
            "log_2pi": math.log2(2 * math.pi),
        })
    return rows


def fig1_crossing(rows):
    """Abscissa where the Gaussian entropy first exceeds log2(2 pi), linearly interpolated."""
    for a, b in zip(rows[:-1], rows[1:]):
        da = a["gaussian_entropy"] - a["log_2pi"]
        db = b["gaussian_entropy"] - b["log_2pi"]
        if da <= 0 < db or da < 0 <= db:
            return a["sigma2"] + (b["sigma2"] - a["sigma2"]) * (-da) / (db - da)
    return math.nan


def cmd_fig1(args):
    rows = fig1_rows(args.sigma2_max, args.grid)
    step = args.sigma2_max / args.grid
    crossing = fig1_crossing(rows)
    tol = verify.SANDWICH_SLACK
    sandwich = all(r["h_lower"] <= r["h_exact"] + tol
                   and r["h_exact"] <= min(r["gaussian_entropy"], r["log_2pi"]) + tol
                   for r in rows)
    checks = {
        "sandwich": sandwich,
        "crossing_at_2pi_over_e": abs(crossing - entropy.SIGMA2_CROSS) <= step,
    }
    notes = ["first row uses sigma2 = 1e-4 instead of 0 (the entropy diverges at 0)"]
    text = render(_manifest(args, "fig1", checks), list(rows[0]), rows, args.format, notes,
                  summary={"crossing_sigma2": crossing})
    _emit(text, args.out)
    return 0 if all(checks.values()) else 1


def fig2_rows(lambda_max=10.0, steps=100):
    rows = []
    for lam in np.linspace(0.0, lambda_max, steps + 1):
        rows.append({
            "lambda": lam,
            "h_exact": entropy.chi2_entropy_exact(lam).bits,
            "inner_bound": entropy.chi2_entropy_lower(lam).bits,
            "outer_bound": entropy.chi2_entropy_upper(lam).bits,
        })
    return rows


def cmd_fig2(args):
    rows = fig2_rows(args.lambda_max, args.grid)
    ok = all(r["inner_bound"] <= r["h_exact"] <= r["outer_bound"] for r in rows)
    checks = {"bracket": ok}
    notes = ["inner_bound = -inf at lambda = 0 (the lower bound diverges there)"]
    _emit(render(_manifest(args, "fig2", checks), list(rows[0]), rows, args.format, notes),
          args.out)
    return 0 if ok else 1


def gap_grid(spec):
    rows = []
    for P in spec.powers():
        for inv in spec.inv_sigmas():
            p = bounds.ChannelParams(float(P), float(1 / inv))
            if P == 0:
                rows.append({"power": P, "inv_sigma2": inv, "regime": "small", "gap": 0.0})
                continue
            rows.append({"power": P, "inv_sigma2": inv, "regime": bounds.classify(p).value,
                         "gap": bounds.gap_exact(p)})
    return rows


def cmd_gap_contour(args):
    spec = SweepSpec(args.p_min, args.p_max, args.p_steps, args.inv_sigma_min,
                     args.inv_sigma_max, args.inv_sigma_steps, args.format)
    rows = gap_grid(spec)
    top = max(rows, key=lambda r: r["gap"])
    cap_ok = all(r["gap"] <= bounds.gap_cap(r["regime"]) + 1e-9 for r in rows)
    checks = {"global_max_le_6.65": top["gap"] <= bounds.GAP_CAPS["intermediate"] + 1e-9,
              "regime_caps": cap_ok}
    notes = ["gap = regime outer bound minus Gaussian-input rate with the phase term "
             "floored at zero"]
    summary = {"max_gap": top["gap"], "at_power": top["power"], "at_inv_sigma2": top["inv_sigma2"]}
    _emit(render(_manifest(args, "gap-contour", checks), list(rows[0]), rows, args.format,
                 notes, summary), args.out)
    return 0 if all(checks.values()) else 1


def cmd_verify(args):
    results = verify.run_all(args.level, args.seed)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}", file=sys.stderr)
    checks = {r.name: r.passed for r in results}
    rows = [{"check": r.name, "passed": "pass" if r.passed else "fail", "detail": r.detail}
            for r in results]
    _emit(render(_manifest(args, "verify", checks), ["check", "passed", "detail"], rows,
                 args.format), args.out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


# --------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wpnbounds",
        description="Capacity bounds for the Wiener phase noise channel.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--stamp", action="store_true",
                        help="record the wall-clock time in the manifest "
                             "(output is then no longer byte-reproducible)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="all bounds at (P, sigma2) points")
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--sigma2", type=float, nargs="+", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("fig1", parents=[common], help="wrapped Gaussian entropy curves")
    p.add_argument("--sigma2-max", type=float, default=6.0)
    p.add_argument("--grid", type=int, default=600)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("fig2", parents=[common], help="chi-square entropy bracket")
    p.add_argument("--lambda-max", type=float, default=10.0)
    p.add_argument("--grid", type=int, default=100)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("gap-contour", parents=[common], help="gap over a (P, 1/sigma2) grid")
    p.add_argument("--p-min", type=float, default=0.5)
    p.add_argument("--p-max", type=float, default=50.0)
    p.add_argument("--p-steps", type=int, default=100)
    p.add_argument("--inv-sigma-min", type=float, default=1.0)
    p.add_argument("--inv-sigma-max", type=float, default=100.0)
    p.add_argument("--inv-sigma-steps", type=int, default=100)
    p.set_defaults(func=cmd_gap_contour)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("grid",):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name} must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"wpnbounds: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
