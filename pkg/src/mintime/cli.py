"""Command-line front end.

    mintime plan FILE [--out DIR] [--n INT] [--eps-feas FLOAT] [--emit-plots]
    mintime plan --preset example1 [...]
    mintime preset example3 > problem.yaml

Exit status: 0 feasible, 2 infeasible, 1 bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import problem_file
from .problem import DegeneratePathError, InconsistentBoundsError
from .solver import PlanResult, plan

EXIT_FEASIBLE, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2

PROFILE_COLUMNS = ("s", "k", "mu_minus", "mu_plus", "F", "B", "w_star", "v_star", "t",
                   "a_long", "a_norm")

log = logging.getLogger("mintime")


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return f"{x:.12g}"


def profile_columns(result: PlanResult) -> dict[str, np.ndarray]:
    env = result.envelope
    return {
        "s": result.w_star.s,
        "k": result.curvature.values,
        "mu_minus": env.mu_minus.values,
        "mu_plus": env.mu_plus.values,
        "F": result.forward.values,
        "B": result.backward.values,
        "w_star": result.w_star.values,
        "v_star": result.v_star.values,
        "t": result.cumulative_time,
        "a_long": result.a_long.values,
        "a_norm": result.a_norm.values,
    }


def write_table(path: Path, columns: dict[str, np.ndarray]) -> None:
    names = list(columns)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*(columns[c] for c in names)):
            writer.writerow([_fmt(float(v)) for v in row])


def verdict(result: PlanResult, name: str | None = None) -> dict:
    return {
        "problem": name,
        "feasible": result.feasible,
        "total_time": result.total_time if math.isfinite(result.total_time) else "inf",
        "n": result.w_star.grid.n,
        "s_f": result.w_star.grid.s_f,
        "eps_feas": result.eps_feas,
        "violations": [
            {"index": v.index, "s": v.s, "bound": v.bound, "magnitude": v.magnitude}
            for v in result.violations
        ],
    }


def emit_plot_data(result: PlanResult, output_dir) -> list[Path]:
    """One table per figure: envelope with both sweeps, and envelope with the optimum."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    cols = profile_columns(result)
    files = {
        out / "operators.csv": {k: cols[k] for k in ("s", "mu_plus", "F", "B")},
        out / "optimal.csv": {k: cols[k] for k in ("s", "mu_plus", "w_star")},
    }
    for path, table in files.items():
        write_table(path, table)
    return list(files)


def write_bundle(result: PlanResult, output_dir, name: str | None = None) -> tuple[Path, Path]:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    profile = out / "profile.csv"
    write_table(profile, profile_columns(result))
    verdict_path = out / "verdict.json"
    with open(verdict_path, "w") as fh:
        json.dump(verdict(result, name), fh, indent=2)
        fh.write("\n")
    return profile, verdict_path


def run(problem_path=None, output_dir="plan_out", n=None, eps_feas=None, preset=None,
        emit_plots=False) -> int:
    try:
        if preset is not None:
            pf = problem_file.preset(preset)
        elif problem_path is not None:
            pf = problem_file.load(problem_path)
        else:
            raise problem_file.ProblemFileError("give a problem file or --preset")
        pf = pf.with_overrides(n=n, eps_feas=eps_feas)
        result = plan(pf.to_spec(), eps_feas=pf.eps_feas)
    except (problem_file.ProblemFileError, InconsistentBoundsError, DegeneratePathError,
            ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR

    write_bundle(result, output_dir, pf.name)
    if emit_plots:
        emit_plot_data(result, output_dir)

    label = pf.name or "problem"
    if result.feasible:
        print(f"{label}: feasible, time {_fmt(result.total_time)} s, n={pf.n}, out={output_dir}")
        return EXIT_FEASIBLE
    first = next(v for v in result.violations if v.bound == "mu_minus")
    print(f"{label}: infeasible, {sum(v.bound == 'mu_minus' for v in result.violations)} "
          f"point(s) below the lower speed bound, first at s={_fmt(first.s)}, out={output_dir}")
    return EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mintime", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve a problem file or a bundled preset")
    p.add_argument("file", nargs="?", help="YAML problem file")
    p.add_argument("--out", default="plan_out", help="output directory (default: plan_out)")
    p.add_argument("--n", type=int, help="number of grid intervals")
    p.add_argument("--eps-feas", type=float, help="feasibility tolerance (m^2/s^2)")
    p.add_argument("--preset", choices=sorted(problem_file.PRESETS))
    p.add_argument("--emit-plots", action="store_true", help="also write per-figure tables")

    q = sub.add_parser("preset", help="print a bundled preset as a problem file")
    q.add_argument("name", choices=sorted(problem_file.PRESETS))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "preset":
        sys.stdout.write(problem_file.dumps(problem_file.preset(args.name)))
        return 0
    if args.file is not None and args.preset is not None:
        print("error: give either a file or --preset, not both", file=sys.stderr)
        return EXIT_ERROR
    return run(args.file, args.out, args.n, args.eps_feas, args.preset, args.emit_plots)


if __name__ == "__main__":
    sys.exit(main())
