"""Command-line front end: verification suites and trajectory export.

Machine-readable output (JSON reports, CSV trajectories) goes to stdout or
the --out path and is byte-deterministic for fixed parameters; per-suite
progress lines go to stderr.  Exit codes: 0 all checks passed, 1 a
verification failed, 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import ConfigurationError, DomainError
from .invariants import invariant_generators
from .liealg import build_lie_algebra
from .rootsys import build_root_system
from .suites import SUITES, run_all, run_suite
from . import toda

CSV_ABORT_MARKER = "aborted"


def _format_complex(z: complex) -> str:
    return f"{z.real:.16e}{z.imag:+.16e}j"


def trajectory_csv_lines(traj, rank: int):
    """Fixed-header CSV rows; a trailing marker row flags an aborted flow."""
    header = (["t"] + [f"a_{k + 1}" for k in range(rank)]
              + [f"c_{k + 1}" for k in range(rank)]
              + [f"sigma_{k + 1}" for k in range(rank)])
    yield ",".join(header)
    for i in range(len(traj.times)):
        cells = [f"{traj.times[i]:.16e}"]
        cells += [_format_complex(z) for z in traj.a[i]]
        cells += [_format_complex(z) for z in traj.c[i]]
        cells += [_format_complex(z) for z in traj.sigmas[i]]
        yield ",".join(cells)
    if traj.aborted:
        yield ",".join([CSV_ABORT_MARKER] + [""] * (3 * rank))


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _reports_json(reports) -> str:
    payload = [rep.to_dict() for rep in reports]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_verify(args) -> int:
    if args.suite:
        reports = [run_suite(args.suite, args.type, args.rank, args.seed,
                             args.samples, args.tol)]
    else:
        reports = run_all(args.type, args.rank, args.seed)
    for rep in reports:
        status = "pass" if rep.passed else "FAIL"
        print(f"[{status}] {rep.suite_id:18s} {rep.duration:7.2f}s",
              file=sys.stderr)
    _emit(_reports_json(reports), args.out)
    if args.figures:
        from .figures import render_reports
        for path in render_reports(reports, args.figures):
            print(f"figure: {path}", file=sys.stderr)
    return 0 if all(rep.passed for rep in reports) else 1


def cmd_trajectory(args) -> int:
    rs = build_root_system(args.type, args.rank)
    L = build_lie_algebra(rs)
    fam = invariant_generators(L)
    if not (1 <= args.hamiltonian <= L.rank):
        raise ConfigurationError(
            f"hamiltonian index must be in 1..{L.rank}, got {args.hamiltonian}")
    rng = np.random.default_rng(args.seed)
    v0 = toda.random_point(L, rng)
    traj = toda.flow(fam, args.hamiltonian - 1, v0, args.t_end, args.steps)
    text = "\n".join(trajectory_csv_lines(traj, L.rank)) + "\n"
    _emit(text, args.out)
    if traj.aborted:
        print(f"flow aborted at t={traj.times[-1]:.6g}; partial trajectory "
              "written", file=sys.stderr)
    if args.figures:
        from .figures import render_trajectory
        for path in render_trajectory(traj, args.figures):
            print(f"figure: {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="todahess",
        description="Verification suites and flows for the Toda lattice, "
                    "slice embeddings, and the stratified Hessenberg family.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--type", default="A", help="Cartan series (default A)")
        p.add_argument("--rank", type=int, default=2, help="rank (default 2)")
        p.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--figures", default=None, metavar="DIR",
                       help="also render PNG figures into DIR")

    pv = sub.add_parser("verify", help="run verification suites")
    common(pv)
    pv.add_argument("--suite", choices=sorted(SUITES), default=None,
                    help="single suite id (default: all suites)")
    pv.add_argument("--samples", type=int, default=None,
                    help="override the suite sample count")
    pv.add_argument("--tol", type=float, default=None,
                    help="override the suite tolerance")
    pv.set_defaults(func=cmd_verify)

    pt = sub.add_parser("trajectory", help="integrate a Toda flow and emit CSV")
    common(pt)
    pt.add_argument("--hamiltonian", type=int, default=1,
                    help="which sigma_i to flow (1-based, default 1)")
    pt.add_argument("--t-end", type=float, default=1.0, dest="t_end")
    pt.add_argument("--steps", type=int, default=1000)
    pt.set_defaults(func=cmd_trajectory)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
