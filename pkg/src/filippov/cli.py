"""Command-line front end.

Exit codes: 0 on success, 1 when a computation reports a degenerate or
not-applicable outcome (or a data file is invalid), 2 on usage errors.
Computation failures also emit one machine-readable line on stderr of
the form ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import time

import numpy as np

from . import __version__
from .core import boundary_data, load_system_spec
from .errors import FilippovError
from .hybrid import (
    DEFAULT_EVENT_CONFIG,
    EventConfig,
    HybridParams,
    LambdaResult,
    LambdaStatus,
    return_multiplier,
)
from .simulate import (
    SimConfig,
    export_orbit,
    simulate,
    simulate_hybrid,
)
from .spectrum import (
    companion_from_eigs,
    companion_orbit,
    crossing_indicator,
    decay_eigvectors,
    eig_gap_product,
)
from .stability import (
    Degenerate,
    Rotational,
    StableNode,
    UnstableEigenvalue,
    UnstableRightward,
    classify_equilibrium,
)
from .sweep import JOBS_ENV_VAR, render_grid, sweep

FIG_PANEL_A = (-1.2, -0.2, 0.2, 1.2)
FIG_PANEL_B = (0.5, 2.0, 5.0)


def _slug(exc: Exception) -> str:
    name = type(exc).__name__
    name = name.removesuffix("Error")
    return re.sub(r"(?<!^)(?=[A-Z])", "-", name).lower()


def _fail(exc: Exception) -> int:
    print(f"error: {_slug(exc)}: {exc}", file=sys.stderr)
    return 1


def _verdict_line(result: LambdaResult) -> str:
    if result.status is LambdaStatus.MARGINAL:
        return "marginal (multiplier at 1; no stability conclusion)"
    if result.status in (LambdaStatus.UNDEFINED_CONVERGED,):
        return "asymptotically stable"
    if result.status is LambdaStatus.UNDEFINED_DIVERGED:
        return "unstable"
    return ("asymptotically stable" if result.value < 1.0 else "unstable")


def _print_lambda(result: LambdaResult) -> None:
    print(f"status: {result.status.value}")
    if result.value is not None:
        print(f"lambda: {result.value!r}")
    if result.detail:
        print(f"detail: {result.detail}")
    print(f"verdict: {_verdict_line(result)}")


def _event_config(args) -> EventConfig:
    if getattr(args, "steps", None):
        return EventConfig(steps_per_rotation=args.steps)
    return DEFAULT_EVENT_CONFIG


def cmd_lambda(args) -> int:
    try:
        params = HybridParams(args.a, args.b, args.c, args.d)
        result = return_multiplier(params, _event_config(args))
    except FilippovError as exc:
        return _fail(exc)
    _print_lambda(result)
    return 0


def cmd_classify(args) -> int:
    try:
        spec = load_system_spec(args.system)
        bd = boundary_data(spec.system, spec.x_star)
    except (FilippovError, OSError) as exc:
        return _fail(exc)
    print(f"x_star: {list(bd.x_star)}")
    print(f"p: {bd.p.tolist()}")
    print(f"q: {bd.q.tolist()}")
    print(f"p.q: {bd.ptq!r}")
    print(f"det_phi: {bd.det_phi!r}")
    verdict = classify_equilibrium(bd)
    if isinstance(verdict, UnstableRightward):
        print("case: right field directed away from the surface")
        print("stability: unstable")
        return 0
    if isinstance(verdict, UnstableEigenvalue):
        print(f"case: positive eigenvalue {verdict.eigenvalue!r} of the "
              f"{verdict.matrix} Jacobian")
        print("stability: unstable")
        return 0
    if isinstance(verdict, StableNode):
        print(f"case: non-rotational, left eigenvalues {verdict.left_eigs}")
        print("stability: asymptotically stable")
        return 0
    if isinstance(verdict, Degenerate):
        print(f"case: degenerate ({verdict.reason})")
        print("stability: undecided")
        print(f"error: degenerate: {verdict.reason}", file=sys.stderr)
        return 1
    assert isinstance(verdict, Rotational)
    p = verdict.params
    print(f"case: rotational, alpha={verdict.alpha!r} beta={verdict.beta!r} "
          f"gamma={verdict.gamma!r}")
    print(f"hybrid params: a={p.a!r} b={p.b!r} c={p.c!r} d={p.d!r}")
    result = return_multiplier(p, _event_config(args))
    _print_lambda(result)
    return 0


def _parse_range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("range must look like LO:HI")
    try:
        return float(lo), float(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _jobs_from_env() -> int:
    raw = os.environ.get(JOBS_ENV_VAR, "1")
    try:
        return int(raw)
    except ValueError:
        return 1


def cmd_sweep(args) -> int:
    try:
        grid = sweep(args.a, args.b, args.c_range, args.d_range,
                     args.nc, args.nd, _event_config(args),
                     jobs=_jobs_from_env())
        render_grid(grid, args.out, args.format)
    except (FilippovError, OSError, ValueError) as exc:
        return _fail(exc)
    print(f"wrote {args.out}")
    return 0


def cmd_orbit(args) -> int:
    try:
        params = HybridParams(args.a, args.b, args.c, args.d)
        cfg = SimConfig(dt=args.dt, t_max=args.t_max)
        orbit = simulate_hybrid(params, args.z0, cfg)
        export_orbit(orbit, args.out)
    except (FilippovError, OSError, ValueError) as exc:
        return _fail(exc)
    print(f"wrote {args.out} (terminal: {orbit.terminal.value})")
    return 0


def cmd_orbit_system(args) -> int:
    try:
        x0 = [float(v) for v in args.x0.split(",")]
    except ValueError:
        print("error: usage: --x0 must be three comma-separated numbers",
              file=sys.stderr)
        return 2
    if len(x0) != 3:
        print("error: usage: --x0 must have exactly three components",
              file=sys.stderr)
        return 2
    try:
        spec = load_system_spec(args.system)
        cfg = SimConfig(dt=args.dt, t_max=args.t_max)
        orbit = simulate(spec.system, x0, cfg)
        export_orbit(orbit, args.out)
    except (FilippovError, OSError, ValueError) as exc:
        return _fail(exc)
    print(f"wrote {args.out} (terminal: {orbit.terminal.value})")
    return 0


def cmd_fig_c(args) -> int:
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    jobs = _jobs_from_env()
    cfg = _event_config(args)
    start = time.perf_counter()
    for a in FIG_PANEL_A:
        for b in FIG_PANEL_B:
            grid = sweep(a, b, args.c_range, args.d_range, args.nc, args.nd,
                         cfg, jobs=jobs)
            stem = os.path.join(out_dir, f"sweep_a{a:g}_b{b:g}")
            if args.format in ("csv", "both"):
                render_grid(grid, stem + ".csv", "csv")
            if args.format in ("pgm", "both"):
                render_grid(grid, stem + ".pgm", "pgm")
            print(f"panel a={a:g} b={b:g} done "
                  f"({time.perf_counter() - start:.1f}s elapsed)")
    return 0


def cmd_check_decay_orbits(args) -> int:
    rng = np.random.default_rng(args.seed)
    t_grid = np.logspace(-4, 2, 101)[1:]  # 100 points in (1e-4, 1e2]
    failures = 0
    for _ in range(args.trials):
        mags = 10.0 ** rng.uniform(-2.0, 2.0, size=3)
        lams = tuple(sorted(-mags))
        if not (lams[0] < lams[1] < lams[2] < 0.0):
            continue
        mat = companion_from_eigs(lams)
        vecs = decay_eigvectors(lams)
        for lam, vec in zip(lams, vecs):
            residual = np.linalg.norm(mat @ vec - lam * vec)
            scale = max(1.0, np.linalg.norm(mat) * np.linalg.norm(vec))
            if residual > 1e-8 * scale:
                failures += 1
        start = companion_orbit(lams, 0.0)
        if np.max(np.abs(start - np.array([0.0, 0.0, -1.0]))) > 1e-12:
            failures += 1
        if eig_gap_product(lams) <= 0.0:
            failures += 1
        # sign of the first orbit component, in the underflow-free form
        if np.any(crossing_indicator(lams, t_grid) >= 0.0):
            failures += 1
    if failures:
        print(f"FAIL: {failures} violations over {args.trials} trials")
        return 1
    print(f"PASS: decay orbits stay left of the switching plane "
          f"({args.trials} trials)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="filippov",
        description="Stability of boundary equilibria of three-dimensional "
                    "Filippov systems")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lambda", help="return multiplier of the hybrid "
                                      "system for parameters (a, b, c, d)")
    for name in "abcd":
        p.add_argument(f"--{name}", type=float, required=True)
    p.add_argument("--steps", type=int, default=0,
                   help="stepping resolution per rotation (default 256)")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("classify", help="full stability chain for a system "
                                        "file")
    p.add_argument("--system", required=True, help="system spec JSON file")
    p.add_argument("--steps", type=int, default=0)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="classify a (c, d) grid for fixed "
                                     "(a, b)")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c-range", type=_parse_range, required=True,
                   metavar="LO:HI")
    p.add_argument("--d-range", type=_parse_range, required=True,
                   metavar="LO:HI")
    p.add_argument("--nc", type=int, required=True)
    p.add_argument("--nd", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "pgm"), default="csv")
    p.add_argument("--steps", type=int, default=0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("orbit", help="export a hybrid-system orbit as CSV")
    for name in "abcd":
        p.add_argument(f"--{name}", type=float, required=True)
    p.add_argument("--z0", type=float, required=True,
                   help="start height on the return line (negative)")
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("orbit-system", help="simulate a system file and "
                                            "export the orbit as CSV")
    p.add_argument("--system", required=True)
    p.add_argument("--x0", required=True, metavar="X,Y,Z")
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_orbit_system)

    p = sub.add_parser("fig-c", help="sweep all twelve standard (a, b) "
                                     "panels")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--nc", type=int, default=200)
    p.add_argument("--nd", type=int, default=200)
    p.add_argument("--c-range", type=_parse_range, default=(-3.0, 3.0),
                   metavar="LO:HI")
    p.add_argument("--d-range", type=_parse_range, default=(0.0, 10.0),
                   metavar="LO:HI")
    p.add_argument("--format", choices=("csv", "pgm", "both"), default="both")
    p.add_argument("--steps", type=int, default=0)
    p.set_defaults(func=cmd_fig_c)

    p = sub.add_parser("check-appendix-b",
                       help="verify that closed-form decay orbits (three "
                            "distinct negative eigenvalues) never re-cross "
                            "the switching plane")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check_decay_orbits)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
