"""Command-line harness: mesh generation, solves, stability checks, studies.

Exit codes: 0 on success, 2 when any sweep cell fails to solve, 3 on
configuration errors (bad flags, malformed JSON, unknown names).
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    STUDIES,
    mesh_family,
    problem_family,
    report_emit,
    run_study,
    study_from_dict,
)
from .meshes import (
    LayerSpec,
    Mesh1D,
    bakhvalov_original,
    bakhvalov_shishkin,
    bakhvalov_type,
    diagnostics,
    duran_lombardi,
    gartland,
    lambert_mesh,
    shishkin,
    system_shishkin,
    uniform_mesh,
)
from .problems import (
    BUILTIN_PROBLEMS,
    SystemProblem,
    problem_from_dict,
    report_to_dict,
    stability_report,
)
from .schemes import SCHEME_TAGS, discrete_solve

MESH_FAMILIES_CLI = (
    "uniform",
    "shishkin",
    "bakhvalov-shishkin",
    "bakhvalov-type",
    "bakhvalov",
    "gartland",
    "duran-lombardi",
    "lambert",
    "system-shishkin",
)
SOLVE_MESHES = (
    "uniform",
    "shishkin",
    "bakhvalov-shishkin",
    "bakhvalov-type",
    "system-shishkin",
)


class ConfigError(Exception):
    """User-facing configuration problem; maps to exit code 3."""


def _parse_eps(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"cannot parse eps list {text!r}") from exc
    if not vals or any(e <= 0.0 for e in vals):
        raise ConfigError(f"eps values must be positive, got {text!r}")
    return vals


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_problem(args) -> SystemProblem:
    name = args.problem
    if name.endswith(".json"):
        try:
            with open(name, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read problem file {name}: {exc}") from exc
        try:
            return problem_from_dict(data)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if name not in BUILTIN_PROBLEMS:
        raise ConfigError(
            f"unknown problem {name!r}; builtins: {', '.join(sorted(BUILTIN_PROBLEMS))}"
        )
    try:
        if args.eps is None:
            return BUILTIN_PROBLEMS[name]()[0]
        return problem_family(name)(_parse_eps(args.eps))[0]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _build_mesh(args) -> Mesh1D:
    eps = _parse_eps(args.eps)
    if args.family == "uniform":
        return uniform_mesh(args.n)
    if args.family == "system-shishkin":
        return system_shishkin(
            eps, args.n, sigma=args.mu, beta=args.gamma, both_sides=args.side == "both"
        )
    spec = LayerSpec(eps=eps[0], gamma=args.gamma, mu=args.mu, side=args.side)
    if args.family == "shishkin":
        return shishkin(spec, args.n)
    if args.family == "bakhvalov-shishkin":
        return bakhvalov_shishkin(spec, args.n)
    if args.family == "bakhvalov-type":
        return bakhvalov_type(spec, args.n)
    if args.family == "bakhvalov":
        return bakhvalov_original(spec, args.n, q=args.q)
    if args.family == "lambert":
        return lambert_mesh(spec, args.n)
    if args.family == "gartland":
        if args.h is None:
            raise ConfigError("gartland meshes take --h, not --n")
        return gartland(spec, args.h)
    if args.family == "duran-lombardi":
        if args.h is None:
            raise ConfigError("duran-lombardi meshes take --h, not --n")
        return duran_lombardi(spec, args.h, kappa=args.kappa)
    raise ConfigError(f"unknown mesh family {args.family!r}")


def _cmd_mesh(args) -> int:
    mesh = _build_mesh(args)
    d = diagnostics(mesh)
    lines = ["i,x_i,h_i"]
    lines.append(f"0,{mesh.points[0]:.12e},")
    for i in range(1, len(mesh.points)):
        h = mesh.points[i] - mesh.points[i - 1]
        lines.append(f"{i},{mesh.points[i]:.12e},{h:.12e}")
    lines += [
        f"# label = {mesh.label}",
        f"# n_cells = {d.n_cells}",
        f"# min_h = {d.min_h:.12e}",
        f"# max_h = {d.max_h:.12e}",
        f"# ratio = {d.ratio:.12e}",
    ]
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_solve(args) -> int:
    problem = _load_problem(args)
    try:
        mesh = mesh_family(args.mesh)(problem, args.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        sol = discrete_solve(problem, mesh, args.scheme)
    except (ValueError, RuntimeError) as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        return 2
    header = "x," + ",".join(f"u_{k + 1}" for k in range(problem.m))
    lines = [header]
    for i, x in enumerate(mesh.points):
        vals = ",".join(f"{v:.12e}" for v in sol.values[i])
        lines.append(f"{x:.12e},{vals}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_check(args) -> int:
    problem = _load_problem(args)
    report = stability_report(problem)
    _write(
        json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n", args.out
    )
    return 0


def _cmd_study(args) -> int:
    if (args.config is None) == (args.name is None):
        raise ConfigError("study takes exactly one of --config or --name")
    output = args.output
    fmt = args.format
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read study config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("study config must be a JSON object")
        try:
            cfg = study_from_dict(data)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        output = output or data.get("output")
        fmt = fmt or data.get("format")
    else:
        if args.name not in STUDIES:
            raise ConfigError(
                f"unknown study {args.name!r}; known: {', '.join(sorted(STUDIES))}"
            )
        cfg = STUDIES[args.name]
    fmt = fmt or "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    try:
        report = run_study(cfg, workers=args.workers)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _write(report_emit(report, fmt), output)
    if report.failures:
        for rec in report.failures:
            print(f"cell N={rec.n} eps={rec.eps} failed: {rec.failure}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spbvp",
        description="Layer-adapted meshes and robust discretizations for "
        "singularly perturbed two-point boundary value problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mesh_p = sub.add_parser("mesh", help="generate a mesh as CSV i,x_i,h_i")
    mesh_p.add_argument("--family", choices=MESH_FAMILIES_CLI, default="shishkin")
    mesh_p.add_argument("--eps", default="1e-6", help="eps, or comma list for systems")
    mesh_p.add_argument("--n", type=int, default=64, help="cell count")
    mesh_p.add_argument("--gamma", type=float, default=1.0, help="layer decay rate")
    mesh_p.add_argument("--mu", type=float, default=2.0, help="resolved-width order")
    mesh_p.add_argument("--side", choices=("left", "right", "both"), default="left")
    mesh_p.add_argument("--h", type=float, default=None, help="step parameter H")
    mesh_p.add_argument("--kappa", type=float, default=1.0, help="grading constant")
    mesh_p.add_argument("--q", type=float, default=0.5, help="mesh fraction in layer")
    mesh_p.add_argument("--out", default=None, help="output file (default stdout)")
    mesh_p.set_defaults(func=_cmd_mesh)

    solve_p = sub.add_parser("solve", help="solve a problem, emit CSV x,u_1..u_M")
    solve_p.add_argument(
        "--problem",
        default="scalar-cd",
        help="builtin name or a .json problem file",
    )
    solve_p.add_argument("--eps", default=None, help="override builtin eps (comma list)")
    solve_p.add_argument("--mesh", choices=SOLVE_MESHES, default="shishkin")
    solve_p.add_argument("--n", type=int, default=64)
    solve_p.add_argument("--scheme", choices=SCHEME_TAGS, default="simple-upwind")
    solve_p.add_argument("--out", default=None)
    solve_p.set_defaults(func=_cmd_solve)

    check_p = sub.add_parser("check", help="stability pre-checks as JSON")
    check_p.add_argument("--problem", default="reaction-diffusion")
    check_p.add_argument("--eps", default=None)
    check_p.add_argument("--out", default=None)
    check_p.set_defaults(func=_cmd_check)

    study_p = sub.add_parser("study", help="run a convergence study")
    study_p.add_argument("--config", default=None, help="JSON study configuration")
    study_p.add_argument("--name", default=None, help="registered study name")
    study_p.add_argument("--output", default=None, help="report file (default stdout)")
    study_p.add_argument("--format", choices=("csv", "json"), default=None)
    study_p.add_argument(
        "--workers", type=int, default=None, help="overrides SPBVP_WORKERS"
    )
    study_p.add_argument(
        "--list", action="store_true", help="list registered studies and exit"
    )
    study_p.set_defaults(func=_cmd_study)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "list", False):
        sys.stdout.write("\n".join(sorted(STUDIES)) + "\n")
        return 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        # invalid parameter combinations surfaced by the library
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
