"""Problem definitions for singularly perturbed two-point BVPs.

A SystemProblem bundles the data of

    -diag(d_1..d_M) u'' + B(x) u' + A(x) u = f(x),  u(0)=g0, u(1)=g1

where d_i = eps_i for the convection-diffusion kinds and d_i = eps_i**2 for
reaction-diffusion.  Alongside the containers live the algebraic stability
pre-checks (inverse-monotonicity of comparison matrices built from coefficient
norms), layer envelopes with fитted-constant checks, and the built-in
reference problems used by the convergence harness.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .linalg import SingularMatrixError, dense_inverse, jacobi_eigh

__all__ = [
    "Coefficient",
    "SystemProblem",
    "StabilityReport",
    "ReferenceSolution",
    "LayerEnvelope",
    "coefficient",
    "check_gamma",
    "check_upsilon",
    "stability_report",
    "report_to_dict",
    "default_envelope",
    "envelope_check",
    "builtin_scalar_cd",
    "builtin_strongly_coupled_example",
    "builtin_reaction_diffusion_system",
    "builtin_weakly_coupled_cd",
    "BUILTIN_PROBLEMS",
]

KINDS = ("weakly-coupled-cd", "strongly-coupled-cd", "reaction-diffusion")

_SAMPLE_POINTS = 10_000  # sup norms / minima of coefficients are sampled here


@dataclass(frozen=True)
class Coefficient:
    """Matrix or vector coefficient: an evaluator plus the exact array when
    the coefficient does not depend on x."""

    shape: tuple[int, ...]
    constant: np.ndarray | None = None
    fn: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self) -> None:
        if (self.constant is None) == (self.fn is None):
            raise ValueError("provide exactly one of constant array or callable")
        if self.constant is not None and self.constant.shape != self.shape:
            raise ValueError(f"constant shape {self.constant.shape} != {self.shape}")

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.constant is not None:
            out = np.empty(x.shape + self.shape)
            out[...] = self.constant
            return out
        out = np.asarray(self.fn(x), dtype=float)
        if out.shape != x.shape + self.shape:
            raise ValueError(
                f"coefficient returned shape {out.shape}, expected {x.shape + self.shape}"
            )
        return out


def coefficient(value, shape: tuple[int, ...]) -> Coefficient:
    """Wrap an array (constant) or callable into a Coefficient."""
    if callable(value):
        return Coefficient(shape=shape, fn=value)
    arr = np.asarray(value, dtype=float)
    if arr.shape == () and shape:
        arr = np.full(shape, float(arr))
    if arr.shape != shape:
        raise ValueError(f"cannot shape {arr.shape} constant into {shape}")
    return Coefficient(shape=shape, constant=arr.copy())


@dataclass(frozen=True)
class SystemProblem:
    """Immutable description of a (possibly coupled) two-point BVP."""

    m: int
    eps: tuple[float, ...]
    kind: str
    a: Coefficient
    f: Coefficient
    b: Coefficient | None = None
    g0: np.ndarray = field(default_factory=lambda: np.zeros(0))
    g1: np.ndarray = field(default_factory=lambda: np.zeros(0))
    label: str = "problem"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.m < 1:
            raise ValueError(f"need m >= 1, got {self.m}")
        if len(self.eps) != self.m or any(e <= 0.0 for e in self.eps):
            raise ValueError(f"eps must be {self.m} positive values, got {self.eps}")
        mm = (self.m, self.m)
        if self.a.shape != mm:
            raise ValueError(f"reaction coefficient must have shape {mm}")
        if self.f.shape != (self.m,):
            raise ValueError(f"source must have shape ({self.m},)")
        if self.kind == "reaction-diffusion":
            if self.b is not None:
                raise ValueError("reaction-diffusion problems carry no convection term")
        else:
            if self.b is None:
                raise ValueError(f"{self.kind} requires a convection coefficient")
            if self.b.shape != mm:
                raise ValueError(f"convection coefficient must have shape {mm}")
            if self.kind == "weakly-coupled-cd":
                self._require_diagonal_b()
        for name in ("g0", "g1"):
            g = getattr(self, name)
            if g.shape == (0,):
                object.__setattr__(self, name, np.zeros(self.m))
            elif g.shape != (self.m,):
                raise ValueError(f"{name} must have shape ({self.m},)")

    def _require_diagonal_b(self) -> None:
        if self.b.is_constant:
            vals = self.b.constant[None, :, :]
        else:
            vals = self.b(np.linspace(0.0, 1.0, 257))
        off = vals.copy()
        idx = np.arange(self.m)
        off[:, idx, idx] = 0.0
        if np.any(off != 0.0):
            raise ValueError("weakly-coupled systems must have diagonal convection")

    @property
    def diffusion(self) -> np.ndarray:
        """Coefficients of -u_i'' as used in the operator."""
        e = np.asarray(self.eps)
        return e * e if self.kind == "reaction-diffusion" else e


# ---------------------------------------------------------------------------
# stability pre-checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilityReport:
    """Comparison-matrix verdicts; sections are None when not computed."""

    gamma_matrix: np.ndarray | None = None
    gamma_inverse_min: float | None = None
    gamma_monotone: bool | None = None
    zeta: float | None = None
    diag_dominant: bool | None = None
    kappa: float | None = None
    upsilon_matrix: np.ndarray | None = None
    upsilon_inverse_min: float | None = None
    upsilon_row_sum_min: float | None = None
    upsilon_monotone: bool | None = None
    upsilon_heuristic: bool | None = None
    notes: tuple[str, ...] = ()


def _grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, _SAMPLE_POINTS)


def check_gamma(problem: SystemProblem) -> StabilityReport:
    """Inverse-monotonicity check of the reaction comparison matrix.

    The matrix has unit diagonal and off-diagonal entries
    -sup_x |a_ij(x)/a_ii(x)|; the verdict holds when its inverse is
    entrywise >= -1e-12.  Also reports the coupling strength zeta (row sums
    of |a_ij|/a_ii off the diagonal) and, for reaction-diffusion problems,
    the decay rate kappa with kappa^2 = (1-zeta)*min_i min_x a_ii.
    """
    x = _grid()
    a_vals = problem.a(x)
    m = problem.m
    idx = np.arange(m)
    diag = a_vals[:, idx, idx]
    diag_min = diag.min(axis=0)
    if np.any(diag_min <= 0.0):
        bad = int(np.argmax(diag_min <= 0.0))
        raise ValueError(
            f"reaction diagonal a[{bad},{bad}] is not positive everywhere "
            f"(min {diag_min[bad]:.3e}); the comparison-matrix check needs "
            "positive diagonals"
        )
    ratios = np.abs(a_vals) / diag[:, :, None]  # same-point ratio, rows scaled
    sup = ratios.max(axis=0)
    gamma = -sup
    gamma[idx, idx] = 1.0
    notes: list[str] = []
    try:
        inv = dense_inverse(gamma)
        inv_min = float(inv.min())
        monotone = inv_min >= -1e-12
    except SingularMatrixError:
        inv_min = -math.inf
        monotone = False
        notes.append("comparison matrix is singular")
    off = sup.copy()
    off[idx, idx] = 0.0
    zeta = float(off.sum(axis=1).max())
    kappa = None
    if problem.kind == "reaction-diffusion":
        kappa = math.sqrt(max(0.0, 1.0 - zeta) * float(diag_min.min()))
    return StabilityReport(
        gamma_matrix=gamma,
        gamma_inverse_min=inv_min,
        gamma_monotone=monotone,
        zeta=zeta,
        diag_dominant=zeta < 1.0,
        kappa=kappa,
        notes=tuple(notes),
    )


def check_upsilon(
    problem: SystemProblem, c: np.ndarray | None = None
) -> StabilityReport:
    """Comparison check for convection-coupled systems.

    Off-diagonal entries are -C_i*(L1 norm of b_ij' + a_ij plus sup norm of
    b_ij).  The constants C_i are not constructive; with the default C_i = 1
    the verdict is heuristic (valid when min|b_ii| >= 1) and flagged as such.
    The verdict requires positive row sums, which makes it imply strict
    diagonal dominance of the convection matrix under that normalization.
    """
    if problem.kind != "strongly-coupled-cd":
        raise ValueError(f"upsilon check applies to strongly-coupled-cd, got {problem.kind}")
    heuristic = c is None
    cs = np.ones(problem.m) if c is None else np.asarray(c, dtype=float)
    if cs.shape != (problem.m,) or np.any(cs <= 0.0):
        raise ValueError(f"need {problem.m} positive constants, got {c!r}")
    x = _grid()
    b_vals = problem.b(x)
    a_vals = problem.a(x)
    if problem.b.is_constant:
        b_prime = np.zeros_like(b_vals)
    else:
        b_prime = np.gradient(b_vals, x, axis=0)
    m = problem.m
    idx = np.arange(m)
    l1 = np.trapezoid(np.abs(b_prime + a_vals), x, axis=0)
    sup_b = np.abs(b_vals).max(axis=0)
    upsilon = -cs[:, None] * (l1 + sup_b)
    upsilon[idx, idx] = 1.0
    notes: list[str] = []
    try:
        inv = dense_inverse(upsilon)
        inv_min = float(inv.min())
    except SingularMatrixError:
        inv_min = -math.inf
        notes.append("comparison matrix is singular")
    row_min = float(upsilon.sum(axis=1).min())
    monotone = inv_min >= -1e-12 and row_min > 0.0
    if heuristic:
        notes.append("constants defaulted to 1; verdict is heuristic")
    return StabilityReport(
        upsilon_matrix=upsilon,
        upsilon_inverse_min=inv_min,
        upsilon_row_sum_min=row_min,
        upsilon_monotone=monotone,
        upsilon_heuristic=heuristic,
        notes=tuple(notes),
    )


def stability_report(
    problem: SystemProblem, c: np.ndarray | None = None
) -> StabilityReport:
    """Run every check applicable to the problem kind.

    A failed precondition (e.g. a reaction diagonal that is not positive,
    common for purely convective coupling) skips that section with a note
    instead of raising.
    """
    try:
        report = check_gamma(problem)
    except ValueError as exc:
        report = StabilityReport(notes=(f"reaction check skipped: {exc}",))
    if problem.kind == "strongly-coupled-cd":
        ups = check_upsilon(problem, c)
        report = replace(
            report,
            upsilon_matrix=ups.upsilon_matrix,
            upsilon_inverse_min=ups.upsilon_inverse_min,
            upsilon_row_sum_min=ups.upsilon_row_sum_min,
            upsilon_monotone=ups.upsilon_monotone,
            upsilon_heuristic=ups.upsilon_heuristic,
            notes=report.notes + ups.notes,
        )
    return report


def report_to_dict(report: StabilityReport) -> dict:
    """JSON-ready view of a StabilityReport."""
    out: dict = {}
    for key in (
        "gamma_inverse_min",
        "gamma_monotone",
        "zeta",
        "diag_dominant",
        "kappa",
        "upsilon_inverse_min",
        "upsilon_row_sum_min",
        "upsilon_monotone",
        "upsilon_heuristic",
    ):
        val = getattr(report, key)
        if val is not None:
            out[key] = val
    for key in ("gamma_matrix", "upsilon_matrix"):
        val = getattr(report, key)
        if val is not None:
            out[key] = [[float(v) for v in row] for row in val]
    if report.notes:
        out["notes"] = list(report.notes)
    return out


# ---------------------------------------------------------------------------
# reference solutions and layer envelopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReferenceSolution:
    """Evaluator for the solution a discrete method is compared against.

    kind "exact" carries analytic derivatives; "asymptotic" states its
    defect; "oracle" records the fine-mesh recipe that generated it and
    interpolates piecewise-linearly between the oracle nodes.
    """

    kind: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    label: str = "reference"
    derivative_fn: Callable[[np.ndarray, int], np.ndarray] | None = None
    defect: str | None = None
    n_ref: int | None = None
    mesh_label: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("exact", "asymptotic", "oracle"):
            raise ValueError(f"unknown reference kind {self.kind!r}")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.evaluator(np.atleast_1d(np.asarray(x, dtype=float)))

    def derivative(self, x: np.ndarray, order: int = 1) -> np.ndarray:
        if self.derivative_fn is None:
            raise ValueError(f"{self.label}: no analytic derivative available")
        if order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {order}")
        return self.derivative_fn(np.atleast_1d(np.asarray(x, dtype=float)), order)


@dataclass(frozen=True)
class LayerEnvelope:
    """Per-component bound shape 1 + eps^{-k} * (exponentials at the layer
    sides); evaluable for derivative orders k in {0, 1, 2}."""

    eps: tuple[float, ...]
    rates: tuple[float, ...]
    sides: tuple[str, ...]

    def __post_init__(self) -> None:
        if not len(self.eps) == len(self.rates) == len(self.sides):
            raise ValueError("eps, rates, sides must have equal length")
        if any(e <= 0.0 for e in self.eps) or any(r <= 0.0 for r in self.rates):
            raise ValueError("eps and rates must be positive")
        if any(s not in ("left", "right", "both") for s in self.sides):
            raise ValueError(f"sides must be left/right/both, got {self.sides}")

    @property
    def m(self) -> int:
        return len(self.eps)

    def component(self, i: int, x: np.ndarray, k: int = 0) -> np.ndarray:
        if k not in (0, 1, 2):
            raise ValueError(f"derivative order must be 0, 1 or 2, got {k}")
        x = np.asarray(x, dtype=float)
        e, r, side = self.eps[i], self.rates[i], self.sides[i]
        amp = e ** (-k)
        out = np.ones_like(x)
        if side in ("left", "both"):
            out = out + amp * np.exp(-r * x / e)
        if side in ("right", "both"):
            out = out + amp * np.exp(-r * (1.0 - x) / e)
        return out

    def evaluate(self, x: np.ndarray, k: int = 0) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.stack([self.component(i, x, k) for i in range(self.m)], axis=1)


def default_envelope(problem: SystemProblem) -> LayerEnvelope:
    """Envelope with the decay rates implied by the problem coefficients."""
    x = np.linspace(0.0, 1.0, 257)
    if problem.kind == "reaction-diffusion":
        kappa = check_gamma(problem).kappa
        return LayerEnvelope(
            eps=problem.eps, rates=(kappa,) * problem.m, sides=("both",) * problem.m
        )
    b_vals = problem.b(x)
    if problem.kind == "weakly-coupled-cd":
        rates, sides = [], []
        for i in range(problem.m):
            bi = b_vals[:, i, i]
            if np.all(bi > 0.0):
                sides.append("right")
            elif np.all(bi < 0.0):
                sides.append("left")
            else:
                raise ValueError(f"component {i}: convection changes sign; no single layer side")
            rates.append(float(np.min(np.abs(bi))))
        return LayerEnvelope(eps=problem.eps, rates=tuple(rates), sides=tuple(sides))
    if not problem.b.is_constant:
        raise ValueError("default envelope for strong coupling needs constant convection")
    lam = jacobi_eigh(problem.b.constant).values
    if np.any(np.abs(lam) < 1e-14):
        raise ValueError("convection matrix has a zero eigenvalue; no exponential layers")
    rate = float(np.min(np.abs(lam)))
    return LayerEnvelope(
        eps=problem.eps, rates=(rate,) * problem.m, sides=("both",) * problem.m
    )


def _layer_sample_grid(eps: float, rate: float, side: str) -> np.ndarray:
    pieces = [np.linspace(0.0, 1.0, 2001)]
    step = eps / 50.0
    # past 24*eps/rate the exponential sits below the roundoff floor of a
    # second difference quotient with step eps/50, so wider sampling would
    # only fit noise; the ratio being checked peaks at the boundary anyway
    extent = min(0.45, 24.0 * eps / rate)
    fine = np.arange(0.0, extent, step)
    if side in ("left", "both"):
        pieces.append(fine)
    if side in ("right", "both"):
        pieces.append(1.0 - fine)
    grid = np.unique(np.concatenate(pieces))
    # coarse and mirrored fine nodes can land 1 ulp apart; such gaps wreck
    # iterated difference quotients, so merge anything closer than 1e-13
    keep = np.empty(len(grid), dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(grid) > 1e-13
    return grid[keep]


def envelope_check(ref: ReferenceSolution, env: LayerEnvelope, k: int = 0) -> float:
    """Fit the smallest C with |u_i^{(k)}| <= C * envelope_i pointwise.

    Derivatives are taken by central differences on a grid with step
    eps/50 inside the layer regions, so the fitted constant is meaningful
    for k <= 2.  Boundedness of C across an eps sweep is the testable form
    of a derivative bound.
    """
    if k not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {k}")
    worst = 0.0
    for i in range(env.m):
        grid = _layer_sample_grid(env.eps[i], env.rates[i], env.sides[i])
        vals = ref(grid)[:, i]
        for _ in range(k):
            vals = np.gradient(vals, grid)
        bound = env.component(i, grid, k)
        if k:
            # a k-th difference quotient samples the derivative somewhere in
            # its +-k stencil, so compare against the envelope max over that
            # window; otherwise the node where coarse and layer-fine grid
            # regions meet reports a smeared quotient against a decayed bound
            widened = bound.copy()
            for s in range(1, k + 1):
                np.maximum(widened[:-s], bound[s:], out=widened[:-s])
                np.maximum(widened[s:], bound[:-s], out=widened[s:])
            bound = widened
        worst = max(worst, float(np.max(np.abs(vals) / bound)))
    return worst


# ---------------------------------------------------------------------------
# built-in problems
# ---------------------------------------------------------------------------


def builtin_scalar_cd(eps: float = 1e-6) -> tuple[SystemProblem, ReferenceSolution]:
    """-eps*u'' + u' = 1 with u(0)=u(1)=0: the scalar calibration problem.

    Exact solution u(x) = x - (e^{-(1-x)/eps} - e^{-1/eps})/(1 - e^{-1/eps})
    with a layer at x = 1.  The evaluator is residual-checked at 10^3 points
    before being handed out (relative to the local size of the operator
    terms, since u'' ~ eps^{-2} makes an absolute residual meaningless).
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    den = -math.expm1(-1.0 / eps)  # 1 - e^{-1/eps}, safe for all eps
    tail = math.exp(-1.0 / eps)

    def u(x: np.ndarray) -> np.ndarray:
        w = np.exp(-(1.0 - x) / eps)
        return (x - (w - tail) / den)[:, None]

    def du(x: np.ndarray, order: int) -> np.ndarray:
        w = np.exp(-(1.0 - x) / eps)
        if order == 1:
            return (1.0 - w / (eps * den))[:, None]
        return (-w / (eps * eps * den))[:, None]

    xs = np.linspace(0.0, 1.0, 1000)
    up = du(xs, 1)[:, 0]
    upp = du(xs, 2)[:, 0]
    resid = -eps * upp + up - 1.0
    scale = 1.0 + np.abs(up) + eps * np.abs(upp)
    worst = float(np.max(np.abs(resid) / scale))
    if worst > 1e-10:
        raise RuntimeError(f"exact-solution self-check failed: residual {worst:.3e}")

    problem = SystemProblem(
        m=1,
        eps=(eps,),
        kind="weakly-coupled-cd",
        b=coefficient(np.array([[1.0]]), (1, 1)),
        a=coefficient(np.zeros((1, 1)), (1, 1)),
        f=coefficient(np.ones(1), (1,)),
        label=f"scalar-cd(eps={eps:g})",
    )
    ref = ReferenceSolution(
        kind="exact", evaluator=u, derivative_fn=du, label=problem.label
    )
    return problem, ref


def builtin_strongly_coupled_example(
    eps: float = 1e-6,
) -> tuple[SystemProblem, ReferenceSolution]:
    """2x2 system coupled through the convection matrix [[-3,-4],[-4,3]].

    Sources are (1, 2) with homogeneous boundary data.  The reference is the
    asymptotic solution with smooth parts 8/25 - 11x/25 and 4/25 + 2x/25 and
    exponential layers of rate 5 (the convection eigenvalues are -5 and 5) at
    both ends.  Because the smooth part is linear and the layer profiles are
    exact homogeneous solutions, the interior residual is identically zero;
    the only defect is an O(exp(-5/eps)) boundary mismatch, which is below
    roundoff for eps < 0.05.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps!r}")

    def parts(x: np.ndarray):
        e0 = np.exp(-5.0 * x / eps)
        e1 = np.exp(-5.0 * (1.0 - x) / eps)
        return e0, e1

    def u(x: np.ndarray) -> np.ndarray:
        e0, e1 = parts(x)
        u1 = 8.0 / 25 - 11.0 / 25 * x - 8.0 / 25 * e0 + 3.0 / 25 * e1
        u2 = 4.0 / 25 + 2.0 / 25 * x - 4.0 / 25 * e0 - 6.0 / 25 * e1
        return np.stack([u1, u2], axis=1)

    def du(x: np.ndarray, order: int) -> np.ndarray:
        e0, e1 = parts(x)
        r = 5.0 / eps
        if order == 1:
            u1 = -11.0 / 25 + 8.0 / 25 * r * e0 + 3.0 / 25 * r * e1
            u2 = 2.0 / 25 + 4.0 / 25 * r * e0 - 6.0 / 25 * r * e1
        else:
            u1 = -8.0 / 25 * r * r * e0 + 3.0 / 25 * r * r * e1
            u2 = -4.0 / 25 * r * r * e0 - 6.0 / 25 * r * r * e1
        return np.stack([u1, u2], axis=1)

    problem = SystemProblem(
        m=2,
        eps=(eps, eps),
        kind="strongly-coupled-cd",
        b=coefficient(np.array([[-3.0, -4.0], [-4.0, 3.0]]), (2, 2)),
        a=coefficient(np.zeros((2, 2)), (2, 2)),
        f=coefficient(np.array([1.0, 2.0]), (2,)),
        label=f"strongly-coupled-2x2(eps={eps:g})",
    )
    ref = ReferenceSolution(
        kind="asymptotic",
        evaluator=u,
        derivative_fn=du,
        defect="O(exp(-5/eps)) boundary mismatch; zero interior residual",
        label=problem.label,
    )
    return problem, ref


def _default_coupling(m: int) -> tuple[Coefficient, Coefficient]:
    a = np.full((m, m), -1.0 / (2.0 * m))
    np.fill_diagonal(a, 2.0)
    return coefficient(a, (m, m)), coefficient(np.ones(m), (m,))


def _lazy_oracle(problem: SystemProblem, n_ref: int, scheme: str, mesh_factory):
    """Fine-mesh solve, materialized on first evaluation and cached."""
    lock = threading.Lock()
    cache: dict = {}

    def ensure():
        with lock:
            if "x" not in cache:
                from .schemes import discrete_solve

                mesh = mesh_factory(n_ref)
                cache["x"] = mesh.points
                cache["u"] = discrete_solve(problem, mesh, scheme).values
        return cache["x"], cache["u"]

    def evaluator(x: np.ndarray) -> np.ndarray:
        nodes, vals = ensure()
        return np.stack(
            [np.interp(x, nodes, vals[:, i]) for i in range(problem.m)], axis=1
        )

    return evaluator


def problem_from_dict(data: dict) -> SystemProblem:
    """Constant-coefficient SystemProblem from a JSON-style dict.

    Expected keys: m, eps (list), kind, a (m x m), f (length m); optional
    b (m x m or null), g0, g1, label.  Function coefficients are not
    representable in JSON and must be built through the API instead.
    """
    try:
        m = int(data["m"])
        eps = tuple(float(e) for e in data["eps"])
        kind = str(data["kind"])
        a = coefficient(np.asarray(data["a"], dtype=float), (m, m))
        f = coefficient(np.asarray(data["f"], dtype=float), (m,))
    except KeyError as exc:
        raise ValueError(f"problem dict missing key {exc.args[0]!r}") from exc
    b_raw = data.get("b")
    b = (
        coefficient(np.asarray(b_raw, dtype=float), (m, m))
        if b_raw is not None
        else None
    )
    g0 = np.asarray(data.get("g0", np.zeros(m)), dtype=float)
    g1 = np.asarray(data.get("g1", np.zeros(m)), dtype=float)
    return SystemProblem(
        m=m,
        eps=eps,
        kind=kind,
        a=a,
        f=f,
        b=b,
        g0=g0,
        g1=g1,
        label=str(data.get("label", "json-problem")),
    )


def oracle_reference(
    problem: SystemProblem,
    n_ref: int,
    scheme: str,
    mesh_factory,
    mesh_label: str | None = None,
) -> ReferenceSolution:
    """Fine-mesh oracle from an explicit recipe (lazy, cached, thread-safe).

    mesh_factory maps a cell count to the mesh the oracle is solved on.
    """
    if n_ref < 2:
        raise ValueError(f"n_ref must be at least 2, got {n_ref}")
    return ReferenceSolution(
        kind="oracle",
        evaluator=_lazy_oracle(problem, n_ref, scheme, mesh_factory),
        n_ref=n_ref,
        mesh_label=mesh_label,
        label=problem.label,
    )


def builtin_reaction_diffusion_system(
    m: int = 2,
    eps: tuple[float, ...] = (1e-6, 1e-3),
    n_ref: int = 12288,
) -> tuple[SystemProblem, ReferenceSolution]:
    """Coupled reaction-diffusion system -eps_i^2 u_i'' + (A u)_i = 1.

    A has diagonal 2 and off-diagonal -1/(2m), which keeps the comparison
    matrix inverse-monotone for every m.  The reference is a fine-mesh
    oracle: central scheme on a multi-scale piecewise-uniform mesh refined
    toward both endpoints, solved lazily at n_ref cells.
    """
    if len(eps) != m:
        raise ValueError(f"need {m} eps values, got {len(eps)}")
    a, f = _default_coupling(m)
    eps_sorted = tuple(sorted(float(e) for e in eps))
    problem = SystemProblem(
        m=m,
        eps=eps_sorted,
        kind="reaction-diffusion",
        a=a,
        f=f,
        label=f"reaction-diffusion(m={m},eps={','.join(f'{e:g}' for e in eps_sorted)})",
    )
    kappa = check_gamma(problem).kappa
    per = 2 * (m + 1)
    n_ref = ((n_ref + per - 1) // per) * per

    def mesh_factory(n: int):
        from .meshes import system_shishkin

        return system_shishkin(eps_sorted, n, sigma=2.0, beta=kappa, both_sides=True)

    ref = ReferenceSolution(
        kind="oracle",
        evaluator=_lazy_oracle(problem, n_ref, "central", mesh_factory),
        n_ref=n_ref,
        mesh_label=f"system_shishkin(both_sides,beta={kappa:g})",
        label=problem.label,
    )
    return problem, ref


def builtin_weakly_coupled_cd(
    m: int = 2,
    eps: tuple[float, ...] = (1e-6, 1e-3),
    n_ref: int = 12288,
) -> tuple[SystemProblem, ReferenceSolution]:
    """Convection-diffusion system coupled only through the reaction matrix.

    -eps_i u_i'' - u_i' + (A u)_i = 1 with the same well-conditioned A as the
    reaction-diffusion builtin; every component has a layer at x = 0 of width
    eps_i.  Reference: upwind fine-mesh oracle on the multi-scale mesh.
    """
    if len(eps) != m:
        raise ValueError(f"need {m} eps values, got {len(eps)}")
    a, f = _default_coupling(m)
    eps_sorted = tuple(sorted(float(e) for e in eps))
    b = np.zeros((m, m))
    np.fill_diagonal(b, -1.0)
    problem = SystemProblem(
        m=m,
        eps=eps_sorted,
        kind="weakly-coupled-cd",
        b=coefficient(b, (m, m)),
        a=a,
        f=f,
        label=f"weakly-coupled-cd(m={m},eps={','.join(f'{e:g}' for e in eps_sorted)})",
    )
    per = m + 1
    n_ref = ((n_ref + per - 1) // per) * per

    def mesh_factory(n: int):
        from .meshes import system_shishkin

        return system_shishkin(eps_sorted, n, sigma=2.0, beta=1.0, both_sides=False)

    ref = ReferenceSolution(
        kind="oracle",
        evaluator=_lazy_oracle(problem, n_ref, "simple-upwind", mesh_factory),
        n_ref=n_ref,
        mesh_label="system_shishkin(beta=1)",
        label=problem.label,
    )
    return problem, ref


BUILTIN_PROBLEMS: dict[str, Callable[..., tuple[SystemProblem, ReferenceSolution]]] = {
    "scalar-cd": builtin_scalar_cd,
    "strongly-coupled-2x2": builtin_strongly_coupled_example,
    "reaction-diffusion": builtin_reaction_diffusion_system,
    "weakly-coupled-cd": builtin_weakly_coupled_cd,
}
