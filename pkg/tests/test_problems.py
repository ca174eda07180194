"""Problem containers, stability pre-checks, envelopes, built-in references."""
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spbvp.linalg import jacobi_eigh
from spbvp.problems import (
    BUILTIN_PROBLEMS,
    Coefficient,
    LayerEnvelope,
    ReferenceSolution,
    SystemProblem,
    builtin_reaction_diffusion_system,
    builtin_scalar_cd,
    builtin_strongly_coupled_example,
    builtin_weakly_coupled_cd,
    check_gamma,
    check_upsilon,
    coefficient,
    default_envelope,
    envelope_check,
    report_to_dict,
    stability_report,
)

# frozen expected values
SCALAR_U_HALF_EPS1 = 0.12245933120185456  # mpmath, 40 digits
KAPPA_RD_DEFAULT = 1.3228756555322954  # sqrt((1 - 1/8) * 2) = sqrt(7/4)
GAMMA_RD_DEFAULT = [[1.0, -0.125], [-0.125, 1.0]]  # offdiag (1/4)/2 by hand
UPSILON_2X2 = [[1.0, -4.0], [-4.0, 1.0]]  # sup|b_12| = 4, zero reaction
UPSILON_2X2_INV_MIN = -4.0 / 15.0  # inverse of [[1,-4],[-4,1]] by hand


def _rd_problem(a_matrix, eps=(1e-4, 1e-2)):
    m = len(a_matrix)
    return SystemProblem(
        m=m,
        eps=tuple(eps[:m]) if len(eps) >= m else tuple([1e-3] * m),
        kind="reaction-diffusion",
        a=coefficient(np.asarray(a_matrix, dtype=float), (m, m)),
        f=coefficient(np.ones(m), (m,)),
    )


# ---------------------------------------------------------------------------
# coefficients and problem validation


def test_coefficient_requires_exactly_one_source():
    with pytest.raises(ValueError, match="exactly one"):
        Coefficient(shape=(2, 2))
    with pytest.raises(ValueError, match="exactly one"):
        Coefficient(shape=(2,), constant=np.ones(2), fn=lambda x: x)


def test_coefficient_scalar_broadcast_and_shapes():
    c = coefficient(2.0, (3,))
    assert c.is_constant
    np.testing.assert_array_equal(c.constant, [2.0, 2.0, 2.0])
    with pytest.raises(ValueError, match="cannot shape"):
        coefficient(np.ones((2, 3)), (2, 2))


def test_coefficient_constant_eval_broadcasts_over_x():
    c = coefficient(np.array([[1.0, 2.0], [3.0, 4.0]]), (2, 2))
    out = c(np.linspace(0, 1, 5))
    assert out.shape == (5, 2, 2)
    assert np.all(out[3] == c.constant)


def test_coefficient_callable_eval_and_shape_check():
    c = coefficient(lambda x: np.stack([x, 1 + x], axis=1), (2,))
    assert not c.is_constant
    out = c(np.array([0.0, 0.5]))
    np.testing.assert_allclose(out, [[0.0, 1.0], [0.5, 1.5]])
    bad = coefficient(lambda x: x, (2,))
    with pytest.raises(ValueError, match="returned shape"):
        bad(np.array([0.0, 0.5]))


def test_problem_kind_validation():
    a = coefficient(np.eye(1), (1, 1))
    f = coefficient(np.ones(1), (1,))
    with pytest.raises(ValueError, match="kind"):
        SystemProblem(m=1, eps=(1e-3,), kind="elliptic", a=a, f=f)
    with pytest.raises(ValueError, match="no convection"):
        SystemProblem(m=1, eps=(1e-3,), kind="reaction-diffusion", a=a, f=f, b=a)
    with pytest.raises(ValueError, match="requires a convection"):
        SystemProblem(m=1, eps=(1e-3,), kind="weakly-coupled-cd", a=a, f=f)
    with pytest.raises(ValueError, match="positive"):
        SystemProblem(m=1, eps=(-1.0,), kind="reaction-diffusion", a=a, f=f)


def test_weakly_coupled_must_have_diagonal_convection():
    a = coefficient(np.eye(2), (2, 2))
    f = coefficient(np.ones(2), (2,))
    b_off = coefficient(np.array([[1.0, 0.5], [0.0, 1.0]]), (2, 2))
    with pytest.raises(ValueError, match="diagonal convection"):
        SystemProblem(m=2, eps=(1e-3, 1e-3), kind="weakly-coupled-cd", a=a, f=f, b=b_off)
    # a varying but diagonal convection is fine
    def bfn(x):
        out = np.zeros(x.shape + (2, 2))
        out[:, 0, 0] = 1.0 + x
        out[:, 1, 1] = 2.0 - x
        return out

    SystemProblem(
        m=2, eps=(1e-3, 1e-3), kind="weakly-coupled-cd",
        a=a, f=f, b=coefficient(bfn, (2, 2)),
    )


def test_problem_boundary_defaults_and_diffusion():
    p = _rd_problem([[2.0, -0.25], [-0.25, 2.0]])
    np.testing.assert_array_equal(p.g0, [0.0, 0.0])
    np.testing.assert_array_equal(p.g1, [0.0, 0.0])
    np.testing.assert_allclose(p.diffusion, [1e-8, 1e-4])  # eps squared
    pc, _ = builtin_scalar_cd(1e-3)
    np.testing.assert_allclose(pc.diffusion, [1e-3])  # eps itself


# ---------------------------------------------------------------------------
# reaction comparison check


def test_gamma_frozen_for_default_reaction_coupling():
    prob, _ = builtin_reaction_diffusion_system()
    rep = check_gamma(prob)
    np.testing.assert_allclose(rep.gamma_matrix, GAMMA_RD_DEFAULT, atol=0)
    assert rep.gamma_monotone
    assert rep.zeta == pytest.approx(0.125, abs=0)
    assert rep.diag_dominant
    assert rep.kappa == pytest.approx(KAPPA_RD_DEFAULT, abs=1e-15)


def test_gamma_identity_and_verdict_false_case():
    rep = check_gamma(_rd_problem(np.eye(2)))
    assert rep.gamma_monotone and rep.zeta == 0.0
    # strong off-diagonal coupling: inverse of [[1,-3],[-3,1]] has negative
    # entries, so the verdict must come back false
    rep2 = check_gamma(_rd_problem([[1.0, -3.0], [-3.0, 1.0]]))
    assert not rep2.gamma_monotone
    assert rep2.zeta == pytest.approx(3.0)
    assert not rep2.diag_dominant
    assert rep2.gamma_inverse_min == pytest.approx(-3.0 / 8.0)


def test_gamma_requires_positive_diagonal():
    with pytest.raises(ValueError, match="not positive"):
        check_gamma(_rd_problem([[0.0, 0.0], [0.0, 1.0]]))


def test_gamma_invariant_under_row_scaling():
    A = np.array([[2.0, -0.3], [-0.4, 3.0]])
    scale = np.array([5.0, 0.25])
    r1 = check_gamma(_rd_problem(A))
    r2 = check_gamma(_rd_problem(scale[:, None] * A))
    np.testing.assert_array_equal(r1.gamma_matrix, r2.gamma_matrix)
    assert r1.zeta == r2.zeta


def test_gamma_uses_same_point_ratios_not_separate_sups():
    # a_12/a_11 is large only where a_11 is large too; the same-point ratio
    # stays small even though sup|a_12| / inf a_11 would not
    def afn(x):
        out = np.zeros(x.shape + (2, 2))
        out[:, 0, 0] = 1.0 + 9.0 * x
        out[:, 0, 1] = -0.3 * (1.0 + 9.0 * x)
        out[:, 1, 1] = 1.0
        return out

    prob = SystemProblem(
        m=2, eps=(1e-4, 1e-3), kind="reaction-diffusion",
        a=coefficient(afn, (2, 2)), f=coefficient(np.ones(2), (2,)),
    )
    rep = check_gamma(prob)
    assert rep.gamma_matrix[0, 1] == pytest.approx(-0.3, rel=1e-12)
    assert rep.gamma_monotone


def test_symmetric_monotone_implies_positive_definite():
    rng = np.random.default_rng(7)
    monotone_seen = 0
    for _ in range(100):
        m = int(rng.integers(2, 5))
        M = -np.abs(rng.normal(size=(m, m)))
        M = 0.5 * (M + M.T)
        np.fill_diagonal(M, np.abs(rng.normal(size=m)) + rng.uniform(0.1, 3.0))
        rep = check_gamma(_rd_problem(M, eps=tuple([1e-3] * m)))
        if rep.gamma_monotone:
            monotone_seen += 1
            assert np.all(jacobi_eigh(M).values > 0.0), M
    assert monotone_seen >= 20


# ---------------------------------------------------------------------------
# convection comparison check


def test_upsilon_frozen_for_builtin_2x2():
    prob, _ = builtin_strongly_coupled_example(1e-6)
    rep = check_upsilon(prob)
    np.testing.assert_allclose(rep.upsilon_matrix, UPSILON_2X2, atol=0)
    assert rep.upsilon_inverse_min == pytest.approx(UPSILON_2X2_INV_MIN)
    assert rep.upsilon_row_sum_min == pytest.approx(-3.0)
    assert not rep.upsilon_monotone
    assert rep.upsilon_heuristic
    assert any("heuristic" in n for n in rep.notes)


def test_upsilon_kind_and_constants_validation():
    prob, _ = builtin_scalar_cd(1e-3)
    with pytest.raises(ValueError, match="strongly-coupled"):
        check_upsilon(prob)
    prob2, _ = builtin_strongly_coupled_example(1e-3)
    with pytest.raises(ValueError, match="positive constants"):
        check_upsilon(prob2, c=np.array([1.0, -1.0]))
    rep = check_upsilon(prob2, c=np.array([0.1, 0.1]))
    assert not rep.upsilon_heuristic
    np.testing.assert_allclose(rep.upsilon_matrix, [[1.0, -0.4], [-0.4, 1.0]])


def test_upsilon_verdict_implies_dominant_convection():
    # with unit constants the verdict is only trusted when min|b_ii| >= 1;
    # on such instances a true verdict must mean strict diagonal dominance
    rng = np.random.default_rng(42)
    true_seen = 0
    for _ in range(150):
        m = int(rng.integers(2, 4))
        diag = rng.uniform(1.0, 3.0, m) * rng.choice([-1.0, 1.0], m)
        B0 = rng.normal(size=(m, m)) * rng.uniform(0.0, 0.6)
        np.fill_diagonal(B0, diag)
        A0 = rng.normal(size=(m, m)) * rng.uniform(0.0, 0.3)
        prob = SystemProblem(
            m=m, eps=tuple([1e-4] * m), kind="strongly-coupled-cd",
            b=coefficient(B0, (m, m)), a=coefficient(A0, (m, m)),
            f=coefficient(np.ones(m), (m,)),
        )
        rep = check_upsilon(prob)
        if rep.upsilon_monotone:
            true_seen += 1
            offsum = np.abs(B0).sum(axis=1) - np.abs(np.diag(B0))
            assert np.all(np.abs(np.diag(B0)) > offsum)
    assert true_seen >= 30


def test_upsilon_accounts_for_convection_derivative():
    # b_12 averages to zero but varies; its derivative contributes through
    # the L1 term, so the entry must be more negative than sup|b_12| alone
    def bfn(x):
        out = np.zeros(x.shape + (2, 2))
        out[:, 0, 0] = 2.0
        out[:, 1, 1] = -2.0
        out[:, 0, 1] = 0.1 * np.sin(2.0 * np.pi * x)
        return out

    prob = SystemProblem(
        m=2, eps=(1e-3, 1e-3), kind="strongly-coupled-cd",
        b=coefficient(bfn, (2, 2)),
        a=coefficient(np.zeros((2, 2)), (2, 2)),
        f=coefficient(np.ones(2), (2,)),
    )
    rep = check_upsilon(prob)
    # L1 of |0.2*pi*cos(2 pi x)| = 0.4, sup = 0.1
    assert rep.upsilon_matrix[0, 1] == pytest.approx(-0.5, rel=1e-3)
    assert rep.upsilon_matrix[1, 0] == 0.0 + 1.0 * 0.0  # b_21 = a_21 = 0
    assert rep.upsilon_monotone


def test_stability_report_merges_sections():
    prob, _ = builtin_strongly_coupled_example(1e-4)
    rep = stability_report(prob)
    # zero reaction diagonal: gamma section skipped with a note
    assert rep.gamma_matrix is None
    assert any("skipped" in n for n in rep.notes)
    assert rep.upsilon_matrix is not None
    d = report_to_dict(rep)
    parsed = json.loads(json.dumps(d))
    assert parsed["upsilon_monotone"] is False
    assert parsed["upsilon_matrix"] == UPSILON_2X2

    prob_rd, _ = builtin_reaction_diffusion_system()
    rep_rd = stability_report(prob_rd)
    assert rep_rd.upsilon_matrix is None
    assert rep_rd.gamma_monotone
    assert json.loads(json.dumps(report_to_dict(rep_rd)))["kappa"] == pytest.approx(
        KAPPA_RD_DEFAULT
    )


# ---------------------------------------------------------------------------
# built-in problems


def test_scalar_cd_frozen_value_and_boundaries():
    prob, ref = builtin_scalar_cd(1.0)
    vals = ref(np.array([0.0, 0.5, 1.0]))[:, 0]
    assert vals[0] == 0.0
    assert vals[2] == pytest.approx(0.0, abs=1e-16)
    assert vals[1] == pytest.approx(SCALAR_U_HALF_EPS1, rel=1e-14)
    prob6, ref6 = builtin_scalar_cd(1e-6)
    v6 = ref6(np.array([0.0, 0.5, 1.0]))[:, 0]
    assert v6[0] == 0.0 and v6[2] == pytest.approx(0.0, abs=1e-15)
    assert v6[1] == pytest.approx(0.5, rel=1e-12)  # layer correction underflows


def test_scalar_cd_against_sympy_oracle():
    sp = pytest.importorskip("sympy")
    x, e = sp.symbols("x e", positive=True)
    w = sp.exp(-(1 - x) / e)
    u = x - (w - sp.exp(-1 / e)) / (1 - sp.exp(-1 / e))
    resid = sp.simplify(-e * u.diff(x, 2) + u.diff(x) - 1)
    assert resid == 0
    for eps in (0.1, 1e-3):
        # mpmath evaluation: float64 overflows once sympy rewrites the decaying
        # exponential as tiny * exp(+x/eps)
        fn = sp.lambdify(x, u.subs(e, sp.Float(eps, 30)), "mpmath")
        _, ref = builtin_scalar_cd(eps)
        xs = np.linspace(0.0, 1.0, 23)
        oracle = np.array([float(fn(t)) for t in xs])
        np.testing.assert_allclose(ref(xs)[:, 0], oracle, rtol=1e-10, atol=1e-12)


def test_scalar_cd_derivatives_match_difference_quotients():
    _, ref = builtin_scalar_cd(1e-2)
    xs = np.linspace(0.2, 0.99, 41)
    h = 1e-6
    d1 = (ref(xs + h)[:, 0] - ref(xs - h)[:, 0]) / (2 * h)
    np.testing.assert_allclose(ref.derivative(xs, 1)[:, 0], d1, rtol=1e-7, atol=1e-10)
    d2 = (ref(xs + h)[:, 0] - 2 * ref(xs)[:, 0] + ref(xs - h)[:, 0]) / h**2
    # quotient noise floor is ~4 ulp / h^2 = 9e-4; only the layer zone rises
    # above it, and there the relative tolerance takes over
    np.testing.assert_allclose(ref.derivative(xs, 2)[:, 0], d2, rtol=1e-3, atol=2e-3)
    with pytest.raises(ValueError, match="order"):
        ref.derivative(xs, 3)


def test_scalar_cd_rejects_bad_eps():
    with pytest.raises(ValueError, match="positive"):
        builtin_scalar_cd(0.0)


def test_strongly_coupled_reference_values():
    prob, ref = builtin_strongly_coupled_example(1e-6)
    vals = ref(np.array([0.0, 0.5, 1.0]))
    # layer terms underflow at these points for eps = 1e-6
    np.testing.assert_allclose(vals[0], [0.0, 0.0], atol=1e-300)
    np.testing.assert_allclose(vals[1], [0.1, 0.2], rel := 1e-14, atol=1e-16)
    np.testing.assert_allclose(vals[2], [0.0, 0.0], atol=1e-300)
    np.testing.assert_allclose(ref(np.array([0.3]))[0], [4.7 / 25, 4.6 / 25], rtol=1e-14)
    assert ref.kind == "asymptotic"
    assert "exp(-5/eps)" in ref.defect


def test_strongly_coupled_interior_residual_is_zero():
    sp = pytest.importorskip("sympy")
    x, e = sp.symbols("x e", positive=True)
    e0, e1 = sp.exp(-5 * x / e), sp.exp(-5 * (1 - x) / e)
    u = sp.Matrix(
        [
            sp.Rational(8, 25) - sp.Rational(11, 25) * x
            - sp.Rational(8, 25) * e0 + sp.Rational(3, 25) * e1,
            sp.Rational(4, 25) + sp.Rational(2, 25) * x
            - sp.Rational(4, 25) * e0 - sp.Rational(6, 25) * e1,
        ]
    )
    B = sp.Matrix([[-3, -4], [-4, 3]])
    resid = sp.simplify(-e * u.diff(x, 2) + B * u.diff(x) - sp.Matrix([1, 2]))
    assert resid == sp.zeros(2, 1)
    # and the package evaluator agrees with the symbolic form
    fn = sp.lambdify(x, u.subs(e, sp.Rational(1, 100)).T, "numpy")
    _, ref = builtin_strongly_coupled_example(0.01)
    xs = np.linspace(0.0, 1.0, 17)
    sym_vals = np.array([fn(t)[0] for t in xs])
    np.testing.assert_allclose(ref(xs), sym_vals, rtol=1e-12, atol=1e-15)


def test_strongly_coupled_layer_directions_are_eigenvectors():
    # the layer amplitudes must lie along eigenvectors of the convection
    # matrix: (2,1) for eigenvalue -5 (left), (1,-2) for +5 (right)
    prob, ref = builtin_strongly_coupled_example(1e-3)
    B = prob.b.constant
    left = np.array([8.0 / 25, 4.0 / 25])
    right = np.array([3.0 / 25, -6.0 / 25])
    np.testing.assert_allclose(B @ left, -5.0 * left, atol=1e-14)
    np.testing.assert_allclose(B @ right, 5.0 * right, atol=1e-14)


def test_oracle_builtins_defer_and_round_counts():
    prob, ref = builtin_reaction_diffusion_system()
    assert ref.kind == "oracle"
    assert ref.n_ref == 12288 and ref.n_ref % 6 == 0
    assert prob.eps == (1e-6, 1e-3)  # sorted ascending
    prob2, ref2 = builtin_reaction_diffusion_system(n_ref=1000)
    assert ref2.n_ref == 1002  # rounded up to a multiple of 2*(m+1)
    probw, refw = builtin_weakly_coupled_cd(n_ref=1000)
    assert refw.n_ref == 1002  # multiple of m+1
    assert probw.b.constant[0, 0] == -1.0  # layers at the left end
    with pytest.raises(ValueError, match="eps values"):
        builtin_reaction_diffusion_system(m=2, eps=(1e-3,))


def test_builtin_registry_complete():
    assert set(BUILTIN_PROBLEMS) == {
        "scalar-cd",
        "strongly-coupled-2x2",
        "reaction-diffusion",
        "weakly-coupled-cd",
    }
    for factory in BUILTIN_PROBLEMS.values():
        prob, ref = factory()
        assert isinstance(prob, SystemProblem)
        assert isinstance(ref, ReferenceSolution)


def test_reference_solution_validation():
    with pytest.raises(ValueError, match="kind"):
        ReferenceSolution(kind="numeric", evaluator=lambda x: x)
    ref = ReferenceSolution(kind="oracle", evaluator=lambda x: x[:, None])
    with pytest.raises(ValueError, match="derivative"):
        ref.derivative(np.array([0.5]))


# ---------------------------------------------------------------------------
# envelopes


def test_envelope_validation():
    with pytest.raises(ValueError, match="equal length"):
        LayerEnvelope(eps=(1e-3,), rates=(1.0, 2.0), sides=("left",))
    with pytest.raises(ValueError, match="positive"):
        LayerEnvelope(eps=(0.0,), rates=(1.0,), sides=("left",))
    with pytest.raises(ValueError, match="sides"):
        LayerEnvelope(eps=(1e-3,), rates=(1.0,), sides=("top",))


def test_envelope_component_values():
    env = LayerEnvelope(eps=(1e-2,), rates=(2.0,), sides=("both",))
    # at x = 0 the left term is 1 and the right term is exp(-2/eps)
    assert env.component(0, np.array(0.0), 0) == pytest.approx(2.0)
    assert env.component(0, np.array(0.0), 1) == pytest.approx(1.0 + 1e2)
    assert env.component(0, np.array(0.0), 2) == pytest.approx(1.0 + 1e4)
    mid = env.component(0, np.array(0.5), 2)
    assert mid == pytest.approx(1.0 + 2e4 * math.exp(-100.0))
    out = env.evaluate(np.linspace(0, 1, 7), k=1)
    assert out.shape == (7, 1)
    with pytest.raises(ValueError, match="order"):
        env.component(0, np.array(0.0), 3)


def test_default_envelope_per_kind():
    ps, _ = builtin_scalar_cd(1e-4)
    es = default_envelope(ps)
    assert es.sides == ("right",) and es.rates == (1.0,)
    p2, _ = builtin_strongly_coupled_example(1e-4)
    e2 = default_envelope(p2)
    assert e2.sides == ("both", "both")
    np.testing.assert_allclose(e2.rates, (5.0, 5.0), rtol=1e-12)
    p3, _ = builtin_reaction_diffusion_system()
    e3 = default_envelope(p3)
    assert e3.sides == ("both", "both")
    np.testing.assert_allclose(e3.rates, (KAPPA_RD_DEFAULT,) * 2, rtol=1e-14)
    p4, _ = builtin_weakly_coupled_cd()
    e4 = default_envelope(p4)
    assert e4.sides == ("left", "left") and e4.rates == (1.0, 1.0)


def test_default_envelope_rejects_sign_changing_convection():
    def bfn(x):
        out = np.zeros(x.shape + (1, 1))
        out[:, 0, 0] = x - 0.5
        return out

    prob = SystemProblem(
        m=1, eps=(1e-3,), kind="weakly-coupled-cd",
        b=coefficient(bfn, (1, 1)),
        a=coefficient(np.ones((1, 1)), (1, 1)),
        f=coefficient(np.ones(1), (1,)),
    )
    with pytest.raises(ValueError, match="sign"):
        default_envelope(prob)


def test_envelope_constants_scalar_uniform_in_eps():
    # fitted constants for the exact solution must stay bounded and stable
    # across the perturbation sweep; that is the testable form of uniform
    # derivative bounds
    by_k = {0: [], 1: [], 2: []}
    for eps in (1e-2, 1e-4, 1e-6, 1e-8, 1e-10):
        prob, ref = builtin_scalar_cd(eps)
        env = default_envelope(prob)
        for k in (0, 1, 2):
            by_k[k].append(envelope_check(ref, env, k))
    for k, cs in by_k.items():
        assert 0.5 <= min(cs) and max(cs) <= 1.2, (k, cs)
        assert max(cs) / min(cs) <= 1.3, (k, cs)


def test_envelope_constants_coupled_system():
    c0s, c1s, c2s = [], [], []
    for eps in (1e-4, 1e-6, 1e-8):
        prob, ref = builtin_strongly_coupled_example(eps)
        env = default_envelope(prob)
        c0s.append(envelope_check(ref, env, 0))
        c1s.append(envelope_check(ref, env, 1))
        c2s.append(envelope_check(ref, env, 2))
    # sup|u| = 8/25 at the left boundary layer amplitude
    assert all(abs(c - 0.32) < 0.01 for c in c0s), c0s
    assert all(1.3 <= c <= 1.7 for c in c1s), c1s
    assert all(5.5 <= c <= 8.5 for c in c2s), c2s
    for cs in (c0s, c1s, c2s):
        assert max(cs) / min(cs) <= 1.3


def test_envelope_check_rejects_bad_order():
    prob, ref = builtin_scalar_cd(1e-3)
    with pytest.raises(ValueError, match="order"):
        envelope_check(ref, default_envelope(prob), 3)


# ---------------------------------------------------------------------------
# property-based


@given(
    diag=st.lists(st.floats(1.0, 5.0), min_size=2, max_size=4),
    off=st.floats(0.0, 0.45),
)
@settings(max_examples=60, deadline=None)
def test_dominant_reaction_always_passes_gamma(diag, off):
    m = len(diag)
    A = np.full((m, m), -off * min(diag) / (m - 1))
    np.fill_diagonal(A, diag)
    rep = check_gamma(_rd_problem(A, eps=tuple([1e-3] * m)))
    assert rep.gamma_monotone
    assert rep.zeta <= 0.9 + 1e-12
    assert rep.diag_dominant


@given(
    eps=st.floats(1e-8, 1e-1),
    rate=st.floats(0.5, 5.0),
    side=st.sampled_from(["left", "right", "both"]),
    k=st.integers(0, 2),
)
@settings(max_examples=60, deadline=None)
def test_envelope_positive_and_at_least_one(eps, rate, side, k):
    env = LayerEnvelope(eps=(eps,), rates=(rate,), sides=(side,))
    xs = np.linspace(0.0, 1.0, 33)
    vals = env.evaluate(xs, k)
    assert vals.shape == (33, 1)
    assert np.all(vals >= 1.0)
    assert np.all(np.isfinite(vals))
