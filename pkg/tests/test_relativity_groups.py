import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ubrel.errors import MembershipError, UsageError
from ubrel.kinematics import boost_matrix, to_covariant
from ubrel.matrix_core import Tolerance
from ubrel.relativity_groups import (
    CANDIDATE_KINDS,
    DegenerateMetric,
    UbElement,
    abelian_residual,
    block_matrix,
    group_condition_holds,
    heisenberg_metric,
    index_form_residual,
    is_heisenberg_automorphism,
    is_lorentz,
    literal_condition_holds,
    minkowski,
    ob_assemble,
    ob_inverse,
    preserves_degenerate_metric,
    random_abelian,
    random_block_candidate,
    random_lorentz,
    random_ub,
    ub_assemble,
    ub_close,
    ub_conjugate,
    ub_conjugate_abelian,
    ub_inverse,
    ub_mul,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 3)
PRED_TOL = Tolerance(1e-9, 1e-9)


def pure_boost(n, rapidity, c=1.0):
    beta = np.zeros(n)
    beta[0] = rapidity
    return UbElement(to_covariant(boost_matrix(beta, c, n), c), np.zeros((n + 1, n + 1)), c)


def test_degenerate_metric_shape():
    dm = DegenerateMetric(3)
    assert np.array_equal(dm.eta @ dm.eta, np.eye(4))
    assert np.linalg.matrix_rank(dm.eta_tilde) == 4


def test_assemble_examples():
    g = ub_assemble(np.eye(3), np.zeros((3, 3)), 2)
    assert ub_close(g, UbElement.identity(2), atol=0)
    b = pure_boost(1, 0.4)
    assert ub_close(ub_assemble(b.Lambda, b.Xi, 1), b, atol=0)
    s = np.array([[1.0, 2.0], [2.0, -3.0]])
    assert ub_assemble(np.eye(2), minkowski(1) @ s, 1).Xi[0, 1] == -2.0


def test_assemble_rejections():
    with pytest.raises(MembershipError):
        ub_assemble(2 * np.eye(2), np.zeros((2, 2)), 1)
    with pytest.raises(MembershipError) as info:
        ub_assemble(np.eye(2), [[0.0, 1.0], [1.0, 0.0]], 1)
    assert info.value.violation == pytest.approx(2.0)
    with pytest.raises(UsageError):
        ub_assemble(np.eye(2), np.zeros((2, 2)), 2)


def test_abelian_subgroup_is_additive(rng):
    x, y = random_abelian(rng, 2), random_abelian(rng, 2)
    e = np.eye(3)
    out = ub_mul(UbElement(e, x), UbElement(e, y))
    assert ub_close(out, UbElement(e, x + y), atol=1e-12)
    assert ub_close(ub_inverse(UbElement(e, x)), UbElement(e, -x), atol=0)


def test_inverse_of_boost_reverses_rapidity():
    assert ub_close(ub_inverse(pure_boost(2, 0.7)), pure_boost(2, -0.7), atol=1e-12)


def test_conjugate_abelian_examples(rng):
    x = UbElement(np.eye(2), random_abelian(rng, 1))
    assert ub_close(ub_conjugate_abelian(UbElement.identity(1), x), x, atol=0)
    a = UbElement(np.eye(2), random_abelian(rng, 1))
    assert ub_close(ub_conjugate_abelian(a, x), x, atol=0)
    b = pure_boost(1, 0.5)
    ch, sh = math.cosh(0.5), math.sinh(0.5)
    L, Li = np.array([[ch, sh], [sh, ch]]), np.array([[ch, -sh], [-sh, ch]])
    assert np.allclose(ub_conjugate_abelian(b, x).Xi, L @ x.Xi @ Li, atol=1e-12)
    with pytest.raises(UsageError):
        ub_conjugate_abelian(b, b)


def test_predicates_examples():
    dm, hm = DegenerateMetric(1), heisenberg_metric(1)
    assert preserves_degenerate_metric(np.eye(4), dm) and is_heisenberg_automorphism(np.eye(4), hm)
    b = pure_boost(1, 0.3).Lambda
    assert not preserves_degenerate_metric(block_matrix(b, np.zeros((2, 2)), b, B=np.eye(2)), dm)
    assert not is_heisenberg_automorphism(2.0 * np.eye(4), hm)
    assert is_heisenberg_automorphism(-np.eye(4), hm)
    with pytest.raises(UsageError):
        preserves_degenerate_metric(np.eye(3), dm)
    with pytest.raises(UsageError):
        is_heisenberg_automorphism(np.eye(3), hm)


def test_ob_inverse_lower_block(rng):
    L = random_lorentz(rng, 2)
    A = L @ random_lorentz(rng, 2) + 0.5 * np.eye(3)
    g = ob_assemble(L, rng.normal(size=(3, 3)), A)
    inv = ob_inverse(g)
    assert np.allclose(inv.matrix() @ g.matrix(), np.eye(6), atol=1e-9)
    # the other ordering of the lower-left factors is not the inverse when A != Lambda
    Li, Ai = np.linalg.inv(L), np.linalg.inv(A)
    assert not np.allclose(-Li @ g.Xi @ Ai, inv.Xi, atol=1e-6)
    assert preserves_degenerate_metric(g.matrix(), DegenerateMetric(2))


def test_ob_assemble_rejections():
    with pytest.raises(MembershipError):
        ob_assemble(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(MembershipError):
        ob_assemble(2 * np.eye(2), np.zeros((2, 2)), np.eye(2))


def test_json_roundtrip(rng):
    g = random_ub(rng, 2, c=3.0)
    assert ub_close(UbElement.from_json(g.to_json()), g, atol=0)
    with pytest.raises(UsageError):
        UbElement.from_json({"n": 1, "c": 1.0, "Lambda": [[1.0]]})


def test_lorentz_sampler(rng):
    for n in (1, 2, 3):
        L = random_lorentz(rng, n)
        assert is_lorentz(L, minkowski(n))
        assert np.linalg.det(L) == pytest.approx(1.0)


@given(seeds, dims)
def test_group_axioms_and_closure(seed, n):
    rng = np.random.default_rng(seed)
    a, b, c = (random_ub(rng, n, c=2.0) for _ in range(3))
    assert ub_close(ub_mul(ub_mul(a, b), c), ub_mul(a, ub_mul(b, c)), atol=1e-8)
    assert ub_close(ub_mul(a, UbElement.identity(n, 2.0)), a, atol=0)
    assert ub_close(ub_mul(a, ub_inverse(a)), UbElement.identity(n), atol=1e-9)
    ab = ub_mul(a, b)
    ub_assemble(ab.Lambda, ab.Xi, n, 2.0)
    assert np.allclose(ab.matrix(), a.matrix() @ b.matrix(), atol=1e-10)
    assert np.allclose(ub_inverse(a).matrix(), np.linalg.inv(a.matrix()), atol=1e-8)


@given(seeds, dims)
def test_normality_and_generic_conjugation(seed, n):
    rng = np.random.default_rng(seed)
    g = random_ub(rng, n)
    x = UbElement(np.eye(n + 1), random_abelian(rng, n))
    generic = ub_conjugate(g, x)
    assert np.allclose(generic.Lambda, np.eye(n + 1), atol=1e-10)
    assert ub_close(generic, ub_conjugate_abelian(g, x), atol=1e-8)
    assert abelian_residual(generic.Xi, minkowski(n)) < 1e-8


@given(seeds, dims)
def test_proper_time_is_invariant(seed, n):
    rng = np.random.default_rng(seed)
    dm = DegenerateMetric(n)
    g = random_ub(rng, n)
    dz = rng.normal(size=2 * n + 2)
    assert dm.interval(g.matrix() @ dz) == pytest.approx(dm.interval(dz), abs=1e-10)
    assert preserves_degenerate_metric(g.matrix(), dm)
    assert is_heisenberg_automorphism(g.matrix(), heisenberg_metric(n))


@given(seeds, dims, st.sampled_from(CANDIDATE_KINDS))
def test_intersection_theorem(seed, n, kind):
    rng = np.random.default_rng(seed)
    L, X, A, _ = random_block_candidate(rng, n, kind)
    G = block_matrix(L, X, A)
    lhs = preserves_degenerate_metric(G, DegenerateMetric(n), PRED_TOL) and is_heisenberg_automorphism(
        G, heisenberg_metric(n), PRED_TOL
    )
    assert lhs == group_condition_holds(L, X, A, PRED_TOL)


def test_literal_condition_admits_non_members(rng):
    # Xi = eta S satisfies Xi^t = eta Xi eta, but with Lambda != I the block matrix is not in the group
    hits = 0
    for _ in range(50):
        L, X, A, _ = random_block_candidate(rng, 2, "eta_symmetric_xi")
        G = block_matrix(L, X, A)
        if literal_condition_holds(L, X, A, PRED_TOL) and not is_heisenberg_automorphism(G, heisenberg_metric(2), PRED_TOL):
            hits += 1
    assert hits > 40


@given(seeds, dims)
def test_index_forms_describe_the_same_set(seed, n):
    rng = np.random.default_rng(seed)
    eta = minkowski(n)
    X = random_abelian(rng, n)
    assert index_form_residual(X, eta) < 1e-12 and abelian_residual(X, eta) < 1e-12
    Y = rng.normal(size=(n + 1, n + 1))
    assert (index_form_residual(Y, eta) < 1e-9) == (abelian_residual(Y, eta) < 1e-9)
    assert index_form_residual(Y, eta) == pytest.approx(abelian_residual(Y, eta))


def test_abelian_parameter_count():
    for n in (1, 2, 3):
        eta = minkowski(n)
        k = n + 1
        # linear map X -> X^t - eta X eta on k x k matrices; its kernel is the abelian algebra
        basis = np.eye(k * k).reshape(k * k, k, k)
        images = np.array([(E.T - eta @ E @ eta).ravel() for E in basis])
        assert k * k - np.linalg.matrix_rank(images) == (n + 1) * (n + 2) // 2
