import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ubrel.errors import UnsupportedComponentError, UsageError
from ubrel.kinematics import (
    KinematicParams,
    PhaseDifferential,
    Worldline,
    boost_matrix,
    classical_limit_table,
    classical_limit_transform,
    compose_closed,
    compose_matrix,
    compose_params,
    compose_printed,
    extract_params,
    finite_difference_mass_rate,
    mass_rate,
    params_close,
    relative_deviation,
    stress_block,
    to_covariant,
    transform_differential,
    transform_stress,
    ub_from_params,
)
from ubrel.relativity_groups import (
    UbElement,
    abelian_residual,
    is_lorentz,
    minkowski,
    random_abelian,
    random_ub,
    ub_assemble,
    ub_conjugate,
)

seeds = st.integers(0, 2**32 - 1)


def random_params(rng, n, c=1.0, max_frac=0.9):
    a = rng.uniform(-1, 1, (n, n))
    m = rng.uniform(-2, 2, (n, n))
    u = rng.normal(size=n)
    v = u / np.linalg.norm(u) * rng.uniform(0, max_frac) * c
    return KinematicParams.from_velocity(v, c, alpha=a - a.T, f=rng.uniform(-2, 2, n), r=rng.uniform(-2, 2), m_stress=m + m.T)


def random_diff(rng, n, c=1.0):
    return PhaseDifferential(n, c, rng.normal(), rng.normal(size=n), rng.normal(size=n), rng.normal())


def test_params_validation():
    with pytest.raises(UsageError):
        KinematicParams(2, alpha=np.ones((2, 2)))
    with pytest.raises(UsageError):
        KinematicParams(2, m_stress=[[0.0, 1.0], [2.0, 0.0]])
    with pytest.raises(UsageError):
        KinematicParams.from_velocity([1.0], 1.0)
    with pytest.raises(UsageError):
        KinematicParams(1, c=-1.0)


def test_velocity_from_rapidity():
    p = KinematicParams(2, 3.0, beta=[0.3, 0.4])
    assert np.allclose(p.v, 3.0 * math.tanh(0.5) * np.array([0.6, 0.8]))
    assert p.gamma == pytest.approx(1 / math.sqrt(1 - (np.linalg.norm(p.v) / 3.0) ** 2))


def test_boost_examples():
    assert np.array_equal(boost_matrix([0.0, 0.0], 2.0, 2), np.eye(3))
    got = boost_matrix([math.atanh(0.6)], 1.0, 1)
    assert np.allclose(got, [[1.25, 0.75], [0.75, 1.25]], atol=1e-15)


@given(seeds, st.integers(1, 3), st.floats(0.5, 5.0))
def test_boost_forms(seed, n, c):
    beta = np.random.default_rng(seed).uniform(-1.5, 1.5, n)
    L = boost_matrix(beta, c, n)
    assert L[0, 0] == pytest.approx(math.cosh(np.linalg.norm(beta)))
    # acting on (t, q) it keeps dt^2 - dq^2/c^2
    form = np.diag(np.r_[-1.0, np.full(n, 1.0 / c**2)])
    assert np.allclose(L.T @ form @ L, form, atol=1e-10)
    assert is_lorentz(to_covariant(L, c), minkowski(n))


def test_stress_block_examples(rng):
    assert np.array_equal(stress_block(KinematicParams(2)), np.zeros((3, 3)))
    assert np.array_equal(stress_block(KinematicParams(1, f=[2.0])), [[0.0, -2.0], [2.0, 0.0]])
    xi = stress_block(random_params(rng, 3, 2.0))
    assert abelian_residual(xi, minkowski(3)) < 1e-12


def test_group_element_at_rest_uses_the_stress_block(rng):
    p = random_params(rng, 3, 2.0, max_frac=0.0)
    p = KinematicParams(3, 2.0, f=p.f, r=p.r, m_stress=p.m_stress)
    assert np.allclose(ub_from_params(p).Xi, stress_block(p), atol=1e-12)


def test_transform_identity_and_examples():
    d = PhaseDifferential(1, 1.0, 0.3, [0.5], [0.7], 1.1)
    same = transform_differential(UbElement.identity(1), d)
    assert np.allclose(same.as_array(), d.as_array())
    v = 0.6
    g = ub_from_params(KinematicParams.from_velocity([v], 1.0))
    out = transform_differential(g, d)
    gam = 1.25
    assert out.dt == pytest.approx(gam * (0.3 + v * 0.5))
    assert out.dq[0] == pytest.approx(gam * (0.5 + v * 0.3))
    f, r, m = 2.0, 0.5, 0.3
    out = transform_differential(ub_from_params(KinematicParams(1, 1.0, f=[f], r=r, m_stress=[[m]])), d)
    assert out.de == pytest.approx(1.1 - f * 0.5 + r * 0.3)
    assert out.dp[0] == pytest.approx(0.7 + f * 0.3 + m * 0.5)


def test_n1_transformation_with_velocity_and_forces():
    c, v, f, r, m = 1.7, 0.4, 0.3, 0.2, 0.7
    p = KinematicParams.from_velocity([v], c, f=[f], r=r, m_stress=[[m]])
    g, dt, dq, dp, de = p.gamma, 0.3, 0.5, 0.7, 1.1
    out = transform_differential(ub_from_params(p), PhaseDifferential(1, c, dt, [dq], [dp], de))
    assert out.dt == pytest.approx(g * (dt + v * dq / c**2))
    assert out.dq[0] == pytest.approx(g * (dq + v * dt))
    assert out.dp[0] == pytest.approx(g * (dp + v * de / c**2 + f * dt + m * dq / c**2))
    # the energy line carries one more term than the momentum-free form, needed for group membership
    assert out.de == pytest.approx(g * (de + v * dp - f * dq + r * dt) + g * v * (r + m) * dq / c**2)


def test_transform_mismatch():
    with pytest.raises(UsageError):
        transform_differential(UbElement.identity(2), PhaseDifferential(1, 1.0, 0, [0], [0], 0))


@given(seeds, st.integers(1, 3), st.floats(0.5, 3.0))
def test_proper_time_invariance(seed, n, c):
    rng = np.random.default_rng(seed)
    d = random_diff(rng, n, c)
    out = transform_differential(ub_from_params(random_params(rng, n, c)), d)
    assert out.proper_time_sq() == pytest.approx(d.proper_time_sq(), abs=1e-10)


@given(seeds, st.integers(1, 3), st.floats(0.5, 3.0))
def test_params_roundtrip(seed, n, c):
    rng = np.random.default_rng(seed)
    p = random_params(rng, n, c)
    g = ub_from_params(p)
    ub_assemble(g.Lambda, g.Xi, n, c)
    back = extract_params(g)
    assert params_close(back, p, rtol=1e-9)
    assert np.allclose(ub_from_params(back).matrix(), g.matrix(), atol=1e-9)


def test_extract_examples():
    assert params_close(extract_params(UbElement.identity(2)), KinematicParams(2))
    beta = np.array([0.2, -0.5])
    g = UbElement(to_covariant(boost_matrix(beta, 2.0, 2), 2.0), np.zeros((3, 3)), 2.0)
    back = extract_params(g)
    assert np.allclose(back.beta, beta) and np.allclose(back.f, 0) and back.r == pytest.approx(0)


def test_extract_rejects_other_components():
    flip = np.diag([1.0, -1.0])
    with pytest.raises(UnsupportedComponentError):
        extract_params(UbElement(flip, np.zeros((2, 2))))
    with pytest.raises(UnsupportedComponentError):
        extract_params(UbElement(-np.eye(2), np.zeros((2, 2))))


def test_velocity_addition():
    half = KinematicParams.from_velocity([0.5], 1.0)
    for method in ("matrix", "closed"):
        assert compose_params(half, half, method).v[0] == pytest.approx(0.8)
    with pytest.raises(UsageError):
        compose_params(half, half, "other")


def test_zero_velocity_composition_adds():
    a = KinematicParams(1, 2.0, f=[1.0], r=0.5, m_stress=[[0.2]])
    b = KinematicParams(1, 2.0, f=[-0.3], r=1.5, m_stress=[[0.7]])
    out = compose_closed(a, b)
    assert (out.f[0], out.r, out.m_stress[0, 0]) == pytest.approx((0.7, 2.0, 0.9))
    assert params_close(out, compose_matrix(a, b))
    assert params_close(out, compose_printed(a, b))


@given(seeds, st.floats(0.5, 3.0))
def test_closed_composition_matches_matrix_route(seed, c):
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, 1, c), random_params(rng, 1, c)
    assert params_close(compose_closed(a, b), compose_matrix(a, b), rtol=1e-9)
    assert abs(compose_closed(a, b).v[0]) < c


def test_printed_force_laws_disagree_with_the_group(rng):
    a, b = random_params(rng, 1), random_params(rng, 1)
    printed, group = compose_printed(a, b), compose_matrix(a, b)
    assert printed.v[0] == pytest.approx(group.v[0])
    assert abs(printed.r - group.r) + abs(printed.m_stress[0, 0] - group.m_stress[0, 0]) > 1e-3


@given(seeds, st.integers(2, 3))
def test_matrix_composition_in_higher_dimensions(seed, n):
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, n), random_params(rng, n)
    out = compose_matrix(a, b)
    assert np.linalg.norm(out.v) < 1.0
    assert np.allclose(ub_from_params(out).matrix(), ub_from_params(a).matrix() @ ub_from_params(b).matrix(), atol=1e-9)


def test_closed_form_is_one_dimensional():
    with pytest.raises(UsageError):
        compose_closed(KinematicParams(2), KinematicParams(2))


def test_mass_rate_examples(rng):
    g = UbElement(np.eye(4), np.zeros((4, 4)))
    assert mass_rate(g, rng.normal(size=4), rng.normal(size=4)) == 0.0
    h = UbElement(np.eye(4), random_abelian(rng, 3, 2.0), 2.0)
    V = rng.normal(size=4)
    xv = h.Xi @ V
    assert mass_rate(h, V, np.zeros(4)) == pytest.approx(float(xv @ h.eta @ xv) / 4.0)
    with pytest.raises(UsageError):
        mass_rate(h, V, np.zeros(3))


def _random_worldline(rng, n, span):
    x0, v0, a, w = rng.normal(size=(4, n + 1))
    p0, f0, b, u = rng.normal(size=(4, n + 1))

    def x_of(t):
        return x0 + v0 * t + a * np.sin(w * t)

    def p_of(t):
        return p0 + f0 * t + b * np.cos(u * t)

    tau0 = float(rng.uniform(-1, 1))
    V = v0 + a * w * np.cos(w * tau0)
    F = f0 - b * u * np.sin(u * tau0)
    return Worldline.sample(x_of, p_of, tau0, 2 * 1e-5 * span), V, F


def test_mass_rate_against_finite_differences(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        g = random_ub(rng, n, c=float(rng.uniform(0.5, 3.0)), xi_scale=2.0)
        wl, V, F = _random_worldline(rng, n, 1.0)
        fd = finite_difference_mass_rate(g, wl)
        closed = mass_rate(g, V, F)
        assert abs(closed - fd) <= 1e-6 * max(abs(closed), 1e-12)


def test_worldline_validation_and_csv(rng):
    wl, _, _ = _random_worldline(rng, 2, 1.0)
    back = Worldline.from_csv(wl.to_csv())
    assert np.array_equal(back.tau, wl.tau) and np.array_equal(back.p, wl.p)
    with pytest.raises(UsageError):
        Worldline([0.0, 0.0, 1.0], np.zeros((3, 2)), np.zeros((3, 2)))
    with pytest.raises(UsageError):
        wl.rates(0)


def test_transform_stress(rng):
    g = random_ub(rng, 3)
    xi = random_abelian(rng, 3)
    assert np.allclose(transform_stress(UbElement(np.eye(4), np.zeros((4, 4))), xi), xi)
    out = transform_stress(g, xi)
    assert abelian_residual(out, minkowski(3)) < 1e-10 * max(1.0, np.max(np.abs(out)))
    pure = UbElement(g.Lambda, np.zeros((4, 4)))
    conj = ub_conjugate(pure, UbElement(np.eye(4), xi))
    assert np.allclose(conj.Xi, out, atol=1e-10)
    with pytest.raises(UsageError):
        transform_stress(g, rng.normal(size=(4, 4)))


def test_classical_limit_examples(rng):
    d = random_diff(rng, 3)
    p = KinematicParams(3, 1.0, r=0.7)
    lim = classical_limit_table(p, d)
    assert np.allclose(lim.as_array(), d.as_array() + np.r_[0, 0, 0, 0, 0, 0, 0, 0.7 * d.dt])
    p = random_params(rng, 3)
    assert relative_deviation(classical_limit_transform(p, d, 1e6), classical_limit_table(p, d)) < 1e-6


def test_classical_limit_rate(rng):
    p, d = random_params(rng, 2), random_diff(rng, 2)
    dev = [relative_deviation(classical_limit_transform(p, d, c), classical_limit_table(p, d)) for c in (100, 200, 400)]
    for a, b in zip(dev, dev[1:]):
        assert 0.24 < b / a < 0.26


def test_json_roundtrips(rng):
    p = random_params(rng, 2, 3.0)
    assert params_close(KinematicParams.from_json(p.to_json()), p)
    q = KinematicParams.from_json({"n": 1, "c": 1.0, "v": [0.5]})
    assert q.v[0] == pytest.approx(0.5)
    d = random_diff(rng, 2)
    assert np.array_equal(PhaseDifferential.from_json(d.to_json()).as_array(), d.as_array())
    with pytest.raises(UsageError):
        KinematicParams.from_json({"c": 1.0})


@pytest.mark.parametrize("c", [0.5, 2.0, 7.0])
def test_power_enters_energy_without_factor_c(c):
    p = KinematicParams.from_velocity([0.0, 0.0], c, f=[0.0, 0.0], r=1.5)
    out = transform_differential(ub_from_params(p), PhaseDifferential(2, c, 2.0, [0.0, 0.0], [0.0, 0.0], 0.0))
    assert out.de == pytest.approx(3.0, abs=1e-12)
    assert out.dt == pytest.approx(2.0, abs=1e-12)
