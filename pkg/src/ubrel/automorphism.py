"""Automorphisms of H(m) realized as (2m+2)x(2m+2) matrices Omega.

An element is ``Omega(eps, delta, Sigma, z, iota)`` with ``eps = +-1``,
``delta != 0``, ``Sigma`` symplectic for ``zeta`` and inner part ``(z, iota)``::

    | delta Sigma                    0             z    |
    | -eps delta z^t zeta Sigma      eps delta^2   iota |
    | 0                              0             eps  |

It factors as ``Delta(eps, delta) . Sigma . Upsilon(z0, iota0)`` with
``z = delta Sigma z0`` and ``iota = eps delta^2 iota0``.  The ``eps delta``
factor in the lower-left block is what makes the set closed under products
and makes that factorization hold; ``auth_realize_unscaled`` keeps the form
without it for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, MembershipError, UsageError
from .heisenberg import HeisenbergElement, SymplecticMetric, h_from_matrix, h_realize
from .matrix_core import DEFAULT_TOL, Tolerance, mat_close, mat_exp, max_abs_diff, norm_inf


@dataclass(frozen=True, eq=False)
class AutHElement:
    epsilon: int
    delta: float
    Sigma: np.ndarray
    z: np.ndarray
    iota: float = 0.0

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise UsageError(f"epsilon must be +1 or -1, got {self.epsilon}")
        if not np.isfinite(self.delta) or self.delta == 0:
            raise UsageError("delta must be finite and nonzero")
        sigma = np.array(self.Sigma, dtype=float)
        z = np.array(self.z, dtype=float).ravel()
        if sigma.ndim != 2 or sigma.shape != (z.size, z.size) or z.size % 2 or z.size == 0:
            raise UsageError(f"Sigma {sigma.shape} and z ({z.size},) must be 2m x 2m and 2m")
        if not (np.all(np.isfinite(sigma)) and np.all(np.isfinite(z)) and np.isfinite(self.iota)):
            raise UsageError("automorphism parameters must be finite")
        object.__setattr__(self, "epsilon", int(self.epsilon))
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "Sigma", sigma)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "iota", float(self.iota))

    @property
    def m(self) -> int:
        return self.z.size // 2

    @classmethod
    def identity(cls, m: int) -> "AutHElement":
        return cls(1, 1.0, np.eye(2 * m), np.zeros(2 * m), 0.0)

    @classmethod
    def dilation(cls, epsilon: int, delta: float, m: int) -> "AutHElement":
        return cls(epsilon, delta, np.eye(2 * m), np.zeros(2 * m), 0.0)

    @classmethod
    def symplectic(cls, sigma) -> "AutHElement":
        sigma = np.asarray(sigma, dtype=float)
        return cls(1, 1.0, sigma, np.zeros(sigma.shape[0]), 0.0)

    @classmethod
    def inner(cls, e: HeisenbergElement) -> "AutHElement":
        return cls(1, 1.0, np.eye(2 * e.m), e.z, e.iota)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "Sigma": self.Sigma.tolist(),
            "z": self.z.tolist(),
            "iota": self.iota,
        }

    @classmethod
    def from_json(cls, obj) -> "AutHElement":
        try:
            el = cls(int(obj["epsilon"]), float(obj["delta"]), obj["Sigma"], obj["z"], float(obj["iota"]))
            m = int(obj["m"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed automorphism JSON: {exc}") from None
        if m != el.m:
            raise UsageError(f"declared m={m} but z has length {el.z.size}")
        return el


def is_symplectic(s, metric: SymplecticMetric, tol: Tolerance = DEFAULT_TOL) -> bool:
    s = np.asarray(s, dtype=float)
    if s.shape != metric.zeta.shape:
        raise UsageError(f"expected {metric.zeta.shape} matrix, got {s.shape}")
    return mat_close(s.T @ metric.zeta @ s, metric.zeta, tol)


def symplectic_inverse(s, metric: SymplecticMetric) -> np.ndarray:
    """``Sigma^-1 = zeta^-1 Sigma^t zeta``; no factorization needed."""
    zeta = metric.zeta
    return -zeta @ np.asarray(s).T @ zeta


def _validate(w: AutHElement, metric: SymplecticMetric, tol: Tolerance) -> None:
    if w.m != metric.m:
        raise UsageError(f"element has m={w.m}, metric has m={metric.m}")
    if not is_symplectic(w.Sigma, metric, tol):
        residual = max_abs_diff(w.Sigma.T @ metric.zeta @ w.Sigma, metric.zeta)
        raise MembershipError("Sigma is not symplectic", residual)


def auth_realize(w: AutHElement, metric: SymplecticMetric, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    _validate(w, metric, tol)
    m2 = 2 * w.m
    out = np.zeros((m2 + 2, m2 + 2))
    out[:m2, :m2] = w.delta * w.Sigma
    out[:m2, m2 + 1] = w.z
    out[m2, :m2] = -w.epsilon * w.delta * (w.z @ metric.zeta @ w.Sigma)
    out[m2, m2] = w.epsilon * w.delta**2
    out[m2, m2 + 1] = w.iota
    out[m2 + 1, m2 + 1] = w.epsilon
    return out


def auth_realize_unscaled(w: AutHElement, metric: SymplecticMetric) -> np.ndarray:
    """Variant whose lower-left block is ``-z^t zeta Sigma`` with no ``eps delta``.

    Only agrees with ``auth_realize`` when ``eps * delta == 1``.
    """
    out = auth_realize(w, metric)
    m2 = 2 * w.m
    out[m2, :m2] = -(w.z @ metric.zeta @ w.Sigma)
    return out


def auth_mul(a: AutHElement, b: AutHElement, metric: SymplecticMetric) -> AutHElement:
    """Closed-form product ``a . b``."""
    if a.m != metric.m or b.m != metric.m:
        raise UsageError("dimension mismatch between elements and metric")
    cross = a.z @ metric.zeta @ a.Sigma @ b.z
    return AutHElement(
        a.epsilon * b.epsilon,
        a.delta * b.delta,
        a.Sigma @ b.Sigma,
        b.epsilon * a.z + a.delta * (a.Sigma @ b.z),
        b.epsilon * a.iota + a.epsilon * a.delta**2 * b.iota - a.epsilon * a.delta * cross,
    )


def auth_inverse(a: AutHElement, metric: SymplecticMetric) -> AutHElement:
    sigma_inv = symplectic_inverse(a.Sigma, metric)
    return AutHElement(
        a.epsilon,
        1.0 / a.delta,
        sigma_inv,
        -a.epsilon / a.delta * (sigma_inv @ a.z),
        -a.iota / a.delta**2,
    )


def auth_close(a: AutHElement, b: AutHElement, atol: float = 1e-10) -> bool:
    return (
        a.epsilon == b.epsilon
        and abs(a.delta - b.delta) <= atol
        and max_abs_diff(a.Sigma, b.Sigma) <= atol
        and max_abs_diff(a.z, b.z) <= atol
        and abs(a.iota - b.iota) <= atol
    )


def decompose(w: AutHElement, metric: SymplecticMetric):
    """Split ``w`` as ``Delta(eps, delta) . Sigma . Upsilon(z0, iota0)``.

    Returns ``(dilation, symplectic, heisenberg_element)``.
    """
    sigma_inv = symplectic_inverse(w.Sigma, metric)
    z0 = sigma_inv @ w.z / w.delta
    iota0 = w.epsilon * w.iota / w.delta**2
    return (
        AutHElement.dilation(w.epsilon, w.delta, w.m),
        AutHElement.symplectic(w.Sigma),
        HeisenbergElement(z0, iota0),
    )


def auth_act(
    w: AutHElement, e: HeisenbergElement, metric: SymplecticMetric, tol: Tolerance = DEFAULT_TOL
) -> HeisenbergElement:
    """Conjugate ``Upsilon(e)`` by ``Omega(w)`` and read the result back.

    Raises ConsistencyError when the conjugate leaves H(m), which happens only
    for matrices that are not automorphisms.
    """
    omega = auth_realize(w, metric, tol)
    omega_inv = auth_realize(auth_inverse(w, metric), metric, tol)
    return h_from_matrix(omega @ h_realize(e, metric) @ omega_inv, metric, tol)


def auth_act_closed(w: AutHElement, e: HeisenbergElement, metric: SymplecticMetric) -> HeisenbergElement:
    """Closed form of the conjugation action.

    ``z -> eps delta Sigma z`` and ``iota -> delta^2 iota + 2 delta (zeta z_w) . (Sigma z)``.
    Conjugating by ``-Omega`` is the same map, which is why only ``eps * delta``
    enters the vector part.
    """
    sz = w.Sigma @ e.z
    return HeisenbergElement(
        w.epsilon * w.delta * sz,
        w.delta**2 * e.iota + 2.0 * w.delta * metric.form(w.z, sz),
    )


def conjugation_pattern_residual(omega, e: HeisenbergElement, metric: SymplecticMetric) -> float:
    """How far ``omega Upsilon omega^-1`` is from the H(m) block pattern."""
    omega = np.asarray(omega, dtype=float)
    g = omega @ h_realize(e, metric) @ np.linalg.inv(omega)
    m2 = 2 * metric.m
    nearest = h_realize(HeisenbergElement(g[:m2, m2 + 1], g[m2, m2 + 1]), metric)
    return float(np.max(np.abs(g - nearest)) / max(1.0, norm_inf(g)))


def random_symplectic(rng: np.random.Generator, metric: SymplecticMetric, scale: float = 0.5) -> np.ndarray:
    """``exp(zeta^-1 S)`` with S symmetric; entries of the generator lie in [-scale, scale]."""
    k = metric.zeta.shape[0]
    s = rng.uniform(-scale, scale, (k, k))
    s = np.triu(s) + np.triu(s, 1).T
    return mat_exp(-metric.zeta @ s)


def random_auth(
    rng: np.random.Generator, metric: SymplecticMetric, *, epsilon: int | None = None, inner: bool = True
) -> AutHElement:
    m = metric.m
    eps = int(rng.choice((-1, 1))) if epsilon is None else epsilon
    delta = float(rng.choice((-1.0, 1.0)) * rng.uniform(0.5, 2.0))
    z = rng.uniform(-2, 2, 2 * m) if inner else np.zeros(2 * m)
    iota = float(rng.uniform(-2, 2)) if inner else 0.0
    return AutHElement(eps, delta, random_symplectic(rng, metric), z, iota)


def check_is_automorphism(omega, metric: SymplecticMetric, rng: np.random.Generator, trials: int = 8) -> float:
    """Largest pattern residual over random conjugated elements."""
    worst = 0.0
    for _ in range(trials):
        e = HeisenbergElement(rng.uniform(-1, 1, 2 * metric.m), rng.uniform(-1, 1))
        worst = max(worst, conjugation_pattern_residual(omega, e, metric))
    return worst

