"""Weyl-Heisenberg group H(m) in its (2m+2)x(2m+2) unitriangular realization.

Coordinates are ``z`` in R^{2m} and a central coordinate ``iota``.  The
realization is::

    | I_2m      0  z    |
    | (zeta z)^t 1  iota |
    | 0         0  1    |

Multiplying two realizations gives the closed-form law implemented by
``h_mul``: the central coordinate picks up ``(zeta z_left) . z_right``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, UsageError
from .matrix_core import DEFAULT_TOL, Tolerance, norm_inf


@dataclass(frozen=True, eq=False)
class SymplecticMetric:
    """Antisymmetric form ``zeta = [[0, eta], [-eta, 0]]`` on R^{2m}."""

    eta: np.ndarray
    zeta: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        eta = np.array(self.eta, dtype=float)
        if eta.ndim == 1:
            eta = np.diag(eta)
        if eta.ndim != 2 or eta.shape[0] != eta.shape[1] or eta.shape[0] == 0:
            raise UsageError("eta must be a non-empty square matrix")
        diag = np.diag(eta)
        if np.any(eta - np.diag(diag)) or not np.all(np.isin(diag, (-1.0, 1.0))):
            raise UsageError("eta must be diagonal with entries +-1")
        m = eta.shape[0]
        zeta = np.zeros((2 * m, 2 * m))
        zeta[:m, m:] = eta
        zeta[m:, :m] = -eta
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "zeta", zeta)

    @property
    def m(self) -> int:
        return self.eta.shape[0]

    @classmethod
    def euclidean(cls, m: int) -> "SymplecticMetric":
        return cls(np.ones(m))

    @classmethod
    def minkowski(cls, m: int) -> "SymplecticMetric":
        """eta = diag(-1, 1, ..., 1)."""
        return cls(np.r_[-1.0, np.ones(m - 1)])

    def form(self, left, right) -> float:
        """The central cocycle ``(zeta left) . right``."""
        return float((self.zeta @ left) @ right)


@dataclass(frozen=True, eq=False)
class HeisenbergElement:
    z: np.ndarray
    iota: float = 0.0

    def __post_init__(self):
        z = np.array(self.z, dtype=float).ravel()
        if z.size == 0 or z.size % 2:
            raise UsageError(f"z must have even positive length, got {z.size}")
        if not (np.all(np.isfinite(z)) and np.isfinite(self.iota)):
            raise UsageError("Heisenberg coordinates must be finite")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "iota", float(self.iota))

    @property
    def m(self) -> int:
        return self.z.size // 2

    @classmethod
    def identity(cls, m: int) -> "HeisenbergElement":
        return cls(np.zeros(2 * m), 0.0)

    def to_json(self) -> dict:
        return {"m": self.m, "z": self.z.tolist(), "iota": self.iota}

    @classmethod
    def from_json(cls, obj) -> "HeisenbergElement":
        try:
            el = cls(obj["z"], obj["iota"])
            m = int(obj["m"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed Heisenberg element JSON: {exc}") from None
        if m != el.m:
            raise UsageError(f"declared m={m} but z has length {el.z.size}")
        return el


def _check(metric: SymplecticMetric, *elements: HeisenbergElement) -> None:
    for e in elements:
        if e.m != metric.m:
            raise UsageError(f"element has m={e.m}, metric has m={metric.m}")


def h_realize(e: HeisenbergElement, metric: SymplecticMetric) -> np.ndarray:
    _check(metric, e)
    m2 = 2 * e.m
    out = np.eye(m2 + 2)
    out[:m2, m2 + 1] = e.z
    out[m2, :m2] = metric.zeta @ e.z
    out[m2, m2 + 1] = e.iota
    return out


def h_from_matrix(g, metric: SymplecticMetric, tol: Tolerance = DEFAULT_TOL) -> HeisenbergElement:
    """Read (z, iota) back from a realization, checking the block pattern."""
    g = np.asarray(g, dtype=float)
    m2 = 2 * metric.m
    if g.shape != (m2 + 2, m2 + 2):
        raise UsageError(f"expected {(m2 + 2, m2 + 2)} matrix, got {g.shape}")
    e = HeisenbergElement(g[:m2, m2 + 1], g[m2, m2 + 1])
    residual = float(np.max(np.abs(g - h_realize(e, metric))))
    if residual > tol.bound(norm_inf(g)):
        raise ConsistencyError(f"matrix is not in H({metric.m}) (pattern residual {residual:.3e})")
    return e


def h_mul(a: HeisenbergElement, b: HeisenbergElement, metric: SymplecticMetric) -> HeisenbergElement:
    """Closed-form product ``a . b``."""
    _check(metric, a, b)
    return HeisenbergElement(a.z + b.z, a.iota + b.iota + metric.form(a.z, b.z))


def h_inverse(a: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(-a.z, -a.iota)


def h_commutator_phase(a: HeisenbergElement, b: HeisenbergElement, metric: SymplecticMetric) -> float:
    """Central coordinate of ``a b a^-1 b^-1``, equal to ``2 (zeta z_a) . z_b``."""
    _check(metric, a, b)
    return 2.0 * metric.form(a.z, b.z)


def h_close(a: HeisenbergElement, b: HeisenbergElement, atol: float = 1e-10) -> bool:
    return (
        a.m == b.m
        and float(np.max(np.abs(a.z - b.z))) <= atol
        and abs(a.iota - b.iota) <= atol
    )


def random_heisenberg(rng: np.random.Generator, m: int, scale: float = 2.0) -> HeisenbergElement:
    return HeisenbergElement(rng.uniform(-scale, scale, 2 * m), rng.uniform(-scale, scale))
