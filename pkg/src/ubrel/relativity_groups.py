"""The groups Ob(1,n) and Ub(1,n) acting on (x, p) in R^{2n+2}.

Block convention: a (2n+2)x(2n+2) matrix acts on ``(dx, dp)`` with ``dx`` in
the first n+1 slots.  Elements of Ub(1,n) are ``Gamma(Lambda, Xi) =
[[Lambda, 0], [Xi, Lambda]]`` with ``Lambda`` in O(1,n) and ``Xi`` satisfying

    Xi^t = eta Lambda^-1 Xi Lambda^-1 eta

which is the same as ``Lambda^t eta Xi`` being symmetric.  At ``Lambda = I``
this reduces to ``Xi^t = eta Xi eta``, the condition on the abelian normal
subgroup.  Every such ``Xi`` factors as ``Xi = X Lambda`` with ``X^t = eta X eta``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MembershipError, UsageError
from .heisenberg import SymplecticMetric
from .matrix_core import DEFAULT_TOL, Tolerance, as_mat, mat_exp, norm_inf


def minkowski(n: int) -> np.ndarray:
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    return np.diag(np.r_[-1.0, np.ones(n)])


@dataclass(frozen=True, eq=False)
class DegenerateMetric:
    """``eta_tilde = [[eta, 0], [0, 0]]``; only the dx half is measured."""

    n: int
    eta: np.ndarray = field(init=False, repr=False)
    eta_tilde: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        eta = minkowski(self.n)
        k = self.n + 1
        et = np.zeros((2 * k, 2 * k))
        et[:k, :k] = eta
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "eta_tilde", et)

    def interval(self, dz) -> float:
        dz = np.asarray(dz, dtype=float)
        return float(dz @ self.eta_tilde @ dz)


def _quadratic_residual(g: np.ndarray, form: np.ndarray) -> float:
    return float(np.max(np.abs(g.T @ form @ g - form)))


def _within(residual: float, scale: float, tol: Tolerance) -> bool:
    return residual <= tol.bound(scale)


# ---------------------------------------------------------------- Lorentz part


def lorentz_residual(L, eta) -> float:
    return _quadratic_residual(np.asarray(L, dtype=float), eta)


def is_lorentz(L, eta, tol: Tolerance = DEFAULT_TOL) -> bool:
    L = np.asarray(L, dtype=float)
    return _within(lorentz_residual(L, eta), norm_inf(L) ** 2, tol)


def xi_residual(L, X, eta) -> float:
    """Asymmetry of ``Lambda^t eta Xi``; zero exactly on Ub(1,n)."""
    s = np.asarray(L).T @ eta @ np.asarray(X)
    return float(np.max(np.abs(s - s.T)))


def abelian_residual(X, eta) -> float:
    """Residual of ``Xi^t = eta Xi eta``."""
    X = np.asarray(X, dtype=float)
    return float(np.max(np.abs(X.T - eta @ X @ eta)))


def index_form_residual(X, eta) -> float:
    """Residual of ``xi^a_b = eta^{a,d} eta_{b,c} xi^c_d`` written out by components."""
    X = np.asarray(X, dtype=float)
    eta_up = np.linalg.inv(eta)
    k = X.shape[0]
    worst = 0.0
    for a in range(k):
        for b in range(k):
            rhs = sum(eta_up[a, d] * eta[b, c] * X[c, d] for c in range(k) for d in range(k))
            worst = max(worst, abs(X[a, b] - rhs))
    return worst


# ---------------------------------------------------------------------- Ub(1,n)


@dataclass(frozen=True, eq=False)
class UbElement:
    Lambda: np.ndarray
    Xi: np.ndarray
    c: float = 1.0

    def __post_init__(self):
        L, X = as_mat(self.Lambda), as_mat(self.Xi)
        if L.shape != X.shape or L.shape[0] < 2:
            raise UsageError(f"Lambda {L.shape} and Xi {X.shape} must both be (n+1)x(n+1), n >= 1")
        if not (np.isfinite(self.c) and self.c > 0):
            raise UsageError("c must be positive")
        object.__setattr__(self, "Lambda", L)
        object.__setattr__(self, "Xi", X)
        object.__setattr__(self, "c", float(self.c))

    @property
    def n(self) -> int:
        return self.Lambda.shape[0] - 1

    @property
    def eta(self) -> np.ndarray:
        return minkowski(self.n)

    @classmethod
    def identity(cls, n: int, c: float = 1.0) -> "UbElement":
        return cls(np.eye(n + 1), np.zeros((n + 1, n + 1)), c)

    def matrix(self) -> np.ndarray:
        return block_matrix(self.Lambda, self.Xi, self.Lambda)

    def to_json(self) -> dict:
        return {"n": self.n, "c": self.c, "Lambda": self.Lambda.tolist(), "Xi": self.Xi.tolist()}

    @classmethod
    def from_json(cls, obj) -> "UbElement":
        try:
            el = cls(obj["Lambda"], obj["Xi"], float(obj["c"]))
            n = int(obj["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed Ub element JSON: {exc}") from None
        if n != el.n:
            raise UsageError(f"declared n={n} but blocks are {el.Lambda.shape}")
        return el


def block_matrix(L, X, A, B=None) -> np.ndarray:
    """``[[L, B], [X, A]]`` with ``B = 0`` by default."""
    L = np.asarray(L, dtype=float)
    k = L.shape[0]
    out = np.zeros((2 * k, 2 * k))
    out[:k, :k] = L
    out[k:, :k] = X
    out[k:, k:] = A
    if B is not None:
        out[:k, k:] = B
    return out


def ub_violations(g: UbElement) -> dict:
    eta = g.eta
    return {"lorentz": lorentz_residual(g.Lambda, eta), "xi": xi_residual(g.Lambda, g.Xi, eta)}


def ub_assemble(L, X, n: int, c: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> UbElement:
    """Validated constructor; raises MembershipError with the worst residual."""
    g = UbElement(L, X, c)
    if g.n != n:
        raise UsageError(f"blocks have n={g.n}, expected n={n}")
    v = ub_violations(g)
    scale_l = norm_inf(g.Lambda)
    if not _within(v["lorentz"], scale_l**2, tol):
        raise MembershipError("Lambda is not in O(1,n)", v["lorentz"])
    if not _within(v["xi"], scale_l * norm_inf(g.Xi), tol):
        raise MembershipError("Xi violates Xi^t = eta Lambda^-1 Xi Lambda^-1 eta", v["xi"])
    return g


def _check_pair(a: UbElement, b: UbElement) -> None:
    if a.n != b.n or a.c != b.c:
        raise UsageError(f"mismatched elements: n={a.n},{b.n} c={a.c},{b.c}")


def ub_mul(a: UbElement, b: UbElement) -> UbElement:
    _check_pair(a, b)
    return UbElement(a.Lambda @ b.Lambda, a.Xi @ b.Lambda + a.Lambda @ b.Xi, a.c)


def lorentz_inverse(L, eta) -> np.ndarray:
    return eta @ np.asarray(L).T @ eta


def ub_inverse(a: UbElement) -> UbElement:
    li = lorentz_inverse(a.Lambda, a.eta)
    return UbElement(li, -li @ a.Xi @ li, a.c)


def ub_conjugate(g: UbElement, x: UbElement) -> UbElement:
    return ub_mul(ub_mul(g, x), ub_inverse(g))


def ub_conjugate_abelian(g: UbElement, x: UbElement, tol: Tolerance = DEFAULT_TOL) -> UbElement:
    """``Gamma(L, X) Gamma(I, Xi) Gamma(L, X)^-1 = Gamma(I, L Xi L^-1)``."""
    _check_pair(g, x)
    if float(np.max(np.abs(x.Lambda - np.eye(x.n + 1)))) > tol.abs_eps:
        raise UsageError("second argument is not in the abelian subgroup (Lambda != I)")
    return UbElement(np.eye(x.n + 1), g.Lambda @ x.Xi @ lorentz_inverse(g.Lambda, g.eta), g.c)


def ub_close(a: UbElement, b: UbElement, atol: float = 1e-10) -> bool:
    return (
        a.n == b.n
        and float(np.max(np.abs(a.Lambda - b.Lambda))) <= atol
        and float(np.max(np.abs(a.Xi - b.Xi))) <= atol
    )


# ---------------------------------------------------------------------- Ob(1,n)


@dataclass(frozen=True, eq=False)
class ObElement:
    Lambda: np.ndarray
    Xi: np.ndarray
    A: np.ndarray

    def matrix(self) -> np.ndarray:
        return block_matrix(self.Lambda, self.Xi, self.A)


def ob_assemble(L, X, A, tol: Tolerance = DEFAULT_TOL) -> ObElement:
    L, X, A = as_mat(L), as_mat(X), as_mat(A)
    if not (L.shape == X.shape == A.shape):
        raise UsageError("Lambda, Xi and A must share a shape")
    eta = minkowski(L.shape[0] - 1)
    if not is_lorentz(L, eta, tol):
        raise MembershipError("Lambda is not in O(1,n)", lorentz_residual(L, eta))
    if abs(np.linalg.det(A)) < 1e-13 * max(1.0, norm_inf(A)) ** A.shape[0]:
        raise MembershipError("A is singular", abs(np.linalg.det(A)))
    return ObElement(L, X, A)


def ob_inverse(g: ObElement) -> ObElement:
    """``[[L, 0], [X, A]]^-1 = [[L^-1, 0], [-A^-1 X L^-1, A^-1]]``."""
    eta = minkowski(g.Lambda.shape[0] - 1)
    li = lorentz_inverse(g.Lambda, eta)
    ai = np.linalg.inv(g.A)
    return ObElement(li, -ai @ g.Xi @ li, ai)


# ----------------------------------------------------------------- predicates


def preserves_degenerate_metric(g, dm: DegenerateMetric, tol: Tolerance = DEFAULT_TOL) -> bool:
    g = np.asarray(g, dtype=float)
    if g.shape != dm.eta_tilde.shape:
        raise UsageError(f"expected {dm.eta_tilde.shape} matrix, got {g.shape}")
    return _within(_quadratic_residual(g, dm.eta_tilde), norm_inf(g) ** 2, tol)


def heisenberg_metric(n: int) -> SymplecticMetric:
    """``zeta = [[0, eta], [-eta, 0]]`` on (x, p) with the Minkowski eta."""
    return SymplecticMetric(np.diag(minkowski(n)))


def is_heisenberg_automorphism(g, metric: SymplecticMetric, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``g`` or ``-g`` preserves ``zeta`` (outer automorphism with Delta = +-I)."""
    g = np.asarray(g, dtype=float)
    if g.shape != metric.zeta.shape:
        raise UsageError(f"expected {metric.zeta.shape} matrix, got {g.shape}")
    bound = tol.bound(norm_inf(g) ** 2)
    # (-g)^t zeta (-g) == g^t zeta g, so one residual covers both signs
    return _quadratic_residual(g, metric.zeta) <= bound


# -------------------------------------------------------------------- sampling


def random_lorentz_algebra(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """``lambda = eta A`` with A antisymmetric, so ``lambda^t eta + eta lambda = 0``."""
    a = rng.uniform(-scale, scale, (n + 1, n + 1))
    a = np.triu(a, 1) - np.triu(a, 1).T
    return minkowski(n) @ a


def random_lorentz(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return mat_exp(random_lorentz_algebra(rng, n, scale))


def random_abelian(rng: np.random.Generator, n: int, scale: float = 10.0) -> np.ndarray:
    """``eta S`` with S symmetric, entries in [-scale, scale]."""
    s = rng.uniform(-scale, scale, (n + 1, n + 1))
    s = np.triu(s) + np.triu(s, 1).T
    return minkowski(n) @ s


def random_ub(rng: np.random.Generator, n: int, c: float = 1.0, lorentz_scale: float = 1.0,
              xi_scale: float = 10.0) -> UbElement:
    L = random_lorentz(rng, n, lorentz_scale)
    return UbElement(L, random_abelian(rng, n, xi_scale) @ L, c)


# ------------------------------------------------------------ intersection

CANDIDATE_KINDS = (
    "member",
    "lorentz_only",
    "general_xi",
    "other_lower_block",
    "eta_symmetric_xi",
    "scaled_lower_block",
    "reflected_lower_block",
)


def random_block_candidate(rng: np.random.Generator, n: int, kind: str | None = None):
    """Random ``(Lambda, Xi, A)`` with ``Lambda`` in O(1,n), mixing members and non-members.

    ``eta_symmetric_xi`` uses ``Xi = eta S`` without the ``Lambda`` factor, which
    satisfies ``Xi^t = eta Xi eta`` but is generally not in the group.
    """
    kind = kind or CANDIDATE_KINDS[int(rng.integers(len(CANDIDATE_KINDS)))]
    L = random_lorentz(rng, n)
    if rng.random() < 0.25:
        L = minkowski(n) @ L if rng.random() < 0.5 else -L
    valid = random_abelian(rng, n) @ L
    k = n + 1
    if kind == "member":
        return L, valid, L.copy(), kind
    if kind == "lorentz_only":
        return L, np.zeros((k, k)), L.copy(), kind
    if kind == "general_xi":
        return L, rng.uniform(-10, 10, (k, k)), L.copy(), kind
    if kind == "other_lower_block":
        return L, valid, L @ random_lorentz(rng, n), kind
    if kind == "eta_symmetric_xi":
        return L, random_abelian(rng, n), L.copy(), kind
    if kind == "scaled_lower_block":
        return L, valid, rng.uniform(1.1, 3.0) * L, kind
    if kind == "reflected_lower_block":
        return L, valid, -L, kind
    raise UsageError(f"unknown candidate kind {kind!r}")


def group_condition_holds(L, X, A, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``A = Lambda`` and ``Lambda^t eta Xi`` symmetric."""
    L, X, A = (np.asarray(v, dtype=float) for v in (L, X, A))
    eta = minkowski(L.shape[0] - 1)
    nl = norm_inf(L)
    return (
        float(np.max(np.abs(A - L))) <= tol.bound(nl)
        and xi_residual(L, X, eta) <= tol.bound(nl * norm_inf(X))
    )


def literal_condition_holds(L, X, A, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``A = Lambda`` and ``Xi^t = eta Xi eta`` with no ``Lambda`` dependence."""
    L, X, A = (np.asarray(v, dtype=float) for v in (L, X, A))
    eta = minkowski(L.shape[0] - 1)
    return (
        float(np.max(np.abs(A - L))) <= tol.bound(norm_inf(L))
        and abelian_residual(X, eta) <= tol.bound(norm_inf(X))
    )
