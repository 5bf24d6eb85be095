"""Physical parameters of Ub(1,n): velocity, force, power and stress.

Three-notation coordinates ``(t, q, p, e)`` map to covariant ones by
``x = (t, q/c)`` and ``p = (e/c, p)``.  Group elements are built from
``KinematicParams`` as ``Gamma(Lambda, Xi)`` with ``Lambda = B(beta) R(alpha)``
in covariant form and ``Xi`` chosen so that

* its first column is ``gamma (r/c, f)``, i.e. the frame's four-force, and
* the symmetric part of its spatial block is ``gamma m / c``,

while staying in the group (``Lambda^t eta Xi`` symmetric).  At ``v = 0``
this is exactly ``stress_block``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, NumericError, UnsupportedComponentError, UsageError
from .matrix_core import mat_exp, mat_log
from .relativity_groups import UbElement, abelian_residual, lorentz_inverse, minkowski, ub_mul


def _vec(x, n, name):
    v = np.array(x, dtype=float).ravel()
    if v.size != n or not np.all(np.isfinite(v)):
        raise UsageError(f"{name} must be {n} finite numbers")
    return v


def _square(x, n, name):
    a = np.array(x, dtype=float).reshape(n, n) if np.size(x) == n * n else None
    if a is None or not np.all(np.isfinite(a)):
        raise UsageError(f"{name} must be a finite {n}x{n} matrix")
    return a


@dataclass(frozen=True, eq=False)
class KinematicParams:
    """Rotation angles, rapidity, force, power and stress of a frame change."""

    n: int
    c: float = 1.0
    alpha: np.ndarray = None
    beta: np.ndarray = None
    f: np.ndarray = None
    r: float = 0.0
    m_stress: np.ndarray = None

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise UsageError(f"n must be a positive integer, got {n!r}")
        if not (np.isfinite(self.c) and self.c > 0):
            raise UsageError("c must be positive")
        alpha = np.zeros((n, n)) if self.alpha is None else _square(self.alpha, n, "alpha")
        m = np.zeros((n, n)) if self.m_stress is None else _square(self.m_stress, n, "m_stress")
        if np.max(np.abs(alpha + alpha.T)) > 1e-12 * max(1.0, np.max(np.abs(alpha))):
            raise UsageError("alpha must be antisymmetric")
        if np.max(np.abs(m - m.T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
            raise UsageError("m_stress must be symmetric")
        beta = np.zeros(n) if self.beta is None else _vec(self.beta, n, "beta")
        f = np.zeros(n) if self.f is None else _vec(self.f, n, "f")
        if not np.isfinite(self.r):
            raise UsageError("r must be finite")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "m_stress", m)

    @classmethod
    def from_velocity(cls, v, c: float = 1.0, **kw) -> "KinematicParams":
        v = np.atleast_1d(np.asarray(v, dtype=float))
        speed = float(np.linalg.norm(v))
        if speed >= c:
            raise UsageError(f"|v| = {speed} must be below c = {c}")
        beta = np.zeros_like(v) if speed == 0 else v / speed * math.atanh(speed / c)
        return cls(v.size, c, beta=beta, **kw)

    @property
    def rapidity(self) -> float:
        return float(np.linalg.norm(self.beta))

    @property
    def gamma(self) -> float:
        return math.cosh(self.rapidity)

    @property
    def v(self) -> np.ndarray:
        b = self.rapidity
        return np.zeros(self.n) if b == 0 else self.c * math.tanh(b) * self.beta / b

    def with_c(self, c: float) -> "KinematicParams":
        """Same velocity, force, power, stress and rotation at another c."""
        return KinematicParams.from_velocity(self.v, c, alpha=self.alpha, f=self.f, r=self.r, m_stress=self.m_stress)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "c": self.c,
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
            "v": self.v.tolist(),
            "f": self.f.tolist(),
            "r": self.r,
            "m": self.m_stress.tolist(),
        }

    @classmethod
    def from_json(cls, obj) -> "KinematicParams":
        """Accepts either ``beta`` or ``v``; missing fields default to zero."""
        try:
            n = int(obj["n"])
            c = float(obj.get("c", 1.0))
            kw = {
                "alpha": obj.get("alpha"),
                "f": obj.get("f"),
                "r": float(obj.get("r", 0.0)),
                "m_stress": obj.get("m", obj.get("m_stress")),
            }
            if "beta" in obj:
                return cls(n, c, beta=obj["beta"], **kw)
            v = obj.get("v", [0.0] * n)
            v = np.atleast_1d(np.asarray(v, dtype=float))
            if v.size != n:
                raise UsageError(f"v must have {n} entries")
            return cls.from_velocity(v, c, **kw)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed params JSON: {exc}") from None


@dataclass(frozen=True, eq=False)
class PhaseDifferential:
    n: int
    c: float
    dt: float
    dq: np.ndarray
    dp: np.ndarray
    de: float

    def __post_init__(self):
        object.__setattr__(self, "dq", _vec(self.dq, self.n, "dq"))
        object.__setattr__(self, "dp", _vec(self.dp, self.n, "dp"))
        if not (np.isfinite(self.dt) and np.isfinite(self.de)):
            raise UsageError("dt and de must be finite")
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "de", float(self.de))

    def covariant(self) -> tuple[np.ndarray, np.ndarray]:
        return np.r_[self.dt, self.dq / self.c], np.r_[self.de / self.c, self.dp]

    @classmethod
    def from_covariant(cls, dx, dp, c: float) -> "PhaseDifferential":
        dx, dp = np.asarray(dx, dtype=float), np.asarray(dp, dtype=float)
        return cls(dx.size - 1, c, dx[0], c * dx[1:], dp[1:], c * dp[0])

    def proper_time_sq(self) -> float:
        return self.dt**2 - float(self.dq @ self.dq) / self.c**2

    def as_array(self) -> np.ndarray:
        return np.r_[self.dt, self.dq, self.dp, self.de]

    def to_json(self) -> dict:
        return {"n": self.n, "c": self.c, "dt": self.dt, "dq": self.dq.tolist(), "dp": self.dp.tolist(), "de": self.de}

    @classmethod
    def from_json(cls, obj) -> "PhaseDifferential":
        try:
            return cls(int(obj["n"]), float(obj["c"]), obj["dt"], obj["dq"], obj["dp"], obj["de"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed differential JSON: {exc}") from None


# ------------------------------------------------------------------ Lorentz


def boost_matrix(beta, c: float, n: int) -> np.ndarray:
    """Pure boost acting on ``(t, q)``; the ``1/c`` and ``c`` factors sit off-diagonal."""
    beta = _vec(beta, n, "beta")
    b = float(np.linalg.norm(beta))
    out = np.eye(n + 1)
    if b == 0:
        return out
    u = beta / b
    out[0, 0] = math.cosh(b)
    out[0, 1:] = math.sinh(b) * u / c
    out[1:, 0] = c * math.sinh(b) * u
    out[1:, 1:] += (math.cosh(b) - 1.0) * np.outer(u, u)
    return out


def _scaling(n: int, c: float) -> np.ndarray:
    return np.diag(np.r_[1.0, np.full(n, c)])


def to_covariant(L, c: float) -> np.ndarray:
    """``(t, q)`` matrix to the ``(t, q/c)`` matrix, which is then in O(1,n)."""
    L = np.asarray(L, dtype=float)
    D = _scaling(L.shape[0] - 1, c)
    return np.linalg.solve(D, L @ D)


def from_covariant(L, c: float) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    D = _scaling(L.shape[0] - 1, c)
    return D @ L @ np.linalg.inv(D)


def rotation_matrix(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    return mat_exp(alpha) if alpha.size else np.eye(0)


def lorentz_matrix(alpha, beta, n: int) -> np.ndarray:
    """Covariant ``B(beta) R(alpha)``."""
    B = to_covariant(boost_matrix(beta, 1.0, n), 1.0)
    R = np.eye(n + 1)
    R[1:, 1:] = rotation_matrix(alpha)
    return B @ R


def stress_block(params: KinematicParams) -> np.ndarray:
    """``gamma [[r/c, -f_i], [f^j, m^{j,i}/c]]`` on the covariant indices."""
    p = params
    n = p.n
    xi = np.zeros((n + 1, n + 1))
    xi[0, 0] = p.r / p.c
    xi[0, 1:] = -p.f
    xi[1:, 0] = p.f
    xi[1:, 1:] = p.m_stress.T / p.c
    xi *= p.gamma
    eta = minkowski(n)
    if abelian_residual(xi, eta) > 1e-12 * max(1.0, float(np.max(np.abs(xi)))):
        raise ConsistencyError("stress block violates Xi^t = eta Xi eta")
    return xi


# ------------------------------------------------------- params <-> group


def _sym_basis(k: int):
    return [(a, b) for a in range(k) for b in range(a, k)]


def _xi_for(L: np.ndarray, column: np.ndarray, spatial_sym: np.ndarray) -> np.ndarray:
    """Solve for symmetric S with ``Xi = L eta S`` matching the constraints."""
    k = L.shape[0]
    Le = L @ minkowski(k - 1)
    pairs = _sym_basis(k)
    rows, rhs = [], []
    basis = []
    for a, b in pairs:
        S = np.zeros((k, k))
        S[a, b] = S[b, a] = 1.0
        basis.append(Le @ S)
    for i in range(k):
        rows.append([X[i, 0] for X in basis])
        rhs.append(column[i])
    for i in range(1, k):
        for j in range(i, k):
            rows.append([0.5 * (X[i, j] + X[j, i]) for X in basis])
            rhs.append(spatial_sym[i - 1, j - 1])
    A = np.array(rows)
    try:
        coef = np.linalg.solve(A, np.array(rhs))
    except np.linalg.LinAlgError:
        raise NumericError("stress parametrization is singular for this Lorentz block") from None
    return sum(cf * X for cf, X in zip(coef, basis))


def ub_from_params(params: KinematicParams) -> UbElement:
    p = params
    L = lorentz_matrix(p.alpha, p.beta, p.n)
    g = p.gamma
    column = g * np.r_[p.r / p.c, p.f]
    return UbElement(L, _xi_for(L, column, g * p.m_stress / p.c), p.c)


def extract_params(g: UbElement) -> KinematicParams:
    """Inverse of ``ub_from_params`` on the identity component of O(1,n)."""
    L, X, n, c = g.Lambda, g.Xi, g.n, g.c
    if np.linalg.det(L) < 0 or L[0, 0] < 1.0 - 1e-12:
        raise UnsupportedComponentError("only the identity component of O(1,n) is parametrized")
    u = L[1:, 0]
    s = float(np.linalg.norm(u))
    beta = np.zeros(n) if s == 0 else u / s * math.asinh(s)
    B = lorentz_matrix(np.zeros((n, n)), beta, n)
    R = lorentz_inverse(B, minkowski(n)) @ L
    if n > 1:
        try:
            alpha = mat_log(R[1:, 1:])
        except NumericError:
            raise UnsupportedComponentError("rotation angle at pi has no unique parameters") from None
        alpha = 0.5 * (alpha - alpha.T)
    else:
        alpha = np.zeros((1, 1))
    gamma = L[0, 0]
    sp = X[1:, 1:]
    return KinematicParams(
        n,
        c,
        alpha=alpha,
        beta=beta,
        f=X[1:, 0] / gamma,
        r=c * X[0, 0] / gamma,
        m_stress=c * 0.5 * (sp + sp.T) / gamma,
    )


def params_close(a: KinematicParams, b: KinematicParams, rtol: float = 1e-9) -> bool:
    def close(x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        return bool(np.all(np.abs(x - y) <= rtol * np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))))

    return (
        a.n == b.n
        and close(a.c, b.c)
        and close(a.v, b.v)
        and close(a.f, b.f)
        and close(a.r, b.r)
        and close(a.m_stress, b.m_stress)
        and close(a.alpha, b.alpha)
    )


# ------------------------------------------------------------ composition


def _n1(p: KinematicParams):
    if p.n != 1:
        raise UsageError("the closed-form composition covers n = 1 only")
    return float(p.v[0]), float(p.f[0]), p.r, float(p.m_stress[0, 0])


def compose_closed(a: KinematicParams, b: KinematicParams) -> KinematicParams:
    """Closed-form n=1 composition of ``a`` followed on the right by ``b``."""
    if a.c != b.c:
        raise UsageError("parameters use different c")
    c = a.c
    v1, f1, r1, m1 = _n1(a)
    v2, f2, r2, m2 = _n1(b)
    k = v1 * v2 / c**2
    d = 1.0 + k
    v = (v1 + v2) / d
    f = (f1 + f2 + (m1 * v2 + v1 * r2) / c**2) / d
    r = (r1 + r2 - v2 * f1 + v1 * f2 + k * (r1 + m1)) / d
    m = (m1 + m2 + v2 * f1 - v1 * f2 + k * (r2 + m2)) / d
    if abs(v) >= c:
        raise ConsistencyError(f"composed speed {v} reached c")
    return KinematicParams.from_velocity([v], c, f=[f], r=r, m_stress=[[m]])


def compose_printed(a: KinematicParams, b: KinematicParams) -> KinematicParams:
    """The n=1 laws in the form usually quoted, kept for comparison only.

    The f, r and m lines here are not the group law; see ``compose_closed``.
    """
    c = a.c
    v1, f1, r1, m1 = _n1(a)
    v2, f2, r2, m2 = _n1(b)
    d = 1.0 + v1 * v2 / c**2
    return KinematicParams.from_velocity(
        [(v1 + v2) / d],
        c,
        f=[(f2 + f1 + (r1 * v2 - v1 * r2) / c**2) / d],
        r=(r2 + r1 - f1 * v2 + v1 * f2) / d,
        m_stress=[[(m2 + m1 + f1 * v2 - v1 * f2) / d]],
    )


def compose_matrix(a: KinematicParams, b: KinematicParams) -> KinematicParams:
    if a.n != b.n or a.c != b.c:
        raise UsageError("parameters differ in n or c")
    out = extract_params(ub_mul(ub_from_params(a), ub_from_params(b)))
    if float(np.linalg.norm(out.v)) >= a.c:
        raise ConsistencyError("composed speed reached c")
    return out


def compose_params(a: KinematicParams, b: KinematicParams, method: str = "matrix") -> KinematicParams:
    if method == "matrix":
        return compose_matrix(a, b)
    if method == "closed":
        return compose_closed(a, b)
    raise UsageError(f"unknown composition method {method!r}")


# ------------------------------------------------------- transformations


def transform_differential(g: UbElement, d: PhaseDifferential) -> PhaseDifferential:
    if g.n != d.n or g.c != d.c:
        raise UsageError(f"element (n={g.n}, c={g.c}) and differential (n={d.n}, c={d.c}) differ")
    dx, dp = d.covariant()
    return PhaseDifferential.from_covariant(g.Lambda @ dx, g.Lambda @ dp + g.Xi @ dx, d.c)


def transform_stress(g: UbElement, xi, tol: float = 1e-10) -> np.ndarray:
    """``Lambda xi Lambda^-1`` for a ``xi`` with ``xi^t = eta xi eta``."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != g.Lambda.shape:
        raise UsageError(f"xi must be {g.Lambda.shape}")
    eta = g.eta
    if abelian_residual(xi, eta) > tol * max(1.0, float(np.max(np.abs(xi)))):
        raise UsageError("xi violates xi^t = eta xi eta")
    return g.Lambda @ xi @ lorentz_inverse(g.Lambda, eta)


def mass_rate(g: UbElement, V, F) -> float:
    """Change in ``d mu^2 / d tau^2`` under ``g`` for four-velocity V and four-force F."""
    V, F = np.asarray(V, dtype=float), np.asarray(F, dtype=float)
    k = g.n + 1
    if V.shape != (k,) or F.shape != (k,):
        raise UsageError(f"V and F must have {k} components")
    xv = g.Xi @ V
    return float(xv @ g.eta @ (xv + 2.0 * g.Lambda @ F)) / g.c**2


def mass_sq_rate(g: UbElement, V, F) -> float:
    """``d mu~^2 / d tau^2`` from the transformed covariant momentum rate."""
    dp = g.Lambda @ np.asarray(F, dtype=float) + g.Xi @ np.asarray(V, dtype=float)
    return float(dp @ g.eta @ dp) / g.c**2


def classical_limit_table(params: KinematicParams, d: PhaseDifferential) -> PhaseDifferential:
    """The c -> infinity transformation with the same v, f, r and rotation."""
    R = rotation_matrix(params.alpha)
    v, f = params.v, params.f
    rq, rp = R @ d.dq, R @ d.dp
    return PhaseDifferential(
        d.n,
        d.c,
        d.dt,
        rq + v * d.dt,
        rp + f * d.dt,
        d.de + float(v @ rp) - float(f @ rq) + params.r * d.dt,
    )


def classical_limit_transform(params: KinematicParams, d: PhaseDifferential, c_large: float) -> PhaseDifferential:
    """Finite-c transformation at ``c_large``, holding v, f, r, m and rotation fixed."""
    p = params.with_c(c_large)
    dd = PhaseDifferential(d.n, c_large, d.dt, d.dq, d.dp, d.de)
    return transform_differential(ub_from_params(p), dd)


def relative_deviation(a: PhaseDifferential, b: PhaseDifferential) -> float:
    x, y = a.as_array(), b.as_array()
    return float(np.max(np.abs(x - y)) / max(1e-300, np.max(np.abs(y))))


# ---------------------------------------------------------------- worldline


@dataclass(frozen=True, eq=False)
class Worldline:
    """Samples ``(tau, x^a, p^a)`` in covariant coordinates."""

    tau: np.ndarray
    x: np.ndarray
    p: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float).ravel()
        x, p = np.atleast_2d(np.asarray(self.x, dtype=float)), np.atleast_2d(np.asarray(self.p, dtype=float))
        if x.shape != p.shape or x.shape[0] != tau.size or x.shape[1] < 2:
            raise UsageError("x and p must be (samples, n+1) matching tau")
        if tau.size < 3 or np.any(np.diff(tau) <= 0):
            raise UsageError("tau must be strictly increasing with at least 3 samples")
        if not (np.all(np.isfinite(tau)) and np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
            raise UsageError("worldline samples must be finite")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", x.shape[1] - 1)

    @classmethod
    def sample(cls, x_of, p_of, tau0: float, span: float, count: int = 3) -> "Worldline":
        tau = np.linspace(tau0 - span / 2, tau0 + span / 2, count)
        return cls(tau, np.array([x_of(t) for t in tau]), np.array([p_of(t) for t in tau]))

    def rates(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Central-difference ``(dx/dtau, dp/dtau)`` at interior sample ``i``."""
        if not 0 < i < self.tau.size - 1:
            raise UsageError("central differences need an interior sample")
        h = self.tau[i + 1] - self.tau[i - 1]
        return (self.x[i + 1] - self.x[i - 1]) / h, (self.p[i + 1] - self.p[i - 1]) / h

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        k = self.n + 1
        w.writerow(["tau"] + [f"x{a}" for a in range(k)] + [f"p{a}" for a in range(k)])
        for t, xr, pr in zip(self.tau, self.x, self.p):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in xr] + [repr(float(v)) for v in pr])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Worldline":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0][0] != "tau":
            raise UsageError("worldline CSV needs a header starting with 'tau'")
        try:
            data = np.array([[float(v) for v in r] for r in rows[1:]])
        except ValueError as exc:
            raise UsageError(f"bad worldline CSV: {exc}") from None
        k = (len(rows[0]) - 1) // 2
        return cls(data[:, 0], data[:, 1 : 1 + k], data[:, 1 + k :])


def finite_difference_mass_rate(g: UbElement, wl: Worldline, i: int = 1) -> float:
    """``d mu~^2/d tau^2 - d mu^2/d tau^2`` from sampled differentials."""
    V, F = wl.rates(i)
    dp_new = g.Lambda @ F + g.Xi @ V
    eta = g.eta
    return float(dp_new @ eta @ dp_new - F @ eta @ F) / g.c**2
