"""Generator bases and structure constants for ub(1,n) and related algebras.

Four algebras are supported:

``ub_covariant``
    Lorentz generators ``L_{a,b}`` (a<b) and abelian generators ``M_{a,b}``
    (a<=b), a, b in 0..n, realized in the (2n+2)-dim block form.
``ub_three``
    The same algebra in the rescaled basis ``J_{i,j}, K_i, N_i, R, Mo_{i,j}``
    with ``K_j = L_{0,j}/c``, ``R = M_{0,0}/c``, ``N_i = M_{i,0}``,
    ``Mo_{i,j} = M_{i,j}/c``.
``ubc_three``
    The c -> infinity contraction of ``ub_three`` (table only).
``u1n_covariant``
    The reciprocal algebra with force constant ``b`` (table only); its
    ``[M, M]`` bracket is ``-(1/b^2)`` times an all-plus eta combination of L.

Structure constants are stored densely as ``C[i, j, k]`` with
``[e_i, e_j] = sum_k C[i, j, k] e_k``.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureError, ConsistencyError, ConvergenceError, UsageError
from .matrix_core import DEFAULT_TOL, Tolerance

ALGEBRAS = ("ub_covariant", "ub_three", "ubc_three", "u1n_covariant")

# sign choices of the three-notation table; see three_notation_table
K_SIGN_MATRIX = -1.0
JM_SIGN_MATRIX = -1.0
K_SIGN_PRINTED = 1.0
JM_SIGN_PRINTED_FINITE = 1.0
JM_SIGN_PRINTED_LIMIT = -1.0


# ----------------------------------------------------------------- labels


def covariant_labels(n: int) -> list[str]:
    ls = [f"L_{a},{b}" for a in range(n + 1) for b in range(a + 1, n + 1)]
    ms = [f"M_{a},{b}" for a in range(n + 1) for b in range(a, n + 1)]
    return ls + ms


def three_labels(n: int) -> list[str]:
    js = [f"J_{i},{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    ks = [f"K_{i}" for i in range(1, n + 1)]
    ns = [f"N_{i}" for i in range(1, n + 1)]
    mos = [f"Mo_{i},{j}" for i in range(1, n + 1) for j in range(i, n + 1)]
    return js + ks + ns + ["R"] + mos


class _Terms:
    """Accumulates ``coeff * generator`` with label normalization.

    Antisymmetric families (L, J) drop diagonal labels and flip sign when the
    indices are out of order; symmetric families (M, Mo) sort their indices.
    """

    ANTI = ("L", "J")
    SYM = ("M", "Mo")

    def __init__(self):
        self.acc: dict[str, float] = {}

    def add(self, family: str, coeff: float, *idx: int) -> None:
        if coeff == 0:
            return
        if family in self.ANTI:
            a, b = idx
            if a == b:
                return
            if a > b:
                a, b, coeff = b, a, -coeff
            label = f"{family}_{a},{b}"
        elif family in self.SYM:
            a, b = sorted(idx)
            label = f"{family}_{a},{b}"
        elif idx:
            label = f"{family}_{idx[0]}"
        else:
            label = family
        self.acc[label] = self.acc.get(label, 0.0) + coeff


def _parse(label: str):
    fam, _, rest = label.partition("_")
    return fam, tuple(int(s) for s in rest.split(",")) if rest else ()


# ----------------------------------------------------------- bracket tables


@dataclass(frozen=True, eq=False)
class BracketTable:
    algebra: str
    n: int
    labels: tuple
    C: np.ndarray
    c: float | None = None
    b: float | None = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UsageError(f"unknown generator label {label!r} in {self.algebra}") from None

    def terms(self, i: int, j: int, cutoff: float = 0.0) -> list[tuple[int, float]]:
        row = self.C[i, j]
        return [(int(k), float(row[k])) for k in np.flatnonzero(np.abs(row) > cutoff)]

    def bracket_labels(self, x: str, y: str) -> dict[str, float]:
        return {self.labels[k]: v for k, v in self.terms(self.index(x), self.index(y))}

    def with_entry(self, x: str, y: str, z: str, coeff: float) -> "BracketTable":
        """Copy with ``C[x, y, z] = coeff`` and the antisymmetric partner set."""
        C = self.C.copy()
        i, j, k = self.index(x), self.index(y), self.index(z)
        C[i, j, k] = coeff
        C[j, i, k] = -coeff
        return BracketTable(self.algebra, self.n, self.labels, C, self.c, self.b)

    def to_json(self) -> dict:
        brackets = []
        for i, j in itertools.combinations(range(self.dim), 2):
            t = self.terms(i, j)
            if t:
                brackets.append({"i": i, "j": j, "terms": [{"k": k, "coeff": v} for k, v in t]})
        return {
            "algebra": self.algebra,
            "n": self.n,
            "c": self.c,
            "b": self.b,
            "labels": list(self.labels),
            "brackets": brackets,
        }

    @classmethod
    def from_json(cls, obj) -> "BracketTable":
        try:
            labels = tuple(obj["labels"])
            C = np.zeros((len(labels),) * 3)
            for br in obj["brackets"]:
                i, j = int(br["i"]), int(br["j"])
                for t in br["terms"]:
                    C[i, j, int(t["k"])] = float(t["coeff"])
                    C[j, i, int(t["k"])] = -float(t["coeff"])
            return cls(obj["algebra"], int(obj["n"]), labels, C, obj.get("c"), obj.get("b"))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise UsageError(f"malformed bracket table JSON: {exc}") from None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "k", "label_i", "label_j", "label_k", "coeff"])
        for i, j in itertools.combinations(range(self.dim), 2):
            for k, v in self.terms(i, j):
                w.writerow([i, j, k, self.labels[i], self.labels[j], self.labels[k], repr(v)])
        return buf.getvalue()


def _table_from_rule(algebra, n, labels, rule, c=None, b=None) -> BracketTable:
    pos = {lab: i for i, lab in enumerate(labels)}
    C = np.zeros((len(labels),) * 3)
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            for lab, v in rule(_parse(x), _parse(y)).items():
                C[i, j, pos[lab]] = v
    return BracketTable(algebra, n, tuple(labels), C, c, b)


def _minkowski_entry(a: int, b: int) -> float:
    if a != b:
        return 0.0
    return -1.0 if a == 0 else 1.0


def covariant_table(n: int, inv_b2: float = 0.0, algebra: str = "ub_covariant", b=None) -> BracketTable:
    """Covariant table; ``inv_b2 = 0`` gives ub(1,n), otherwise the reciprocal algebra."""
    eta = _minkowski_entry

    def rule(x, y):
        (fx, (a, b_)), (fy, (c_, d)) = x, y
        t = _Terms()
        if fx == "L" and fy == "L":
            t.add("L", -eta(a, c_), b_, d)
            t.add("L", eta(a, d), b_, c_)
            t.add("L", eta(b_, c_), a, d)
            t.add("L", -eta(b_, d), a, c_)
        elif fx == "L" and fy == "M":
            t.add("M", -eta(a, c_), b_, d)
            t.add("M", -eta(a, d), b_, c_)
            t.add("M", eta(b_, c_), a, d)
            t.add("M", eta(b_, d), a, c_)
        elif fx == "M" and fy == "L":
            return {k: -v for k, v in rule(y, x).items()}
        elif inv_b2:
            s = -inv_b2
            t.add("L", s * eta(a, c_), b_, d)
            t.add("L", s * eta(a, d), b_, c_)
            t.add("L", s * eta(b_, c_), a, d)
            t.add("L", s * eta(b_, d), a, c_)
        return t.acc

    return _table_from_rule(algebra, n, covariant_labels(n), rule, b=b)


def three_notation_table(
    n: int,
    inv_c2: float,
    k_sign: float = K_SIGN_MATRIX,
    jm_sign: float = JM_SIGN_MATRIX,
    algebra: str = "ub_three",
    c=None,
) -> BracketTable:
    """Three-notation table with two sign switches.

    ``k_sign`` multiplies the ``[K, N]``, ``[K, R]`` and ``[K, Mo]`` lines and
    ``jm_sign`` is the sign of the ``Mo_{j,l} delta_{i,k}`` term of ``[J, Mo]``.
    The defaults are the values fixed by the matrix realization.
    """
    d = lambda i, j: 1.0 if i == j else 0.0  # noqa: E731

    def rule(x, y):
        (fx, ix), (fy, iy) = x, y
        t = _Terms()
        if fx == "J" and fy == "J":
            (i, j), (k, l) = ix, iy
            t.add("J", -d(i, k), j, l)
            t.add("J", d(i, l), j, k)
            t.add("J", d(j, k), i, l)
            t.add("J", -d(j, l), i, k)
        elif fx == "J" and fy in ("K", "N"):
            (i, j), (k,) = ix, iy
            t.add(fy, -d(i, k), j)
            t.add(fy, d(j, k), i)
        elif fx == "K" and fy == "K":
            t.add("J", inv_c2, ix[0], iy[0])
        elif fx == "K" and fy == "N":
            i, k = ix[0], iy[0]
            t.add("Mo", -k_sign, i, k)
            t.add("R", -k_sign * d(i, k))
        elif fx == "K" and fy == "R":
            t.add("N", -2.0 * k_sign * inv_c2, ix[0])
        elif fx == "J" and fy == "Mo":
            (i, j), (k, l) = ix, iy
            t.add("Mo", jm_sign * d(i, k), j, l)
            t.add("Mo", -d(i, l), j, k)
            t.add("Mo", d(j, k), i, l)
            t.add("Mo", d(j, l), i, k)
        elif fx == "K" and fy == "Mo":
            i, (k, l) = ix[0], iy
            t.add("N", -k_sign * inv_c2 * d(i, k), l)
            t.add("N", -k_sign * inv_c2 * d(i, l), k)
        elif _ordered(fy, fx):
            return {lab: -v for lab, v in rule(y, x).items()}
        return t.acc

    return _table_from_rule(algebra, n, three_labels(n), rule, c=c)


_PRIMARY = {("J", "K"), ("J", "N"), ("J", "Mo"), ("K", "N"), ("K", "R"), ("K", "Mo"), ("K", "K"), ("J", "J")}


def _ordered(fx: str, fy: str) -> bool:
    return (fx, fy) in _PRIMARY


def printed_three_table(n: int, c: float) -> BracketTable:
    """The finite-c three-notation table with the signs as printed."""
    return three_notation_table(n, 1.0 / c**2, K_SIGN_PRINTED, JM_SIGN_PRINTED_FINITE, "ub_three_printed", c)


def printed_contracted_table(n: int) -> BracketTable:
    """The c -> infinity table with the signs as printed."""
    return three_notation_table(n, 0.0, K_SIGN_PRINTED, JM_SIGN_PRINTED_LIMIT, "ubc_three_printed")


# ------------------------------------------------------------- generators


def _eta(n: int) -> np.ndarray:
    return np.diag(np.r_[-1.0, np.ones(n)])


def lorentz_generator(n: int, a: int, b: int) -> np.ndarray:
    """``(L_{a,b})^i_j = delta^i_a eta_{b,j} - delta^i_b eta_{a,j}``."""
    eta = _eta(n)
    e = np.eye(n + 1)
    return np.outer(e[a], eta[b]) - np.outer(e[b], eta[a])


def abelian_generator(n: int, a: int, b: int) -> np.ndarray:
    eta = _eta(n)
    e = np.eye(n + 1)
    return np.outer(e[a], eta[b]) + np.outer(e[b], eta[a])


def _embed(n: int, lam=None, xi=None) -> np.ndarray:
    k = n + 1
    out = np.zeros((2 * k, 2 * k))
    if lam is not None:
        out[:k, :k] = lam
        out[k:, k:] = lam
    if xi is not None:
        out[k:, :k] = xi
    return out


def covariant_matrices(n: int) -> list[np.ndarray]:
    mats = []
    for lab in covariant_labels(n):
        fam, (a, b) = _parse(lab)
        if fam == "L":
            mats.append(_embed(n, lam=lorentz_generator(n, a, b)))
        else:
            mats.append(_embed(n, xi=abelian_generator(n, a, b)))
    return mats


def three_change_of_basis(n: int, c: float) -> np.ndarray:
    """Rows give each three-notation generator in the covariant basis."""
    cov = {lab: i for i, lab in enumerate(covariant_labels(n))}
    labs = three_labels(n)
    P = np.zeros((len(labs), len(cov)))
    for r, lab in enumerate(labs):
        fam, idx = _parse(lab)
        if fam == "J":
            P[r, cov[f"L_{idx[0]},{idx[1]}"]] = 1.0
        elif fam == "K":
            P[r, cov[f"L_0,{idx[0]}"]] = 1.0 / c
        elif fam == "N":
            P[r, cov[f"M_0,{idx[0]}"]] = 1.0
        elif fam == "R":
            P[r, cov["M_0,0"]] = 1.0 / c
        else:
            P[r, cov[f"M_{idx[0]},{idx[1]}"]] = 1.0 / c
    return P


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    name: str
    n: int
    labels: tuple
    table: BracketTable
    matrices: tuple | None = None
    c: float | None = None
    b: float | None = None
    leaks: tuple = field(default=())

    @property
    def dim(self) -> int:
        return len(self.labels)

    def vector(self, coeffs) -> "AlgebraVector":
        return AlgebraVector(self, coeffs)

    def unit(self, label: str) -> "AlgebraVector":
        v = np.zeros(self.dim)
        v[self.table.index(label)] = 1.0
        return AlgebraVector(self, v)

    def matrix_of(self, vec) -> np.ndarray:
        if self.matrices is None:
            raise UsageError(f"{self.name} has no matrix realization")
        coeffs = vec.coeffs if isinstance(vec, AlgebraVector) else np.asarray(vec, dtype=float)
        return np.tensordot(coeffs, np.array(self.matrices), axes=1)


@dataclass(frozen=True, eq=False)
class AlgebraVector:
    basis: GeneratorBasis
    coeffs: np.ndarray

    def __post_init__(self):
        v = np.array(self.coeffs, dtype=float).ravel()
        if v.size != self.basis.dim:
            raise UsageError(f"expected {self.basis.dim} coefficients, got {v.size}")
        object.__setattr__(self, "coeffs", v)

    def as_dict(self, cutoff: float = 0.0) -> dict[str, float]:
        return {lab: float(v) for lab, v in zip(self.basis.labels, self.coeffs) if abs(v) > cutoff}


def _positive(name, value):
    if value is None or not (value > 0):
        raise UsageError(f"{name} must be a positive number, got {value!r}")
    return float(value)


def build_basis(name: str, n: int, c: float | None = None, b: float | None = None) -> GeneratorBasis:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise UsageError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if name == "ub_covariant":
        table = covariant_table(n)
        return GeneratorBasis(name, n, table.labels, table, tuple(covariant_matrices(n)))
    if name == "ub_three":
        c = _positive("c", c)
        P = three_change_of_basis(n, c)
        mats = np.tensordot(P, np.array(covariant_matrices(n)), axes=1)
        table = three_notation_table(n, 1.0 / c**2, c=c)
        return GeneratorBasis(name, n, table.labels, table, tuple(mats), c=c)
    if name == "ubc_three":
        table = three_notation_table(n, 0.0, algebra="ubc_three", c=math.inf)
        return GeneratorBasis(name, n, table.labels, table, c=math.inf)
    if name == "u1n_covariant":
        b = _positive("b", b) if b != math.inf else math.inf
        inv_b2 = 0.0 if b == math.inf else 1.0 / b**2
        table = covariant_table(n, inv_b2, "u1n_covariant", b=b)
        return GeneratorBasis(name, n, table.labels, table, b=b)
    raise UsageError(f"unknown algebra {name!r}; expected one of {', '.join(ALGEBRAS)}")


def bracket(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector:
    if x.basis is not y.basis:
        raise UsageError("bracket of vectors from different bases")
    C = x.basis.table.C
    return AlgebraVector(x.basis, np.einsum("i,j,ijk->k", x.coeffs, y.coeffs, C))


def change_basis(table: BracketTable, P, labels, algebra: str | None = None) -> BracketTable:
    """Structure constants in the basis whose rows ``P`` are old-basis coordinates."""
    P = np.asarray(P, dtype=float)
    Pinv = np.linalg.inv(P)
    C = np.einsum("ia,jb,abc,ck->ijk", P, P, table.C, Pinv)
    C[np.abs(C) < 1e-14 * max(1.0, np.max(np.abs(C)))] = 0.0
    return BracketTable(algebra or table.algebra, table.n, tuple(labels), C, table.c, table.b)


# ----------------------------------------------------------- verification


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


@dataclass
class StructureReport:
    algebra: str
    n: int
    pairs_checked: int
    max_residual: float
    closure_error: float
    mismatched: list = field(default_factory=list)
    threshold: float = 1e-12

    @property
    def passed(self) -> bool:
        return not self.mismatched and self.max_residual <= self.threshold


def verify_structure_constants(
    basis: GeneratorBasis, tol: Tolerance = Tolerance(1e-12, 0.0), table: BracketTable | None = None
) -> StructureReport:
    """Decompose every matrix commutator in the basis and compare with the table.

    ``table`` overrides the basis table, which is how a corrupted table is fed
    in as a negative control.
    """
    if basis.matrices is None:
        raise UsageError(f"{basis.name} has no matrix realization to verify against")
    table = basis.table if table is None else table
    if table.labels != basis.labels:
        raise UsageError("table labels do not match the basis")
    mats = np.array(basis.matrices)
    A = mats.reshape(basis.dim, -1).T
    worst = closure = 0.0
    mismatched = []
    pairs = 0
    for i, j in itertools.combinations(range(basis.dim), 2):
        pairs += 1
        target = commutator(mats[i], mats[j]).ravel()
        coeffs, *_ = np.linalg.lstsq(A, target, rcond=None)
        res = float(np.max(np.abs(A @ coeffs - target))) if target.size else 0.0
        closure = max(closure, res)
        if res > tol.bound(float(np.max(np.abs(target)))):
            raise ClosureError(f"[{basis.labels[i]}, {basis.labels[j]}] leaves the span (residual {res:.3e})")
        diff = float(np.max(np.abs(coeffs - table.C[i, j])))
        worst = max(worst, diff)
        if diff > tol.abs_eps:
            mismatched.append((basis.labels[i], basis.labels[j], diff))
    return StructureReport(basis.name, basis.n, pairs, worst, closure, mismatched, tol.abs_eps)


def antisymmetry_residual(table: BracketTable) -> float:
    return float(np.max(np.abs(table.C + table.C.transpose(1, 0, 2)))) if table.dim else 0.0


def jacobi_check(table: BracketTable) -> float:
    """Max over all triples of ``|[x,[y,z]] + [y,[z,x]] + [z,[x,y]]|``."""
    C = table.C
    # [e_i, [e_j, e_k]] = C[j,k,m] C[i,m,l]
    nested = np.einsum("jkm,iml->ijkl", C, C)
    total = nested + nested.transpose(1, 2, 0, 3) + nested.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(total))) if total.size else 0.0


def subtable(table: BracketTable, labels) -> BracketTable:
    idx = [table.index(lab) for lab in labels]
    return BracketTable(table.algebra, table.n, tuple(labels), table.C[np.ix_(idx, idx, idx)], table.c, table.b)


def sign_discrepancy_report(n: int, c: float = 2.0) -> dict:
    """Compare the printed three-notation tables with the matrix realization.

    Returns which bracket families disagree and which printed ``[J, Mo]`` sign
    agrees with the matrices.
    """
    basis = build_basis("ub_three", n, c=c)
    printed = printed_three_table(n, c)
    rep = verify_structure_constants(basis, table=printed)
    families = sorted({_family_pair(a, b) for a, b, _ in rep.mismatched})
    jm_match = {}
    for name, sign in (("finite", JM_SIGN_PRINTED_FINITE), ("contracted", JM_SIGN_PRINTED_LIMIT)):
        t = three_notation_table(n, 1.0 / c**2, K_SIGN_MATRIX, sign, c=c)
        r = verify_structure_constants(basis, table=t)
        jm_match[name] = not any(_family_pair(a, b) == "J,Mo" for a, b, _ in r.mismatched)
    normative = verify_structure_constants(basis)
    return {
        "n": n,
        "c": c,
        "normative_passes": normative.passed,
        "normative_max_residual": normative.max_residual,
        "printed_mismatched_families": families,
        "printed_mismatched_pairs": len(rep.mismatched),
        "jm_first_sign_matches": jm_match,
        "k_sign": "matrices give the printed K-lines with opposite sign (K -> -K)",
    }


def _family_pair(a: str, b: str) -> str:
    return f"{_parse(a)[0]},{_parse(b)[0]}"


# ----------------------------------------------------------- contraction


@dataclass
class ContractionReport:
    family: str
    n: int
    values: list
    deviations: list
    ratios: list
    fitted_order: float | None


def _deviation(table: BracketTable, limit: BracketTable) -> float:
    return float(np.linalg.norm((table.C - limit.C).ravel()))


def contract(family: str, n: int, values) -> ContractionReport:
    """Deviation of the finite-parameter table from its limit.

    ``family`` is ``"ub_three"`` (parameter c, limit ubc_three) or
    ``"u1n_covariant"`` (parameter b, limit ub_covariant).  ``math.inf`` is
    accepted and compares the limit with itself.
    """
    values = [float(v) for v in values]
    if not values or any(v <= 0 for v in values) or any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError("contraction values must be positive and strictly increasing")
    if family == "ub_three":
        limit = build_basis("ubc_three", n).table

        def at(v):
            return three_notation_table(n, 0.0 if v == math.inf else 1.0 / v**2)
    elif family == "u1n_covariant":
        limit = build_basis("ub_covariant", n).table

        def at(v):
            return covariant_table(n, 0.0 if v == math.inf else 1.0 / v**2)
    else:
        raise UsageError(f"no contraction defined for {family!r}")
    devs = [_deviation(at(v), limit) for v in values]
    if any(b > a for a, b in zip(devs, devs[1:])):
        raise ConvergenceError(f"deviations are not monotone: {devs}")
    ratios = [b / a if a > 0 else 0.0 for a, b in zip(devs, devs[1:])]
    finite = [(v, d) for v, d in zip(values, devs) if math.isfinite(v) and d > 0]
    order = None
    if len(finite) >= 2:
        x = np.log([v for v, _ in finite])
        y = np.log([d for _, d in finite])
        order = float(-np.polyfit(x, y, 1)[0])
    return ContractionReport(family, n, values, devs, ratios, order)


# ----------------------------------------------------------- hamilton


def hamilton_labels(n: int) -> list[str]:
    return [lab for lab in three_labels(n) if not lab.startswith("Mo_")]


def hamilton_subalgebra(basis: GeneratorBasis, strict: bool = False) -> GeneratorBasis:
    """The ``{J, K, N, R}`` part of the contracted algebra.

    Brackets of these generators can land on ``Mo``; since ``Mo`` spans an
    ideal, the result is taken modulo that ideal and every dropped component
    is listed in ``leaks`` as ``(x, y, Mo-label, coeff)``.  With ``strict``
    any leak raises ConsistencyError.
    """
    if basis.name != "ubc_three":
        raise UsageError("hamilton_subalgebra expects the ubc_three basis")
    table = basis.table
    mo = [lab for lab in table.labels if lab.startswith("Mo_")]
    mo_idx = [table.index(lab) for lab in mo]
    keep = hamilton_labels(basis.n)
    keep_idx = [table.index(lab) for lab in keep]
    # Mo must be an ideal for the quotient to exist
    for k in mo_idx:
        for j in range(table.dim):
            stray = [m for m in np.flatnonzero(table.C[k, j]) if m not in mo_idx]
            if stray:
                raise ConsistencyError(f"Mo span is not an ideal: [{table.labels[k]}, {table.labels[j]}]")
    leaks = []
    for i, j in itertools.combinations(keep_idx, 2):
        for m in mo_idx:
            if table.C[i, j, m] != 0:
                leaks.append((table.labels[i], table.labels[j], table.labels[m], float(table.C[i, j, m])))
    if strict and leaks:
        x, y, z, v = leaks[0]
        raise ConsistencyError(f"[{x}, {y}] has component {v:+g} on {z}, outside the Hamilton span")
    sub = subtable(table, keep)
    sub = BracketTable("hamilton", basis.n, sub.labels, sub.C, table.c, None)
    return GeneratorBasis("hamilton", basis.n, sub.labels, sub, c=basis.c, leaks=tuple(leaks))
