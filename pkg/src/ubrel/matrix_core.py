"""Dense real matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of shape ``(k, k)`` and dtype
float64.  ``as_mat`` is the single gate that validates shape and finiteness;
everything else assumes its input went through it.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericError, UsageError

EXP_MAX_TERMS = 60
SINGULAR_PIVOT = 1e-13


@dataclass(frozen=True)
class Tolerance:
    """Closeness threshold ``abs_eps + rel_eps * scale``."""

    abs_eps: float = 1e-10
    rel_eps: float = 1e-10

    def __post_init__(self):
        if self.abs_eps < 0 or self.rel_eps < 0:
            raise UsageError("tolerances must be non-negative")
        if self.abs_eps == 0 and self.rel_eps == 0:
            raise UsageError("at least one tolerance must be positive")

    def bound(self, scale: float) -> float:
        return self.abs_eps + self.rel_eps * scale


DEFAULT_TOL = Tolerance()


def as_mat(x, dim: int | None = None) -> np.ndarray:
    a = np.array(x, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise UsageError(f"expected a non-empty square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise UsageError(f"expected dimension {dim}, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise UsageError("matrix has non-finite entries")
    return a


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape} vs {b.shape}")


def identity(dim: int) -> np.ndarray:
    return np.eye(dim)


def mat_mul(a, b) -> np.ndarray:
    a, b = as_mat(a), as_mat(b)
    _same_dim(a, b)
    return a @ b


def norm_inf(a) -> float:
    """Maximum absolute row sum."""
    return float(np.max(np.sum(np.abs(a), axis=1)))


def max_abs_diff(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    _same_dim(a, b)
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def mat_close(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    a, b = as_mat(a), as_mat(b)
    _same_dim(a, b)
    scale = max(norm_inf(a), norm_inf(b))
    return max_abs_diff(a, b) <= tol.bound(scale)


def det(a) -> float:
    return float(np.linalg.det(as_mat(a)))


def mat_inv(a) -> np.ndarray:
    """Inverse by partial-pivot LU.

    Raises NumericError when a pivot falls below ``1e-13 * ||a||_inf``.
    """
    a = as_mat(a)
    with warnings.catch_warnings():
        # the pivot check below reports singularity
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < SINGULAR_PIVOT * norm_inf(a):
        raise NumericError("matrix is singular to working precision")
    return scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0]), check_finite=False)


def mat_exp(x, eps: float = 1e-12) -> np.ndarray:
    """Matrix exponential by scaling and squaring of the Taylor series.

    The argument is halved until its infinity norm is at most 1/2, the series
    is summed until a term drops below ``eps * 1e-2`` and the result is
    squared back up.
    """
    x = as_mat(x)
    nrm = norm_inf(x)
    squarings = max(0, math.ceil(math.log2(nrm / 0.5))) if nrm > 0.5 else 0
    y = x / 2.0**squarings
    result = np.eye(x.shape[0])
    term = np.eye(x.shape[0])
    cutoff = eps * 1e-2
    for k in range(1, EXP_MAX_TERMS + 1):
        term = term @ y / k
        result = result + term
        if norm_inf(term) < cutoff:
            break
    else:
        raise NumericError(f"exponential series did not converge in {EXP_MAX_TERMS} terms")
    for _ in range(squarings):
        result = result @ result
    return result


def mat_log(a) -> np.ndarray:
    """Principal real logarithm; raises NumericError if it is not real."""
    a = as_mat(a)
    out = scipy.linalg.logm(a)
    if np.iscomplexobj(out):
        if np.max(np.abs(out.imag)) > 1e-9 * max(1.0, norm_inf(a)):
            raise NumericError("matrix has no real principal logarithm")
        out = out.real
    return np.asarray(out, dtype=float)


def mat_to_json(a) -> dict:
    a = as_mat(a)
    return {"dim": a.shape[0], "entries": [float(v) for v in a.ravel()]}


def mat_from_json(obj) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        entries = list(obj["entries"])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed matrix JSON: {exc}") from None
    if dim <= 0 or len(entries) != dim * dim:
        raise UsageError(f"matrix JSON: expected {dim}*{dim} entries, got {len(entries)}")
    return as_mat(np.reshape(np.array(entries, dtype=float), (dim, dim)))
