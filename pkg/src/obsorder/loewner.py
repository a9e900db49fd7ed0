"""The Loewner order on observables.

``A <= B`` iff ``<Ax, x> <= <Bx, x>`` for every vector ``x``, i.e. iff
``B - A`` is positive semidefinite. Besides the predicate this module
produces refuting witnesses, the extremal scalar ``lambda`` with
``lambda * x(x)x <= B`` (feasible exactly when ``x`` lies in the range of
``sqrt(B)``), and the rank-1 range-domination test built on it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InternalInconsistencyError,
    ValidationError,
)
from .hermitian import (
    PsdMatrix,
    as_hermitian,
    as_psd,
    herm_array,
    pinv,
    rank_numeric,
    range_basis,
    rank_one,
    sqrt_psd,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances

# Noise floor used where a strict sign test is needed (see max_lambda).
_NOISE_FLOOR = 1e-13


class Relation(enum.Enum):
    LEQ = "LEQ"
    GEQ = "GEQ"
    EQUAL = "EQUAL"
    INCOMPARABLE = "INCOMPARABLE"


@dataclass(frozen=True)
class OrderWitness:
    """Unit vector certifying <Ax,x> > <Bx,x>, refuting A <= B."""

    x: np.ndarray
    gap: float


@dataclass(frozen=True)
class OrderResult:
    relation: Relation
    witness_ab: OrderWitness | None = None  # refutes A <= B
    witness_ba: OrderWitness | None = None  # refutes B <= A


def _pair_scale(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.max(np.abs(np.linalg.eigvalsh(a))))
    nb = float(np.max(np.abs(np.linalg.eigvalsh(b))))
    return max(na, nb, 1.0)


def _check_dims(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}"
        )


def leq(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff B - A is PSD under tol_psd (non-strict; A = B gives True)."""
    a = herm_array(a)
    b = herm_array(b)
    _check_dims(a, b)
    lo = float(np.linalg.eigvalsh(b - a)[0])
    return lo >= -tol.tol_psd * _pair_scale(a, b)


def _refuting_witness(a: np.ndarray, b: np.ndarray) -> OrderWitness:
    """Eigenvector of the most negative eigenvalue of B - A."""
    evals, evecs = np.linalg.eigh(b - a)
    x = evecs[:, 0]
    x = x / np.linalg.norm(x)
    gap = float(np.real(np.vdot(x, a @ x) - np.vdot(x, b @ x)))
    return OrderWitness(x=x, gap=gap)


def compare(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> OrderResult:
    a = herm_array(a)
    b = herm_array(b)
    _check_dims(a, b)
    scale = _pair_scale(a, b)
    if float(np.max(np.abs(np.linalg.eigvalsh(a - b)))) <= tol.tol_psd * scale:
        return OrderResult(relation=Relation.EQUAL)
    ab = leq(a, b, tol)
    ba = leq(b, a, tol)
    if ab and ba:
        # one-sided tolerance can let both pass only near equality
        return OrderResult(relation=Relation.EQUAL)
    if ab:
        return OrderResult(relation=Relation.LEQ)
    if ba:
        return OrderResult(relation=Relation.GEQ, witness_ab=_refuting_witness(a, b))
    return OrderResult(
        relation=Relation.INCOMPARABLE,
        witness_ab=_refuting_witness(a, b),
        witness_ba=_refuting_witness(b, a),
    )


def max_lambda(
    x, b, tol: Tolerances = DEFAULT_TOLERANCES
) -> float | None:
    """Largest lambda > 0 with lambda * x(x)x <= B, or None when infeasible.

    Feasibility holds exactly when x lies in the range of sqrt(B); then the
    extremum is 1 / ||pinv(sqrt(B)) x||^2. The closed form is implementer
    derived, so it is cross-checked against the order predicate itself:
    lambda must be feasible and a slightly bumped lambda infeasible. The
    bumped side uses a raw sign test (noise floor instead of the one-sided
    PSD tolerance): the bump shifts the bottom eigenvalue by an amount that
    can be legitimately smaller than tol_psd * ||B||.
    """
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    b = as_psd(b, tol)
    if x.size != b.dim:
        raise DimensionMismatchError(f"vector length {x.size} vs matrix dim {b.dim}")
    nrm = float(np.linalg.norm(x))
    if abs(nrm - 1.0) > 1e-6:
        raise ValidationError(f"x must be a unit vector, got norm {nrm}")
    x = x / nrm

    root = sqrt_psd(b, tol).mat
    y = pinv(root, tol).mat @ x
    residual = float(np.linalg.norm(root @ y - x))
    if residual > tol.tol_range:
        return None
    lam = 1.0 / float(np.real(np.vdot(y, y)))

    p = rank_one(x, x)
    scale = max(b.spectral_norm(), lam, 1.0)
    if not leq(lam * p, b.mat, tol):
        raise InternalInconsistencyError(
            "closed-form lambda is infeasible under the order predicate"
        )
    bumped = (1.0 + 10.0 * tol.tol_psd) * lam
    lo = float(np.linalg.eigvalsh(b.mat - bumped * p)[0])
    if lo > _NOISE_FLOOR * scale:
        raise InternalInconsistencyError(
            "closed-form lambda is not extremal: bumped value still feasible"
        )
    return lam


def range_dominates(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff some lambda > 0 has lambda * A <= B, for rank-1 PSD A.

    Decided by the range criterion (rng A inside rng B) and cross-checked by
    max_lambda on the unit vector spanning rng A.
    """
    a = as_psd(a, tol)
    b = as_psd(b, tol)
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if rank_numeric(a, tol) != 1:
        raise ValidationError("range_dominates requires rank-1 A")
    (x,) = range_basis(a, tol)

    root = sqrt_psd(b, tol).mat
    y = pinv(root, tol).mat @ x
    in_range = float(np.linalg.norm(root @ y - x)) <= tol.tol_range

    lam = max_lambda(x, b, tol)
    if (lam is not None) != in_range:
        raise InternalInconsistencyError(
            "range criterion and extremal-lambda feasibility disagree"
        )
    return in_range


def quadratic_form(a, x) -> float:
    """<Ax, x> for Hermitian A (real by construction)."""
    a = herm_array(a)
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    return float(np.real(np.vdot(x, a @ x)))
