"""Hermitian matrix foundation: validated wrappers, eigendecomposition with a
deterministic eigenvector gauge, positive square root, pseudoinverse, rank and
range utilities.

All public entry points accept either the wrapper types defined here or bare
``numpy`` arrays; arrays are validated on the way in. Internally everything is
``complex128``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NumericalFailureError, ValidationError
from .tolerances import DEFAULT_TOLERANCES, Tolerances, scaled

MAX_DIM = 64

# Relative asymmetry up to this level is treated as round-trip noise and
# silently symmetrized; anything larger is rejected.
ASYMMETRY_LIMIT = 1e-12


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


def _check_square_finite(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {arr.shape}")
    d = arr.shape[0]
    if d < 1 or d > MAX_DIM:
        raise ValidationError(f"dimension must be in [1, {MAX_DIM}], got {d}")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValidationError("matrix entries must be finite")
    return arr


@dataclass(frozen=True)
class HermitianMatrix:
    """Square complex matrix equal to its conjugate transpose.

    Construction symmetrizes ``(M + M*)/2`` and records the size of the
    applied correction; asymmetry above ``ASYMMETRY_LIMIT`` (relative) is an
    error rather than silently absorbed.
    """

    mat: np.ndarray
    asymmetry: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "HermitianMatrix":
        arr = _check_square_finite(arr)
        delta = arr - arr.conj().T
        asym = float(np.linalg.norm(delta))
        rel = asym / max(float(np.linalg.norm(arr)), 1.0)
        if rel > ASYMMETRY_LIMIT:
            raise ValidationError(
                f"matrix is not Hermitian: relative asymmetry {rel:.3e}"
            )
        sym = (arr + arr.conj().T) / 2.0
        return cls(mat=_freeze(sym), asymmetry=asym)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def spectral_norm(self) -> float:
        if self.dim == 0:
            return 0.0
        return float(np.max(np.abs(np.linalg.eigvalsh(self.mat))))


@dataclass(frozen=True)
class PsdMatrix:
    """Hermitian matrix certified positive semidefinite at construction.

    ``min_eig`` is the certified smallest eigenvalue; it must not fall below
    ``-tol_psd * spectral_norm``. There is no unchecked constructor.
    """

    base: HermitianMatrix
    min_eig: float

    @classmethod
    def from_hermitian(
        cls, h: "HermitianMatrix | np.ndarray", tol: Tolerances = DEFAULT_TOLERANCES
    ) -> "PsdMatrix":
        h = as_hermitian(h)
        evals = np.linalg.eigvalsh(h.mat)
        lo = float(evals[0])
        norm = float(np.max(np.abs(evals))) if evals.size else 0.0
        if lo < -scaled(tol.tol_psd, norm):
            raise ValidationError(
                f"matrix is not PSD: smallest eigenvalue {lo:.3e} (norm {norm:.3e})"
            )
        return cls(base=h, min_eig=lo)

    @property
    def mat(self) -> np.ndarray:
        return self.base.mat

    @property
    def dim(self) -> int:
        return self.base.dim

    def spectral_norm(self) -> float:
        return self.base.spectral_norm()


def as_hermitian(m) -> HermitianMatrix:
    """Coerce an array-like or wrapper to a validated HermitianMatrix."""
    if isinstance(m, PsdMatrix):
        return m.base
    if isinstance(m, HermitianMatrix):
        return m
    return HermitianMatrix.from_array(m)


def as_psd(m, tol: Tolerances = DEFAULT_TOLERANCES) -> PsdMatrix:
    if isinstance(m, PsdMatrix):
        return m
    return PsdMatrix.from_hermitian(m, tol)


def herm_array(m) -> np.ndarray:
    return as_hermitian(m).mat


@dataclass(frozen=True)
class Eigendecomposition:
    """Eigenvalues ascending, eigenvectors as orthonormal columns, with the
    phase of each column fixed (largest-magnitude entry real positive)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _fix_column_phases(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    for j in range(v.shape[1]):
        col = v[:, j]
        i = int(np.argmax(np.abs(col)))
        pivot = col[i]
        if abs(pivot) > 0.0:
            col *= pivot.conjugate() / abs(pivot)
    return v


def eig(m) -> Eigendecomposition:
    """Hermitian eigendecomposition with deterministic output gauge."""
    arr = herm_array(m)
    try:
        evals, evecs = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigendecomposition failed: {exc}") from exc
    return Eigendecomposition(
        eigenvalues=_freeze_real(evals), eigenvectors=_freeze(_fix_column_phases(evecs))
    )


def _freeze_real(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


def spectral_norm(m) -> float:
    arr = np.asarray(m.mat if hasattr(m, "mat") else m, dtype=np.complex128)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(arr))))


def sqrt_psd(a, tol: Tolerances = DEFAULT_TOLERANCES) -> PsdMatrix:
    """Unique PSD square root. Eigenvalues below the PSD threshold are
    clamped to zero before rooting."""
    a = as_psd(a, tol)
    dec = eig(a.base)
    norm = float(np.max(np.abs(dec.eigenvalues))) if a.dim else 0.0
    clamped = np.where(dec.eigenvalues < tol.tol_psd * norm, 0.0, dec.eigenvalues)
    root = (dec.eigenvectors * np.sqrt(clamped)) @ dec.eigenvectors.conj().T
    return as_psd(HermitianMatrix.from_array(root), tol)


def pinv(m, tol: Tolerances = DEFAULT_TOLERANCES) -> HermitianMatrix:
    """Moore-Penrose pseudoinverse on the eigenbasis; eigenvalues under the
    rank threshold map to zero."""
    h = as_hermitian(m)
    dec = eig(h)
    norm = float(np.max(np.abs(dec.eigenvalues))) if h.dim else 0.0
    thr = scaled(tol.tol_rank, norm)
    mask = np.abs(dec.eigenvalues) > thr
    inv = np.zeros_like(dec.eigenvalues)
    inv[mask] = 1.0 / dec.eigenvalues[mask]
    out = (dec.eigenvectors * inv) @ dec.eigenvectors.conj().T
    return HermitianMatrix.from_array(out)


def rank_numeric(m, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    """Count of eigenvalues above the rank threshold; 0 for the zero matrix."""
    h = as_hermitian(m)
    evals = np.linalg.eigvalsh(h.mat)
    norm = float(np.max(np.abs(evals))) if evals.size else 0.0
    thr = scaled(tol.tol_rank, norm)
    return int(np.count_nonzero(np.abs(evals) > thr))


def range_basis(m, tol: Tolerances = DEFAULT_TOLERANCES) -> list[np.ndarray]:
    """Orthonormal basis of the numerical range: eigenvectors whose
    eigenvalues exceed the rank threshold."""
    h = as_hermitian(m)
    dec = eig(h)
    norm = float(np.max(np.abs(dec.eigenvalues))) if h.dim else 0.0
    thr = scaled(tol.tol_rank, norm)
    keep = np.abs(dec.eigenvalues) > thr
    return [np.array(dec.eigenvectors[:, j]) for j in range(h.dim) if keep[j]]


def rank_one(x, y) -> np.ndarray:
    """The operator x (x) y : z -> <z, y> x, i.e. the matrix x_i * conj(y_j)."""
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    y = np.asarray(y, dtype=np.complex128).reshape(-1)
    if x.shape != y.shape:
        raise DimensionMismatchError(
            f"rank_one: vector lengths differ ({x.size} vs {y.size})"
        )
    return np.outer(x, y.conj())


def projector(vectors: list[np.ndarray] | np.ndarray, dim: int | None = None) -> np.ndarray:
    """Orthogonal projection onto the span of the given (orthonormal) columns.

    ``dim`` is only needed to disambiguate the empty span.
    """
    if isinstance(vectors, list):
        if not vectors:
            if dim is None:
                raise ValidationError("projector of empty span needs an explicit dim")
            return np.zeros((dim, dim), dtype=np.complex128)
        v = np.column_stack(vectors)
    else:
        v = np.asarray(vectors, dtype=np.complex128)
    return v @ v.conj().T
