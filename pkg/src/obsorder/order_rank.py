"""Rank and range facts expressed through the order relation alone.

A nonzero PSD matrix has rank 1 exactly when its order interval [0, A] is
total (any two elements comparable); rank A > n+1 exactly when A dominates a
rank-n E and a rank->1 F with trivially intersecting ranges. Both detectors
live here, together with range linear independence and the "acts on a
subspace" test used by the automorphism analysis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .hermitian import (
    HermitianMatrix,
    PsdMatrix,
    as_psd,
    eig,
    herm_array,
    projector,
    rank_numeric,
    range_basis,
    rank_one,
)
from .loewner import leq
from .tolerances import DEFAULT_TOLERANCES, Tolerances, scaled


@dataclass(frozen=True)
class RankWitness:
    """Pair (E, F) below the probed A with rank E = n, rank F > 1, and
    trivially intersecting ranges. Its existence certifies rank A > n+1."""

    E: PsdMatrix
    F: PsdMatrix
    n: int


def _descending_spectral_terms(a: PsdMatrix, tol: Tolerances):
    """Spectral rank-1 terms of A ordered by descending eigenvalue, keeping
    only eigenvalues above the rank threshold. Ties resolve through the
    deterministic eigenvector gauge of ``eig``."""
    dec = eig(a.base)
    norm = float(np.max(np.abs(dec.eigenvalues))) if a.dim else 0.0
    thr = scaled(tol.tol_rank, norm)
    order = np.argsort(-dec.eigenvalues, kind="stable")
    terms = []
    for j in order:
        lam = float(dec.eigenvalues[j])
        if lam > thr:
            terms.append((lam, np.array(dec.eigenvectors[:, j])))
    return terms


def rank_two_counterexample(
    a, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[PsdMatrix, PsdMatrix]:
    """For rank >= 2 PSD A: two elements of [0, A] that are incomparable,
    built from A's top two spectral directions."""
    a = as_psd(a, tol)
    terms = _descending_spectral_terms(a, tol)
    if len(terms) < 2:
        raise ValidationError("A must have rank >= 2")
    (l1, v1), (l2, v2) = terms[0], terms[1]
    e = as_psd(HermitianMatrix.from_array(l1 * rank_one(v1, v1)), tol)
    f = as_psd(HermitianMatrix.from_array(l2 * rank_one(v2, v2)), tol)
    return e, f


def is_rank_one_by_order(
    a, samples: int = 200, rng_seed: int = 0, tol: Tolerances = DEFAULT_TOLERANCES
) -> bool:
    """Decide rank A = 1 through totality of the interval [0, A].

    Rank >= 2 is refuted deterministically: two scaled spectral
    eigenprojections of A lie in [0, A] and are incomparable. The confirming
    rank-1 direction samples pairs from [0, A] (which is exactly
    {tA : 0 <= t <= 1} there) and checks comparability.
    """
    a = as_psd(a, tol)
    r = rank_numeric(a, tol)
    if r == 0:
        raise ValidationError("zero matrix has no rank-1 test")
    if r >= 2:
        e, f = rank_two_counterexample(a, tol)
        # sanity: constructed pair must behave as advertised
        assert leq(e, a, tol) and leq(f, a, tol)
        assert not leq(e, f, tol) and not leq(f, e, tol)
        return False
    rng = np.random.default_rng(rng_seed)
    ts = rng.uniform(0.0, 1.0, size=(samples, 2))
    for s, t in ts:
        if not (leq(s * a.mat, t * a.mat, tol) or leq(t * a.mat, s * a.mat, tol)):
            return False
    return True


def rank_gt_np1_witness(
    a, n: int, tol: Tolerances = DEFAULT_TOLERANCES
) -> RankWitness | None:
    """Witness that rank A > n+1, or None when rank A <= n+1.

    E is the sum of the first n spectral terms (descending eigenvalues), F
    the sum of the rest; both are minorants of A with disjoint ranges.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    a = as_psd(a, tol)
    r = rank_numeric(a, tol)
    if r <= n + 1:
        return None
    terms = _descending_spectral_terms(a, tol)
    e = np.zeros((a.dim, a.dim), dtype=np.complex128)
    f = np.zeros_like(e)
    for i, (lam, v) in enumerate(terms):
        if i < n:
            e += lam * rank_one(v, v)
        else:
            f += lam * rank_one(v, v)
    return RankWitness(
        E=as_psd(HermitianMatrix.from_array(e), tol),
        F=as_psd(HermitianMatrix.from_array(f), tol),
        n=n,
    )


def check_rank_witness(
    a, w: RankWitness, tol: Tolerances = DEFAULT_TOLERANCES
) -> bool:
    """Independently re-check every RankWitness invariant against A."""
    a = as_psd(a, tol)
    return (
        leq(w.E, a, tol)
        and leq(w.F, a, tol)
        and rank_numeric(w.E, tol) == w.n
        and rank_numeric(w.F, tol) > 1
        and no_common_rank1_minorant(w.E, w.F, tol)
    )


def _stacked_rank(bases: list[list[np.ndarray]], tol: Tolerances) -> int:
    cols = [v for basis in bases for v in basis]
    if not cols:
        return 0
    m = np.column_stack(cols)
    s = np.linalg.svd(m, compute_uv=False)
    thr = scaled(tol.tol_rank, float(s[0]) if s.size else 0.0)
    return int(np.count_nonzero(s > thr))


def no_common_rank1_minorant(e, f, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff no rank-1 PSD G has G <= E and G <= F, i.e. iff
    rng E and rng F intersect trivially (stacked-basis rank test)."""
    e = as_psd(e, tol)
    f = as_psd(f, tol)
    if e.dim != f.dim:
        raise DimensionMismatchError(f"dimension mismatch: {e.dim} vs {f.dim}")
    be = range_basis(e, tol)
    bf = range_basis(f, tol)
    return _stacked_rank([be, bf], tol) == len(be) + len(bf)


def ranges_linearly_independent(
    mats, tol: Tolerances = DEFAULT_TOLERANCES
) -> bool:
    """True iff the spanning vectors of the given rank-1 PSD matrices cannot
    fit in a subspace of dimension less than their count."""
    vectors = []
    for m in mats:
        m = as_psd(m, tol)
        basis = range_basis(m, tol)
        if len(basis) != 1:
            raise ValidationError("every input must have rank exactly 1")
        vectors.append(basis[0])
    return _stacked_rank([vectors], tol) == len(vectors)


def acts_on(t, vectors: list[np.ndarray], tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff span(vectors) is invariant under T and T vanishes on its
    orthogonal complement: ||T - P T P|| <= tol_psd * max(1, ||T||)."""
    t = as_psd(t, tol)
    if vectors:
        v = np.column_stack(vectors)
        if v.shape[0] != t.dim:
            raise DimensionMismatchError("subspace vectors have wrong length")
        gram = v.conj().T @ v
        if float(np.max(np.abs(gram - np.eye(v.shape[1])))) > 1e-10:
            raise ValidationError("subspace vectors must be orthonormal")
    p = projector(vectors, dim=t.dim)
    resid = t.mat - p @ t.mat @ p
    norm = float(np.max(np.abs(np.linalg.eigvalsh(herm_array(resid)))))
    return norm <= tol.tol_psd * max(1.0, t.spectral_norm())
