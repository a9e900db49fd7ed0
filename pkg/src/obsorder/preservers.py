"""Relation predicates (commutativity, complementarity, orthogonality) and
classifiers deciding whether an order-automorphism additionally preserves
each relation.

The classification is analytic: commutativity or complementarity survive
exactly when T*T is scalar and X is scalar, orthogonality exactly when T*T
is scalar and X = 0. When an automorphism fails the criterion, a concrete
counterexample pair is searched for and re-verified through the predicates.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .automorphism import OrderAutomorphism, apply, invert
from .errors import DimensionMismatchError, SearchExhaustedError, ValidationError
from .hermitian import as_psd, eig, herm_array, rank_one
from .tolerances import DEFAULT_TOLERANCES, Tolerances, scaled

# Relative tolerance for the analytic scalar tests (T*T = lambda I, X = mu I).
SCALAR_TOL = 1e-9

# Subset enumeration bound for the complementarity predicate.
COMPLEMENTARITY_MAX_DIM = 12


class RelationKind(enum.Enum):
    COMMUTATIVITY = "COMMUTATIVITY"
    COMPLEMENTARITY = "COMPLEMENTARITY"
    ORTHOGONALITY = "ORTHOGONALITY"


@dataclass(frozen=True)
class CanonicalForm:
    """phi(A) = lambda U A U* + mu I with U unitary (or antiunitary when the
    flag is set); mu is absent for the orthogonality classification."""

    U: np.ndarray
    antiunitary: bool
    lam: float
    mu: float | None


@dataclass(frozen=True)
class Counterexample:
    a: np.ndarray
    b: np.ndarray
    holds_before: bool
    holds_after: bool


@dataclass(frozen=True)
class PreserverClassification:
    preserves: bool
    canonical_form: CanonicalForm | None = None
    counterexample: Counterexample | None = None


def _pair_scale(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.max(np.abs(np.linalg.eigvalsh(a))))
    nb = float(np.max(np.abs(np.linalg.eigvalsh(b))))
    return max(1.0, na * nb)


def commute(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """||AB - BA|| small relative to ||A|| ||B|| (compatibility)."""
    a = herm_array(a)
    b = herm_array(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    comm = a @ b - b @ a
    return float(np.linalg.norm(comm, 2)) <= tol.tol_psd * _pair_scale(a, b)


def orthogonal(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """AB = 0, equivalently mutually orthogonal ranges."""
    a = herm_array(a)
    b = herm_array(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(np.linalg.norm(a @ b, 2)) <= tol.tol_psd * _pair_scale(a, b)


def _eigen_clusters(m: np.ndarray, tol: Tolerances) -> list[np.ndarray]:
    """Single-linkage clustering of the spectrum at gap tol_rank * scale;
    returns one orthonormal column block per eigenvalue cluster."""
    dec = eig(m)
    evals = dec.eigenvalues
    norm = float(np.max(np.abs(evals))) if evals.size else 0.0
    gap = scaled(tol.tol_rank, norm)
    blocks: list[list[int]] = [[0]]
    for i in range(1, evals.size):
        if evals[i] - evals[i - 1] > gap:
            blocks.append([i])
        else:
            blocks[-1].append(i)
    return [np.ascontiguousarray(dec.eigenvectors[:, idx]) for idx in blocks]


def complementary(a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Every nontrivial spectral projection of A has trivially intersecting
    range with every nontrivial spectral projection of B.

    Spectral projections are sums of eigenprojections over nonempty proper
    subsets of eigenvalue clusters. Scalars have no nontrivial projections,
    so they are complementary to everything.
    """
    a = herm_array(a)
    b = herm_array(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    d = a.shape[0]
    if d > COMPLEMENTARITY_MAX_DIM:
        raise ValidationError(
            f"complementarity enumeration is bounded at d <= {COMPLEMENTARITY_MAX_DIM}"
        )
    ca = _eigen_clusters(a, tol)
    cb = _eigen_clusters(b, tol)
    if len(ca) == 1 or len(cb) == 1:
        return True

    # Two subspaces whose dimensions sum above d always intersect; the
    # largest nontrivial projections are the leave-one-cluster-out sums.
    max_a = d - min(blk.shape[1] for blk in ca)
    max_b = d - min(blk.shape[1] for blk in cb)
    if max_a + max_b > d:
        return False

    def proper_subsets(blocks: list[np.ndarray]):
        k = len(blocks)
        for r in range(1, k):
            for combo in itertools.combinations(range(k), r):
                yield np.column_stack([blocks[i] for i in combo])

    for pa in proper_subsets(ca):
        for pb in proper_subsets(cb):
            stacked = np.column_stack([pa, pb])
            s = np.linalg.svd(stacked, compute_uv=False)
            thr = scaled(tol.tol_rank, float(s[0]))
            if int(np.count_nonzero(s > thr)) < pa.shape[1] + pb.shape[1]:
                return False
    return True


def local_linear_dependence_scalar(m, tol_rel: float = SCALAR_TOL) -> float | None:
    """lambda when the PSD matrix equals lambda I (eigenvalue spread within
    tolerance), else None."""
    m = as_psd(m)
    evals = np.linalg.eigvalsh(m.mat)
    spread = float(evals[-1] - evals[0])
    if spread <= tol_rel * max(1.0, float(np.abs(evals).max())):
        return float(np.mean(evals))
    return None


def _scalar_part(x: np.ndarray, tol_rel: float = SCALAR_TOL) -> float | None:
    """mu when X = mu I within tolerance, else None (X Hermitian, any sign)."""
    d = x.shape[0]
    mu = float(np.real(np.trace(x))) / d
    resid = float(np.linalg.norm(x - mu * np.eye(d), 2))
    norm = float(np.max(np.abs(np.linalg.eigvalsh(x))))
    if resid <= tol_rel * max(1.0, norm):
        return mu
    return None


def _relation_predicate(kind: RelationKind, tol: Tolerances):
    if kind is RelationKind.COMMUTATIVITY:
        return lambda a, b: commute(a, b, tol)
    if kind is RelationKind.ORTHOGONALITY:
        return lambda a, b: orthogonal(a, b, tol)
    return lambda a, b: complementary(a, b, tol)


def _counterexample_candidates(
    phi: OrderAutomorphism, kind: RelationKind, rng: np.random.Generator
):
    """Candidate pairs, cheapest and most promising first, then random."""
    d = phi.dim
    zero = np.zeros((d, d), dtype=np.complex128)

    s = phi.T.conj().T @ phi.T
    evals, evecs = np.linalg.eigh(s)
    if float(evals[-1] - evals[0]) > SCALAR_TOL * max(1.0, float(evals[-1])):
        # orthogonal pair mixing extreme eigendirections of T*T: images of
        # x(x)x and y(x)y fail both commutativity and orthogonality
        x = (evecs[:, -1] + evecs[:, 0]) / np.sqrt(2.0)
        y = (evecs[:, -1] - evecs[:, 0]) / np.sqrt(2.0)
        yield rank_one(x, x), rank_one(y, y)

    if kind is not RelationKind.COMPLEMENTARITY:
        # zero relates to everything; a non-scalar (or nonzero) X breaks it
        for _ in range(4):
            g = rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
            yield zero, (g + g.conj().T) / 2.0
    else:
        # scalars are complementary to everything; map a shared-eigenvector
        # partner back through the inverse
        inv = invert(phi)
        for scalar in (zero, np.eye(d, dtype=np.complex128)):
            img = apply(phi, scalar).mat
            img_evals, img_evecs = np.linalg.eigh(img)
            for j in (0, d - 1):
                v = img_evecs[:, j]
                yield scalar, apply(inv, rank_one(v, v)).mat
        # preimage of a scalar: complementary to everything after the map but
        # (for non-scalar T*T) to almost nothing before it
        e1 = np.zeros(d, dtype=np.complex128)
        e1[0] = 1.0
        yield rank_one(e1, e1), apply(inv, np.eye(d, dtype=np.complex128)).mat

    while True:
        if kind is RelationKind.COMMUTATIVITY:
            g = rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
            a = (g + g.conj().T) / 2.0
            yield a, a @ a  # commuting by functional calculus
        elif kind is RelationKind.ORTHOGONALITY:
            g = rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
            q, _ = np.linalg.qr(g)
            yield rank_one(q[:, 0], q[:, 0]), rank_one(q[:, 1], q[:, 1])
        else:
            g = rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
            a = (g + g.conj().T) / 2.0
            h = rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
            b = (h + h.conj().T) / 2.0
            yield a, b


def preserves_relation(
    phi: OrderAutomorphism,
    kind: RelationKind,
    trials: int = 1000,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PreserverClassification:
    """Decide preservation analytically from (T, X); when the answer is no,
    produce a verified counterexample pair."""
    s = phi.T.conj().T @ phi.T
    lam = local_linear_dependence_scalar(s)
    if kind is RelationKind.ORTHOGONALITY:
        x_norm = float(np.max(np.abs(np.linalg.eigvalsh(phi.X.mat))))
        x_ok = x_norm <= SCALAR_TOL * max(1.0, float(np.max(np.abs(np.linalg.eigvalsh(s)))))
        mu = None
    else:
        mu = _scalar_part(phi.X.mat)
        x_ok = mu is not None

    if lam is not None and x_ok:
        u = phi.T / np.sqrt(lam)
        return PreserverClassification(
            preserves=True,
            canonical_form=CanonicalForm(
                U=u, antiunitary=phi.conjugate, lam=lam, mu=mu
            ),
        )

    relation = _relation_predicate(kind, tol)
    rng = np.random.default_rng(seed)
    for a, b in itertools.islice(_counterexample_candidates(phi, kind, rng), trials):
        before = relation(a, b)
        after = relation(apply(phi, a).mat, apply(phi, b).mat)
        if before != after:
            return PreserverClassification(
                preserves=False,
                counterexample=Counterexample(
                    a=a, b=b, holds_before=before, holds_after=after
                ),
            )
    raise SearchExhaustedError(
        f"analytic test says {kind.value} is not preserved but no counterexample "
        f"was found in {trials} attempts"
    )
