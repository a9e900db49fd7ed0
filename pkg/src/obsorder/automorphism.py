"""Congruence order-automorphisms A -> T A T* + X (optionally composed with
entrywise conjugation in the standard basis) and their reconstruction from a
black-box oracle.

The map determines T only up to a global unit-modulus phase; a fixed gauge
(largest-magnitude entry of T's first column made real positive) makes every
output deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    OracleNotAutomorphicError,
    ValidationError,
)
from .hermitian import HermitianMatrix, as_hermitian, herm_array, rank_one
from .loewner import compare, leq
from .oracle import OracleHandle
from .tolerances import DEFAULT_TOLERANCES, Tolerances

# Structure and validation threshold for reconstruction (relative residual).
RECON_TOL = 1e-6

PHASE_GAUGE_RULE = "largest-magnitude entry of the first column of T made real positive"


@dataclass(frozen=True)
class OrderAutomorphism:
    """Triple (T invertible, conjugation flag, Hermitian X) realizing
    A -> T A T* + X, or A -> T conj(A) T* + X when ``conjugate`` is set."""

    T: np.ndarray
    conjugate: bool
    X: HermitianMatrix

    @classmethod
    def create(
        cls, t, conjugate: bool = False, x=None, tol: Tolerances = DEFAULT_TOLERANCES
    ) -> "OrderAutomorphism":
        t = np.ascontiguousarray(t, dtype=np.complex128)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValidationError(f"T must be square, got shape {t.shape}")
        s = np.linalg.svd(t, compute_uv=False)
        if float(s[-1]) <= tol.tol_rank * float(s[0]):
            raise ValidationError(
                f"T is numerically singular (sigma_min/sigma_max = {s[-1]/s[0]:.3e})"
            )
        if x is None:
            x = np.zeros_like(t)
        x = as_hermitian(x)
        if x.dim != t.shape[0]:
            raise DimensionMismatchError("X and T have different dimensions")
        t.flags.writeable = False
        return cls(T=t, conjugate=bool(conjugate), X=x)

    @property
    def dim(self) -> int:
        return self.T.shape[0]


def identity_automorphism(dim: int) -> OrderAutomorphism:
    return OrderAutomorphism.create(np.eye(dim, dtype=np.complex128))


def apply(phi: OrderAutomorphism, a) -> HermitianMatrix:
    """T A T* + X (conjugating A entrywise first when the flag is set)."""
    arr = herm_array(a)
    if arr.shape[0] != phi.dim:
        raise DimensionMismatchError(f"dimension mismatch: {arr.shape[0]} vs {phi.dim}")
    if phi.conjugate:
        arr = arr.conj()
    out = phi.T @ arr @ phi.T.conj().T + phi.X.mat
    return HermitianMatrix.from_array((out + out.conj().T) / 2.0)


def compose(f: OrderAutomorphism, g: OrderAutomorphism) -> OrderAutomorphism:
    """The automorphism A -> f(g(A)); conjugation flags combine by XOR."""
    if f.dim != g.dim:
        raise DimensionMismatchError(f"dimension mismatch: {f.dim} vs {g.dim}")
    tg = g.T.conj() if f.conjugate else g.T
    t = f.T @ tg
    x = apply(f, g.X)
    return OrderAutomorphism.create(t, conjugate=f.conjugate != g.conjugate, x=x)


def invert(phi: OrderAutomorphism) -> OrderAutomorphism:
    """The inverse map; solves T K(A) T* + X = B for A (K = optional
    conjugation), giving T' = K(T^-1) with the same flag."""
    tinv = np.linalg.inv(phi.T)
    t = tinv.conj() if phi.conjugate else tinv
    xk = phi.X.mat.conj() if phi.conjugate else phi.X.mat
    x = -(t @ xk @ t.conj().T)
    return OrderAutomorphism.create(t, conjugate=phi.conjugate, x=x)


# ---------------------------------------------------------------------------
# Reconstruction from a black-box oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReconstructionReport:
    recovered: OrderAutomorphism
    phase_gauge: str
    max_residual: float
    probes_used: int
    conjugate_degenerate: bool = False


def gauge_fix(t: np.ndarray) -> np.ndarray:
    """Multiply T by the unit scalar making the largest-magnitude entry of
    its first column real positive."""
    col = t[:, 0]
    i = int(np.argmax(np.abs(col)))
    pivot = col[i]
    if abs(pivot) == 0.0:
        return t.copy()
    return t * (pivot.conjugate() / abs(pivot))


def _basis_vector(dim: int, j: int) -> np.ndarray:
    e = np.zeros(dim, dtype=np.complex128)
    e[j] = 1.0
    return e


def _column_from_rank_one(m: np.ndarray, what: str) -> np.ndarray:
    """Recover t (up to phase) from a matrix that must equal t t*."""
    evals, evecs = np.linalg.eigh(m)
    norm = float(np.max(np.abs(evals)))
    if norm == 0.0 or float(evals[-1]) <= 0.0:
        raise OracleNotAutomorphicError(f"{what}: image is not a nonzero PSD matrix")
    if float(evals[0]) < -RECON_TOL * norm:
        raise OracleNotAutomorphicError(f"{what}: image of a PSD probe is not PSD")
    others = np.abs(evals[:-1])
    if others.size and float(others.max()) > RECON_TOL * norm:
        raise OracleNotAutomorphicError(f"{what}: image of a rank-1 probe has rank > 1")
    return evecs[:, -1] * np.sqrt(float(evals[-1]))


def _relative_phase(t1: np.ndarray, uj: np.ndarray, cross: np.ndarray, what: str) -> complex:
    """Unit scalar c with t_j = c u_j, read off from
    cross = t_1 t_j* + t_j t_1*."""
    basis = np.column_stack([t1, uj])
    rhs = cross @ uj
    coeffs, *_ = np.linalg.lstsq(basis, rhs, rcond=None)
    c = np.conj(coeffs[0]) / float(np.real(np.vdot(uj, uj)))
    mag = abs(c)
    if not (0.5 < mag < 2.0):
        raise OracleNotAutomorphicError(f"{what}: inconsistent relative phase (|c|={mag:.3e})")
    c = c / mag
    predicted = np.conj(c) * np.outer(t1, uj.conj()) + c * np.outer(uj, t1.conj())
    scale = max(float(np.max(np.abs(cross))), 1.0)
    if float(np.max(np.abs(cross - predicted))) > RECON_TOL * scale:
        raise OracleNotAutomorphicError(f"{what}: cross block does not match a congruence")
    return c


def reconstruct(
    oracle: OracleHandle,
    validation_probes: int = 20,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ReconstructionReport:
    """Recover (T, conjugate flag, X) from a black-box order-automorphism.

    Probe plan (for dimension d): the zero matrix fixes X; the d basis
    projections give T's columns up to phase; d-1 two-element superpositions
    fix relative phases; one complex superposition decides the conjugation
    flag; ``validation_probes`` random Hermitian matrices (not only PSD)
    populate the residual. Total calls: d + (d-1) + 1 + 1 + validation_probes.
    """
    d = oracle.dim
    if d < 2:
        raise ValidationError("reconstruction requires dimension >= 2")
    start_calls = oracle.calls

    x = oracle.query(np.zeros((d, d), dtype=np.complex128))

    def psi(a: np.ndarray) -> np.ndarray:
        return oracle.query(a) - x

    # columns up to phase
    cols = []
    for j in range(d):
        e = _basis_vector(d, j)
        cols.append(_column_from_rank_one(psi(rank_one(e, e)), f"basis probe {j}"))

    # phase gauge for the first column, relative phases for the rest
    t1 = gauge_fix(cols[0].reshape(-1, 1))[:, 0]
    fixed = [t1]
    for j in range(1, d):
        v = (_basis_vector(d, 0) + _basis_vector(d, j)) / np.sqrt(2.0)
        m = psi(rank_one(v, v))
        cross = 2.0 * m - np.outer(t1, t1.conj()) - np.outer(cols[j], cols[j].conj())
        c = _relative_phase(t1, cols[j], cross, f"phase probe {j}")
        fixed.append(c * cols[j])
    t = np.column_stack(fixed)

    # conjugation flag
    w = (_basis_vector(d, 0) + 1j * _basis_vector(d, 1)) / np.sqrt(2.0)
    mw = psi(rank_one(w, w))
    pred_lin = t @ rank_one(w, w) @ t.conj().T
    pred_conj = t @ rank_one(w, w).conj() @ t.conj().T
    scale = max(float(np.max(np.abs(mw))), 1.0)
    fit_lin = float(np.max(np.abs(mw - pred_lin))) <= RECON_TOL * scale
    fit_conj = float(np.max(np.abs(mw - pred_conj))) <= RECON_TOL * scale
    if not (fit_lin or fit_conj):
        raise OracleNotAutomorphicError(
            "conjugation probe matches neither the linear nor the conjugate-linear branch"
        )
    degenerate = fit_lin and fit_conj
    conjugate = fit_conj and not fit_lin

    recovered = OrderAutomorphism.create(t, conjugate=conjugate, x=x, tol=tol)

    # validation on random Hermitian probes, negative parts included
    rng = np.random.default_rng(seed)
    max_residual = 0.0
    for _ in range(validation_probes):
        g = rng.uniform(-1.0, 1.0, (d, d)) + 1j * rng.uniform(-1.0, 1.0, (d, d))
        a = (g + g.conj().T) / 2.0
        got = oracle.query(a)
        want = apply(recovered, a).mat
        denom = max(1.0, float(np.max(np.abs(got))))
        max_residual = max(max_residual, float(np.max(np.abs(got - want))) / denom)
    if max_residual > RECON_TOL:
        raise OracleNotAutomorphicError(
            f"validation residual {max_residual:.3e} exceeds {RECON_TOL:.0e}"
        )

    return ReconstructionReport(
        recovered=recovered,
        phase_gauge=PHASE_GAUGE_RULE,
        max_residual=max_residual,
        probes_used=oracle.calls - start_calls,
        conjugate_degenerate=degenerate,
    )


# ---------------------------------------------------------------------------
# Order-preservation check of a black-box map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrderCheckReport:
    trials: int
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_order_automorphism(
    oracle: OracleHandle,
    trials: int = 200,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> OrderCheckReport:
    """Sample ordered and unordered pairs and verify two-way preservation of
    the relation through the oracle."""
    d = oracle.dim
    rng = np.random.default_rng(seed)
    violations = []

    def random_hermitian() -> np.ndarray:
        g = rng.uniform(-1.0, 1.0, (d, d)) + 1j * rng.uniform(-1.0, 1.0, (d, d))
        return (g + g.conj().T) / 2.0

    for k in range(trials):
        a = random_hermitian()
        if k % 2 == 0:
            g = rng.uniform(-1.0, 1.0, (d, d)) + 1j * rng.uniform(-1.0, 1.0, (d, d))
            b = a + g @ g.conj().T  # forced a <= b
        else:
            b = random_hermitian()
        before = compare(a, b, tol).relation
        after = compare(oracle.query(a), oracle.query(b), tol).relation
        if before != after:
            violations.append(
                {"trial": k, "before": before.value, "after": after.value}
            )
    return OrderCheckReport(trials=trials, violations=violations)


def preserves_order_pair(phi: OrderAutomorphism, a, b, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """leq(A, B) iff leq(phi A, phi B), checked in both directions."""
    fa = apply(phi, a)
    fb = apply(phi, b)
    return leq(a, b, tol) == leq(fa, fb, tol) and leq(b, a, tol) == leq(fb, fa, tol)
