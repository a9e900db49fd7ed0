"""Randomized instance generators and theorem-level verification suites.

Each suite turns one statement (lemma, theorem, corollary) into a seeded,
replayable pass/fail run. Trials derive independent sub-seeds from
(suite seed, dimension, trial index), so parallel or interleaved execution
cannot change a report.
"""

from __future__ import annotations

import enum
import hashlib
import time
from dataclasses import dataclass, field

import numpy as np

from .automorphism import OrderAutomorphism, apply, invert, reconstruct
from .errors import ValidationError
from .hermitian import HermitianMatrix, as_psd, herm_array, rank_numeric, rank_one
from .loewner import leq, range_dominates
from .oracle import from_automorphism
from .order_rank import check_rank_witness, is_rank_one_by_order, rank_gt_np1_witness
from .preservers import (
    RelationKind,
    complementary,
    orthogonal,
    preserves_relation,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances

CONDITION_CAP = 1e4


class Kind(enum.Enum):
    HERMITIAN = "HERMITIAN"
    PSD = "PSD"
    PSD_RANK = "PSD_RANK"
    RANK_ONE = "RANK_ONE"
    INVERTIBLE = "INVERTIBLE"
    UNITARY = "UNITARY"
    AUTOMORPHISM = "AUTOMORPHISM"


@dataclass(frozen=True)
class GeneratorSpec:
    dim: int
    kind: Kind
    rank: int | None = None
    spectrum_range: tuple[float, float] = (0.5, 2.0)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValidationError(f"dim must be >= 1, got {self.dim}")
        if self.rank is not None and not (1 <= self.rank <= self.dim):
            raise ValidationError(f"rank must be in [1, dim], got {self.rank}")
        lo, hi = self.spectrum_range
        if not (0.0 < lo <= hi):
            raise ValidationError(f"spectrum_range must be 0 < lo <= hi, got {self.spectrum_range}")


def _random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.uniform(-1.0, 1.0, (d, d)) + 1j * rng.uniform(-1.0, 1.0, (d, d))
    return (g + g.conj().T) / 2.0


def _random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    x = rng.normal(size=d) + 1j * rng.normal(size=d)
    return x / np.linalg.norm(x)


def _random_psd_rank(
    rng: np.random.Generator, d: int, r: int, spectrum: tuple[float, float]
) -> np.ndarray:
    # sum of r random rank-ones; resample on the (rare) near-degenerate draw
    for _ in range(100):
        m = np.zeros((d, d), dtype=np.complex128)
        for _ in range(r):
            lam = rng.uniform(*spectrum)
            x = _random_unit(rng, d)
            m += lam * rank_one(x, x)
        if rank_numeric(m) == r:
            return m
    raise ValidationError(f"could not generate a rank-{r} PSD matrix at d={d}")


def _random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases  # Haar-distributed once the QR phase gauge is fixed


def _random_invertible(rng: np.random.Generator, d: int, cond_cap: float = CONDITION_CAP) -> np.ndarray:
    for _ in range(100):
        t = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        s = np.linalg.svd(t, compute_uv=False)
        if s[0] / s[-1] <= cond_cap:
            return t
    raise ValidationError("could not draw a well-conditioned invertible matrix")


def _random_automorphism(rng: np.random.Generator, d: int) -> OrderAutomorphism:
    t = _random_invertible(rng, d)
    conj = bool(rng.integers(0, 2))
    x = _random_hermitian(rng, d)
    return OrderAutomorphism.create(t, conjugate=conj, x=x)


def generate(spec: GeneratorSpec):
    """Deterministic sample for the given spec (same spec, same output)."""
    rng = np.random.default_rng(spec.seed)
    d = spec.dim
    if spec.kind is Kind.HERMITIAN:
        return _random_hermitian(rng, d)
    if spec.kind is Kind.PSD:
        return _random_psd_rank(rng, d, d, spec.spectrum_range)
    if spec.kind is Kind.PSD_RANK:
        if spec.rank is None:
            raise ValidationError("PSD_RANK requires a rank")
        return _random_psd_rank(rng, d, spec.rank, spec.spectrum_range)
    if spec.kind is Kind.RANK_ONE:
        lam = rng.uniform(*spec.spectrum_range)
        x = _random_unit(rng, d)
        return lam * rank_one(x, x)
    if spec.kind is Kind.INVERTIBLE:
        return _random_invertible(rng, d)
    if spec.kind is Kind.UNITARY:
        return _random_unitary(rng, d)
    if spec.kind is Kind.AUTOMORPHISM:
        return _random_automorphism(rng, d)
    raise ValidationError(f"unknown generator kind: {spec.kind}")


# ---------------------------------------------------------------------------
# Independent feasibility oracle (bisection on the order predicate)
# ---------------------------------------------------------------------------

def bisection_max_lambda(
    x: np.ndarray,
    b,
    rel_tol: float = 1e-9,
    feas_floor: float = 1e-12,
) -> float | None:
    """Largest lambda with lambda * x(x)x <= B found by pure bisection on
    PSD feasibility of B - lambda * x(x)x. Independent of the closed-form
    route through sqrt(B) and its pseudoinverse.
    """
    b = herm_array(b)
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    p = rank_one(x, x)
    norm_b = float(np.max(np.abs(np.linalg.eigvalsh(b))))
    floor = feas_floor * max(1.0, norm_b)

    def feasible(lam: float) -> bool:
        return float(np.linalg.eigvalsh(b - lam * p)[0]) >= -floor

    lo = 1e-6 * max(1.0, norm_b)
    if not feasible(lo):
        return None
    hi = max(2.0 * norm_b, lo * 2.0)
    while feasible(hi):
        hi *= 2.0
        if hi > 1e12 * max(1.0, norm_b):  # safety, unreachable for unit x
            return None
    while (hi - lo) > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

@dataclass
class SuiteReport:
    suite: str
    dims: list[int]
    trials: int
    failures: list[dict] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "dims": self.dims,
            "trials": self.trials,
            "failures": self.failures,
            "elapsed_ms": self.elapsed_ms,
        }


def _trial_rng(seed: int, dim: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, dim, index])


def _suite_lemma_rng(dim: int, rng: np.random.Generator, tol: Tolerances) -> list[str]:
    r = int(rng.integers(1, dim + 1))
    b = _random_psd_rank(rng, dim, r, (0.5, 2.0))
    inside = bool(rng.integers(0, 2)) and r < dim
    if inside or r == dim:
        # x a random combination of B's range: guaranteed dominated
        coeffs = rng.normal(size=r) + 1j * rng.normal(size=r)
        from .hermitian import range_basis

        basis = range_basis(b, tol)
        x = sum(c * v for c, v in zip(coeffs, basis))
        x = x / np.linalg.norm(x)
    else:
        x = _random_unit(rng, dim)
    a = rank_one(x, x)
    got = range_dominates(as_psd(a, tol), as_psd(HermitianMatrix.from_array(b), tol), tol)
    oracle = bisection_max_lambda(x, b) is not None
    if got != oracle:
        return [f"range_dominates={got} but bisection oracle says {oracle}"]
    return []


def _suite_lemma_rank(dim: int, rng: np.random.Generator, tol: Tolerances) -> list[str]:
    failures = []
    r = int(rng.integers(1, dim + 1))
    a = as_psd(HermitianMatrix.from_array(_random_psd_rank(rng, dim, r, (0.5, 2.0))), tol)
    for n in range(1, dim - 1):
        w = rank_gt_np1_witness(a, n, tol)
        if (w is not None) != (r > n + 1):
            failures.append(f"witness existence mismatch: rank={r}, n={n}, got={w is not None}")
        if w is not None and not check_rank_witness(a, w, tol):
            failures.append(f"witness invariants failed at rank={r}, n={n}")
    if not is_rank_one_by_order(a, samples=50, rng_seed=int(rng.integers(2**31))) == (r == 1):
        failures.append(f"is_rank_one_by_order disagrees with rank={r}")
    return failures


def _suite_thm1(dim: int, rng: np.random.Generator, tol: Tolerances) -> list[str]:
    failures = []
    t = _random_invertible(rng, dim)
    conj = bool(rng.integers(0, 2))
    phi = OrderAutomorphism.create(t, conjugate=conj)  # cone map: X = 0
    inv = invert(phi)
    for _ in range(5):
        r = int(rng.integers(1, dim + 1))
        a = _random_psd_rank(rng, dim, r, (0.5, 2.0))
        fa = apply(phi, a)
        if rank_numeric(fa, tol) != r:
            failures.append(f"congruence changed rank {r} -> {rank_numeric(fa, tol)}")
        p = _random_psd_rank(rng, dim, dim, (0.1, 1.0))
        b = a + p
        if not (leq(apply(phi, a), apply(phi, b), tol) and leq(apply(inv, a), apply(inv, b), tol)):
            failures.append("congruence failed to preserve a constructed <= pair")
        if leq(apply(phi, b), apply(phi, a), tol):
            failures.append("congruence created a spurious reverse ordering")
    return failures


def _gauge_distance(t_rec: np.ndarray, t_gen: np.ndarray) -> float:
    """min over unit phases of ||t_rec - e^{i theta} t_gen|| / ||t_gen||."""
    inner = complex(np.trace(t_gen.conj().T @ t_rec))
    theta = inner / abs(inner) if abs(inner) > 0 else 1.0
    return float(np.linalg.norm(t_rec - theta * t_gen) / np.linalg.norm(t_gen))


def _suite_thm2(
    dim: int, rng: np.random.Generator, tol: Tolerances, cond_cap: float = CONDITION_CAP,
    residual_tol: float = 1e-6,
) -> list[str]:
    t0 = _random_invertible(rng, dim, cond_cap)
    conj0 = bool(rng.integers(0, 2))
    x0 = _random_hermitian(rng, dim)
    phi0 = OrderAutomorphism.create(t0, conjugate=conj0, x=x0)
    handle = from_automorphism(phi0)
    report = reconstruct(handle, seed=int(rng.integers(2**31)), tol=tol)
    failures = []
    rec = report.recovered
    if _gauge_distance(rec.T, t0) > residual_tol:
        failures.append(f"T mismatch beyond {residual_tol:g} (residual {report.max_residual:.2e})")
    if float(np.max(np.abs(rec.X.mat - (x0 + x0.conj().T) / 2))) > 1e-8:
        failures.append("X mismatch beyond 1e-8")
    if rec.conjugate != conj0 and not report.conjugate_degenerate:
        failures.append("conjugation flag mismatch")
    return failures


def _suite_thm2_illcond(dim: int, rng: np.random.Generator, tol: Tolerances) -> list[str]:
    # stress: condition numbers above the default cap, relaxed residual
    for _ in range(100):
        t = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        s = np.linalg.svd(t, compute_uv=False)
        if 1e4 < s[0] / s[-1] <= 1e6:
            break
    else:
        # force the conditioning by rescaling singular values
        u, s, vh = np.linalg.svd(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
        s = np.geomspace(1.0, 1e-5, dim)
        t = u @ np.diag(s) @ vh
    phi0 = OrderAutomorphism.create(t, conjugate=bool(rng.integers(0, 2)), x=_random_hermitian(rng, dim))
    handle = from_automorphism(phi0)
    try:
        report = reconstruct(handle, seed=int(rng.integers(2**31)), tol=tol)
    except Exception as exc:  # conditioning failures must be loud, not wrong
        return [f"reconstruction raised: {exc}"]
    if _gauge_distance(report.recovered.T, t) > 1e-3:
        return ["T mismatch beyond relaxed 1e-3"]
    return []


def _suite_cor3(dim: int, rng: np.random.Generator, tol: Tolerances) -> list[str]:
    failures = []
    # positive branch: unitary-scalar instance
    u = _random_unitary(rng, dim)
    lam = float(rng.uniform(0.5, 2.0))
    mu = float(rng.uniform(-1.0, 1.0))
    phi = OrderAutomorphism.create(
        np.sqrt(lam) * u, conjugate=bool(rng.integers(0, 2)), x=mu * np.eye(dim)
    )
    cls = preserves_relation(phi, RelationKind.COMMUTATIVITY, seed=int(rng.integers(2**31)), tol=tol)
    if not cls.preserves:
        failures.append("unitary-scalar automorphism misclassified as non-preserving")
    else:
        form = cls.canonical_form
        if abs(form.lam - lam) > 1e-6 * lam or abs(form.mu - mu) > 1e-6 * max(1, abs(mu)):
            failures.append("canonical (lambda, mu) mismatch")
    # negative branch: non-scalar T*T or non-scalar X
    if rng.integers(0, 2):
        t = _random_invertible(rng, dim)
        if local_scalar(t.conj().T @ t) is not None:
            t = t @ np.diag(np.linspace(1.0, 2.0, dim))
        x = mu * np.eye(dim)
    else:
        t = np.sqrt(lam) * u
        x = _random_hermitian(rng, dim)
        if local_scalar(x) is not None:
            x = x + np.diag(np.linspace(0.0, 1.0, dim))
    bad = OrderAutomorphism.create(t, conjugate=False, x=x)
    cls = preserves_relation(bad, RelationKind.COMMUTATIVITY, seed=int(rng.integers(2**31)), tol=tol)
    if cls.preserves:
        failures.append("non-preserving automorphism misclassified as preserving")
    else:
        ce = cls.counterexample
        if ce.holds_before == ce.holds_after:
            failures.append("counterexample does not separate the relation")
    return failures


def local_scalar(s: np.ndarray) -> float | None:
    evals = np.linalg.eigvalsh(s)
    if float(evals[-1] - evals[0]) <= 1e-9 * max(1.0, float(np.abs(evals).max())):
        return float(np.mean(evals))
    return None


def _suite_cor4(dim: int, rng: np.random.Generator, tol: Tolerances) -> list[str]:
    failures = []
    c = float(rng.uniform(-2.0, 2.0))
    b = _random_hermitian(rng, dim)
    if not complementary(c * np.eye(dim), b, tol):
        failures.append("scalar not complementary to a random observable")
    # non-scalar A: violating partner shares an eigenvector
    a = _random_hermitian(rng, dim)
    if local_scalar(a) is not None:
        a = a + np.diag(np.linspace(0.0, 1.0, dim))
    _, vecs = np.linalg.eigh(a)
    partner = rank_one(vecs[:, 0], vecs[:, 0])
    if complementary(a, partner, tol):
        failures.append("constructed shared-eigenvector partner not flagged")
    return failures


def _suite_cor5(dim: int, rng: np.random.Generator, tol: Tolerances) -> list[str]:
    failures = []
    phi = _random_automorphism(rng, dim)
    if rng.integers(0, 3) == 0:
        # make a genuinely preserving instance part of the mix
        phi = OrderAutomorphism.create(
            float(rng.uniform(0.5, 2.0)) * _random_unitary(rng, dim),
            conjugate=bool(rng.integers(0, 2)),
        )
    s = phi.T.conj().T @ phi.T
    analytic = local_scalar(s) is not None and float(
        np.max(np.abs(np.linalg.eigvalsh(phi.X.mat)))
    ) <= 1e-9 * max(1.0, float(np.abs(np.linalg.eigvalsh(s)).max()))
    cls = preserves_relation(phi, RelationKind.ORTHOGONALITY, seed=int(rng.integers(2**31)), tol=tol)
    if cls.preserves != analytic:
        failures.append(f"verdict {cls.preserves} disagrees with analytic {analytic}")
    if not cls.preserves:
        ce = cls.counterexample
        before = orthogonal(ce.a, ce.b, tol)
        after = orthogonal(apply(phi, ce.a).mat, apply(phi, ce.b).mat, tol)
        if before == after or before != ce.holds_before or after != ce.holds_after:
            failures.append("shipped counterexample fails re-verification")
    return failures


_SUITES = {
    "thm1": _suite_thm1,
    "thm2": _suite_thm2,
    "thm2-illcond": _suite_thm2_illcond,
    "lemma-rng": _suite_lemma_rng,
    "lemma-rank": _suite_lemma_rank,
    "cor3": _suite_cor3,
    "cor4": _suite_cor4,
    "cor5": _suite_cor5,
}

SUITE_NAMES = tuple(sorted(_SUITES))


def run_suite(
    name: str,
    dims: list[int],
    trials: int,
    seed: int = 0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> SuiteReport:
    """Run one named suite; the report is a pure function of the arguments
    (wall time aside)."""
    if name not in _SUITES:
        raise ValidationError(f"unknown suite '{name}'; known: {', '.join(SUITE_NAMES)}")
    fn = _SUITES[name]
    start = time.perf_counter()
    failures = []
    for dim in dims:
        if dim < 2:
            raise ValidationError("suites require dimension >= 2")
        for k in range(trials):
            digest = hashlib.sha256(_trial_rng(seed, dim, k).bytes(32)).hexdigest()[:16]
            problems = fn(dim, _trial_rng(seed, dim, k), tolerances)
            for msg in problems:
                failures.append(
                    {
                        "seed": seed,
                        "dim": dim,
                        "trial": k,
                        "digest": digest,
                        "violated": msg,
                    }
                )
    elapsed = (time.perf_counter() - start) * 1000.0
    return SuiteReport(
        suite=name, dims=list(dims), trials=trials, failures=failures, elapsed_ms=elapsed
    )


def replay_trial(name: str, dim: int, trial: int, seed: int,
                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> list[str]:
    """Re-run a single recorded trial; reproduces its failure bit-exactly."""
    if name not in _SUITES:
        raise ValidationError(f"unknown suite '{name}'")
    return _SUITES[name](dim, _trial_rng(seed, dim, trial), tolerances)
