import numpy as np
import pytest

from obsorder import (
    DimensionMismatchError,
    PsdMatrix,
    Relation,
    ValidationError,
    compare,
    leq,
    max_lambda,
    range_dominates,
)
from obsorder.harness import bisection_max_lambda
from obsorder.loewner import quadratic_form
from conftest import random_hermitian, random_invertible, random_psd, random_unit


class TestLeq:
    def test_zero_below_identity(self):
        assert leq(np.zeros((3, 3)), np.eye(3))

    def test_indefinite_difference(self):
        assert not leq(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))

    def test_constructed_majorant(self, rng):
        for d in range(2, 7):
            a = random_hermitian(rng, d)
            assert leq(a, a + random_psd(rng, d))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            leq(np.eye(2), np.eye(3))

    def test_order_axioms_on_chains(self, rng):
        for _ in range(50):
            d = int(rng.integers(2, 7))
            a = random_hermitian(rng, d)
            p = random_psd(rng, d)
            q = random_psd(rng, d)
            assert leq(a, a)  # reflexive
            assert leq(a, a + p) and leq(a + p, a + p + q)
            assert leq(a, a + p + q)  # transitive along the chain
            # antisymmetry up to EQUAL
            if leq(a + p, a):
                assert compare(a, a + p).relation is Relation.EQUAL


class TestCompare:
    def test_equal(self, rng):
        a = random_hermitian(rng, 3)
        assert compare(a, a.copy()).relation is Relation.EQUAL

    def test_incomparable_witnesses(self):
        r = compare(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert r.relation is Relation.INCOMPARABLE
        np.testing.assert_allclose(np.abs(r.witness_ab.x), [1.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(np.abs(r.witness_ba.x), [0.0, 1.0], atol=1e-12)

    def test_leq_carries_no_witness(self):
        r = compare(np.diag([1.0, 1.0]), np.diag([2.0, 3.0]))
        assert r.relation is Relation.LEQ
        assert r.witness_ab is None and r.witness_ba is None

    def test_witness_soundness(self, rng):
        for _ in range(100):
            d = int(rng.integers(2, 7))
            a = random_hermitian(rng, d)
            b = random_hermitian(rng, d)
            r = compare(a, b)
            scale = max(np.linalg.norm(a, 2), np.linalg.norm(b, 2), 1.0)
            for w, (lo, hi) in ((r.witness_ab, (a, b)), (r.witness_ba, (b, a))):
                if w is None:
                    continue
                assert abs(np.linalg.norm(w.x) - 1.0) <= 1e-12
                gap = quadratic_form(lo, w.x) - quadratic_form(hi, w.x)
                assert gap == pytest.approx(w.gap, rel=1e-9)
                assert gap > 1e-9 * scale


class TestMaxLambda:
    def test_identity(self):
        lam = max_lambda(np.array([1.0, 0.0]), PsdMatrix.from_hermitian(np.eye(2)))
        assert lam == pytest.approx(1.0, rel=1e-9)

    def test_outside_range(self):
        lam = max_lambda(np.array([0.0, 1.0]), PsdMatrix.from_hermitian(np.diag([1.0, 0.0])))
        assert lam is None

    def test_against_bisection(self, rng):
        b = np.diag([4.0, 1.0])
        lam = max_lambda(np.array([1.0, 0.0]), PsdMatrix.from_hermitian(b))
        assert lam == pytest.approx(4.0, rel=1e-8)
        assert bisection_max_lambda(np.array([1.0, 0.0]), b) == pytest.approx(lam, rel=1e-8)

    def test_random_against_bisection(self, rng):
        for _ in range(30):
            d = int(rng.integers(2, 6))
            b = random_psd(rng, d)
            x = random_unit(rng, d)
            lam = max_lambda(x, PsdMatrix.from_hermitian(b))
            oracle = bisection_max_lambda(x, b)
            assert lam == pytest.approx(oracle, rel=1e-7)

    def test_extremality(self, rng):
        for _ in range(30):
            d = int(rng.integers(2, 6))
            b = random_psd(rng, d)
            x = random_unit(rng, d)
            lam = max_lambda(x, PsdMatrix.from_hermitian(b))
            lo = np.linalg.eigvalsh(b - lam * np.outer(x, x.conj()))[0]
            norm = np.linalg.norm(b, 2)
            assert -1e-9 * max(1.0, norm) <= lo <= 1e-6 * norm * 10

    def test_rejects_non_unit(self):
        with pytest.raises(ValidationError):
            max_lambda(np.array([2.0, 0.0]), PsdMatrix.from_hermitian(np.eye(2)))


class TestRangeDominates:
    def test_inside(self):
        a = PsdMatrix.from_hermitian(np.diag([1.0, 0.0, 0.0]))
        b = PsdMatrix.from_hermitian(np.diag([1.0, 1.0, 0.0]))
        assert range_dominates(a, b)

    def test_outside(self):
        a = PsdMatrix.from_hermitian(np.diag([0.0, 0.0, 1.0]))
        b = PsdMatrix.from_hermitian(np.diag([1.0, 1.0, 0.0]))
        assert not range_dominates(a, b)

    def test_rank_precondition(self):
        with pytest.raises(ValidationError):
            range_dominates(
                PsdMatrix.from_hermitian(np.eye(2)), PsdMatrix.from_hermitian(np.eye(2))
            )

    def test_constructed_combination(self, rng):
        for _ in range(30):
            g = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
            b = g @ g.conj().T
            c = rng.normal(size=2) + 1j * rng.normal(size=2)
            x = g @ c
            x /= np.linalg.norm(x)
            a = np.outer(x, x.conj())
            assert range_dominates(
                PsdMatrix.from_hermitian(a), PsdMatrix.from_hermitian(b)
            )

    def test_matches_bisection_oracle(self, rng):
        for _ in range(100):
            d = int(rng.integers(2, 7))
            k = int(rng.integers(1, d + 1))
            b = random_psd(rng, d, rank=k)
            if rng.integers(0, 2) and k < d:
                x = random_unit(rng, d)
            else:
                evals, evecs = np.linalg.eigh(b)
                cols = evecs[:, evals > 1e-8]
                c = rng.normal(size=cols.shape[1]) + 1j * rng.normal(size=cols.shape[1])
                x = cols @ c
                x /= np.linalg.norm(x)
            a = np.outer(x, x.conj())
            got = range_dominates(PsdMatrix.from_hermitian(a), PsdMatrix.from_hermitian(b))
            assert got == (bisection_max_lambda(x, b) is not None)


def test_congruence_monotonicity(rng):
    for _ in range(100):
        d = int(rng.integers(2, 7))
        t = random_invertible(rng, d)
        a = random_hermitian(rng, d)
        b = random_hermitian(rng, d)
        fa = t @ a @ t.conj().T
        fb = t @ b @ t.conj().T
        assert leq(a, b) == leq(fa, fb)
        assert leq(b, a) == leq(fb, fa)
