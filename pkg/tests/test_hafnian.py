"""Tests for exact hafnians.

Run:  python -m pytest tests/test_hafnian.py -v
"""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure hafsampler is importable
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from hafsampler._errors import BudgetExceededError, GraphValidationError
from hafsampler._graph import apply_vertex_weights, erdos_renyi
from hafsampler._hafnian import (HafnianCache, double_factorial, hafnian, hafnian_naive,
                                 hafnian_sub, matching_count)
from hafsampler._types import Graph, VertexWeights


def complete_matrix(n: int) -> np.ndarray:
    return np.ones((n, n)) - np.eye(n)


def random_symmetric(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.random((dim, dim))
    return (m + m.T) / 2


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------

class TestCompleteGraphs:
    @pytest.mark.parametrize("m,expected", [(1, 1), (2, 3), (3, 15), (4, 105)])
    def test_double_factorial(self, m, expected):
        assert hafnian(complete_matrix(2 * m)) == expected
        assert matching_count(2 * m) == expected

    def test_double_factorial_helper(self):
        assert double_factorial(7) == 105
        assert double_factorial(0) == 1
        assert double_factorial(-1) == 1


class TestEdgeCases:
    def test_empty(self):
        assert hafnian(np.zeros((0, 0))) == 1.0

    def test_odd(self):
        assert hafnian(complete_matrix(5)) == 0.0
        assert hafnian_naive(complete_matrix(3)) == 0.0

    def test_two_by_two(self):
        assert hafnian(np.array([[7.0, 2.5], [2.5, -3.0]])) == 2.5

    def test_not_square(self):
        with pytest.raises(GraphValidationError):
            hafnian(np.zeros((2, 3)))

    def test_not_symmetric(self):
        with pytest.raises(GraphValidationError):
            hafnian(np.array([[0, 1.0], [2.0, 0]]))

    def test_cap(self):
        with pytest.raises(BudgetExceededError):
            hafnian(complete_matrix(22))
        with pytest.raises(BudgetExceededError):
            hafnian(complete_matrix(6), cap=4)

    def test_naive_cap(self):
        with pytest.raises(BudgetExceededError):
            hafnian_naive(complete_matrix(10))


class TestDiagonalIndependence:
    def test_random(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            m = random_symmetric(rng, 6)
            shifted = m.copy()
            np.fill_diagonal(shifted, rng.random(6) * 10)
            assert hafnian(m) == hafnian(shifted)


class TestPermutationInvariance:
    def test_random(self):
        rng = np.random.default_rng(13)
        for dim in (2, 4, 6, 8, 10):
            m = random_symmetric(rng, dim)
            perm = rng.permutation(dim)
            assert hafnian(m[np.ix_(perm, perm)]) == pytest.approx(hafnian(m), rel=1e-12)

    def test_relabelled_graph(self):
        g = erdos_renyi(10, 0.5, 6)
        perm = np.random.default_rng(6).permutation(10)
        assert hafnian(g.adj[np.ix_(perm, perm)]) == hafnian(g.adj)


# ---------------------------------------------------------------------------
# Oracle equivalence
# ---------------------------------------------------------------------------

class TestAgainstNaive:
    def test_random_matrices(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            dim = int(rng.integers(2, 9))
            m = random_symmetric(rng, dim)
            assert hafnian(m) == pytest.approx(hafnian_naive(m), rel=1e-12, abs=0.0)

    def test_signed_entries(self):
        rng = np.random.default_rng(5)
        m = random_symmetric(rng, 6) - 0.5
        assert hafnian(m) == pytest.approx(hafnian_naive(m), rel=1e-10)


class TestHafnianSub:
    def test_cycle(self):
        c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        assert hafnian_sub(c4, [0, 1, 2, 3]) == 2.0
        assert hafnian_sub(c4, [0, 2]) == 0.0
        assert hafnian_sub(c4, [0, 1, 2]) == 0.0
        assert hafnian_sub(c4, []) == 1.0

    def test_matches_submatrix(self):
        g = erdos_renyi(9, 0.6, 17)
        s = [0, 2, 3, 5, 7, 8]
        idx = np.array(s)
        assert hafnian_sub(g, s) == hafnian(g.adj[np.ix_(idx, idx)])

    def test_out_of_range(self):
        with pytest.raises(GraphValidationError):
            hafnian_sub(erdos_renyi(4, 1.0, 0), [0, 4])

    def test_weighted_scaling(self):
        """haf((Omega A Omega)_s) = prod_{i in s} omega_i * haf(A_s)."""
        rng = np.random.default_rng(3)
        for trial in range(100):
            n = int(rng.integers(4, 9))
            g = erdos_renyi(n, 0.7, 1000 + trial)
            w = VertexWeights(rng.random(n))
            alpha = float(rng.uniform(0.1, 2.0))
            b = apply_vertex_weights(g, w, alpha)
            s = np.sort(rng.choice(n, size=4, replace=False))
            omega = 1.0 + alpha * w.w[s]
            expected = np.prod(omega) * hafnian_sub(g, s)
            assert hafnian_sub(b, s) == pytest.approx(expected, rel=1e-10, abs=1e-12)


class TestCache:
    def test_shared_memo(self):
        rng = np.random.default_rng(8)
        m = random_symmetric(rng, 10)
        cache = HafnianCache(m)
        for s in ([0, 1, 2, 3], [2, 3, 4, 9], [0, 1, 2, 3, 4, 5]):
            idx = np.array(s)
            assert cache(s) == pytest.approx(hafnian_naive(m[np.ix_(idx, idx)]), rel=1e-12)
        assert len(cache) > 1

    def test_odd_subset(self):
        assert HafnianCache(complete_matrix(4))([0, 1, 2]) == 0.0
