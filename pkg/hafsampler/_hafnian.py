"""Exact hafnians.

``hafnian_naive`` is the (2n)!-term permutation sum, kept as a test oracle.
``hafnian`` expands along the first remaining index,

    haf(X) = sum_{j > 0} X[0, j] * haf(X without rows/cols 0 and j),

memoized on the bitmask of remaining indices. :class:`HafnianCache` shares
that memo across many subsets of one matrix, which is what makes exhaustive
k-subset enumeration affordable.
"""
from __future__ import annotations

import itertools
import math
from typing import Iterable

import numpy as np

from ._config import get_setting
from ._errors import BudgetExceededError, GraphValidationError
from ._types import Graph, Subset, as_subset


def _as_symmetric(m) -> np.ndarray:
    mat = np.asarray(m.adj if isinstance(m, Graph) else m, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise GraphValidationError(f"hafnian needs a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise GraphValidationError("matrix has non-finite entries")
    scale = float(np.max(np.abs(mat))) if mat.size else 0.0
    if not np.allclose(mat, mat.T, rtol=0.0, atol=1e-12 * max(scale, 1.0)):
        raise GraphValidationError("hafnian needs a symmetric matrix")
    return mat


def double_factorial(n: int) -> int:
    """n!! with the convention (-1)!! = 0!! = 1."""
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def matching_count(k: int) -> int:
    """Number of perfect matchings of K_k: (k-1)!! for even k, 0 for odd k."""
    if k % 2:
        return 0
    return double_factorial(k - 1)


class HafnianCache:
    """Hafnians of principal submatrices of one symmetric matrix.

    Only the strict upper triangle is read, so diagonal entries never matter.
    """

    def __init__(self, matrix, max_entries: int = 4_000_000):
        mat = _as_symmetric(matrix)
        self.dim = mat.shape[0]
        self._rows = mat.tolist()
        self._memo: dict[int, float] = {0: 1.0}
        self._max_entries = max_entries

    def __len__(self) -> int:
        return len(self._memo)

    def _haf(self, mask: int) -> float:
        hit = self._memo.get(mask)
        if hit is not None:
            return hit
        low = mask & -mask
        row = self._rows[low.bit_length() - 1]
        rest = mask ^ low
        total = 0.0
        m = rest
        while m:
            bit = m & -m
            x = row[bit.bit_length() - 1]
            if x:
                total += x * self._haf(rest ^ bit)
            m ^= bit
        self._memo[mask] = total
        return total

    def __call__(self, vertices: Iterable[int]) -> float:
        mask = 0
        count = 0
        for v in vertices:
            mask |= 1 << v
            count += 1
        if count % 2:
            return 0.0
        if len(self._memo) > self._max_entries:
            self._memo = {0: 1.0}
        return self._haf(mask)


def hafnian(m, cap: int | None = None) -> float:
    """Exact hafnian of a real symmetric matrix (odd dim -> 0, empty -> 1)."""
    mat = _as_symmetric(m)
    dim = mat.shape[0]
    cap = get_setting("hafnian_cap", cap)
    if dim > cap:
        raise BudgetExceededError(f"hafnian of a {dim}x{dim} matrix exceeds the cap of {cap}")
    if dim % 2:
        return 0.0
    if dim == 0:
        return 1.0
    return HafnianCache(mat)(range(dim))


def hafnian_naive(m) -> float:
    """Permutation-sum hafnian, ``1/(2^n n!) sum_sigma prod_i X[s(2i-1), s(2i)]``."""
    mat = _as_symmetric(m)
    dim = mat.shape[0]
    cap = get_setting("naive_cap")
    if dim > cap:
        raise BudgetExceededError(f"naive hafnian is limited to dim <= {cap}, got {dim}")
    if dim % 2:
        return 0.0
    if dim == 0:
        return 1.0
    half = dim // 2
    rows = mat.tolist()
    total = 0.0
    for perm in itertools.permutations(range(dim)):
        prod = 1.0
        for i in range(half):
            prod *= rows[perm[2 * i]][perm[2 * i + 1]]
            if prod == 0.0:
                break
        total += prod
    return total / (2 ** half * math.factorial(half))


def hafnian_sub(g: Graph, s: Subset | Iterable[int], cap: int | None = None) -> float:
    """Hafnian of the adjacency submatrix induced by ``s``; 0 for odd ``|s|``."""
    sub = as_subset(s, g.n)
    if len(sub) % 2:
        return 0.0
    if not sub:
        return 1.0
    idx = np.asarray(sub, dtype=np.intp)
    return hafnian(g.adj[np.ix_(idx, idx)], cap=cap)
