"""Componentwise algebra of alternating covectors.

A p-covector in R^d is represented by its coefficients on the ascending
index combinations of the ambient basis, in lexicographic order.  Degree 0
uses the single empty combination, so scalars travel through the same code
paths as higher-degree components.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations

import numpy as np

__all__ = [
    "index_combinations",
    "num_components",
    "wedge",
    "eval_on_frame",
    "inner_product",
]


@lru_cache(maxsize=None)
def index_combinations(d: int, p: int) -> tuple:
    """Ascending p-element index tuples out of range(d), lexicographic."""
    return tuple(combinations(range(d), p))


@lru_cache(maxsize=None)
def _combination_positions(d: int, p: int) -> dict:
    return {c: i for i, c in enumerate(index_combinations(d, p))}


def num_components(d: int, p: int) -> int:
    return math.comb(d, p)


@lru_cache(maxsize=None)
def _shuffle_table(d: int, p: int, q: int) -> tuple:
    """All (out, left, right, sign) index quadruples of the shuffle formula."""
    pos_p = _combination_positions(d, p)
    pos_q = _combination_positions(d, q)
    table = []
    for out_idx, union in enumerate(index_combinations(d, p + q)):
        for left in combinations(union, p):
            right = tuple(i for i in union if i not in left)
            inversions = sum(1 for a in left for b in right if a > b)
            table.append((out_idx, pos_p[left], pos_q[right], (-1) ** inversions))
    return tuple(table)


def wedge(a: np.ndarray, p: int, b: np.ndarray, q: int, d: int) -> np.ndarray:
    """Exterior product of component vectors; result has degree p + q.

    Arguments of higher degree first are routed through the graded swap, so
    a wedge and its graded-commuted twin are computed from identical
    floating-point products.
    """
    if p + q > d:
        raise ValueError(f"wedge degree {p + q} exceeds dimension {d}")
    if p == 0:
        return a[0] * np.asarray(b, dtype=float)
    if q == 0:
        return b[0] * np.asarray(a, dtype=float)
    if p > q:
        out = wedge(b, q, a, p, d)
        return out if (p * q) % 2 == 0 else -out
    out = np.zeros(num_components(d, p + q))
    for out_idx, ia, ib, sign in _shuffle_table(d, p, q):
        out[out_idx] += sign * (a[ia] * b[ib])
    return out


def eval_on_frame(comps: np.ndarray, p: int, frame: np.ndarray) -> float:
    """Value of a p-covector on p column vectors (a d x p frame)."""
    if p == 0:
        return float(comps[0])
    d = frame.shape[0]
    total = 0.0
    for idx, combo in enumerate(index_combinations(d, p)):
        c = comps[idx]
        if c != 0.0:
            total += c * float(np.linalg.det(frame[list(combo), :]))
    return total


def inner_product(a: np.ndarray, b: np.ndarray, p: int, d: int, metric=None) -> float:
    """Pointwise inner product of p-covectors.

    With no metric the ambient basis is orthonormal and the product is the
    plain dot of components.  A d x d SPD matrix acting on 1-covectors
    induces the product on degree p through Gram determinants of its
    submatrices.
    """
    if metric is None:
        return float(np.dot(a, b))
    if p == 0:
        return float(a[0] * b[0])
    combos = index_combinations(d, p)
    total = 0.0
    for i, ci in enumerate(combos):
        if a[i] == 0.0:
            continue
        for j, cj in enumerate(combos):
            if b[j] == 0.0:
                continue
            total += a[i] * b[j] * float(np.linalg.det(metric[np.ix_(ci, cj)]))
    return total
