"""Exact-integer boundary and coboundary operators of a simplicial complex.

Boundary columns follow the canonical ascending-vertex convention: the
column of a p-simplex (i0 < ... < ip) carries (-1)^k in the row of the face
omitting i_k.  Coboundaries are boundary transposes.  The complex property
(boundary of boundary vanishes) is machine-checked in integer arithmetic
whenever a full operator family is built.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .mesh import AbstractComplex

__all__ = [
    "IntSparseMatrix",
    "ComplexMatrices",
    "ChainMapError",
    "boundary_matrix",
    "coboundary_matrix",
    "complex_matrices",
    "matrices_for",
    "apply_chain_map_check",
]


class ChainMapError(ValueError):
    """A vertex map fails to send simplices to simplices."""


class IntSparseMatrix:
    """Sparse matrix over the integers with arbitrary-precision entries.

    Entries are stored as a dict (row, col) -> nonzero Python int, so
    products and reductions never overflow.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = int(rows)
        self.cols = int(cols)
        self.entries = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (r, c), v in items:
                v = int(v)
                if v == 0:
                    continue
                if not (0 <= r < self.rows and 0 <= c < self.cols):
                    raise ValueError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
                if (r, c) in self.entries:
                    raise ValueError(f"duplicate entry at ({r}, {c})")
                self.entries[(r, c)] = v

    @classmethod
    def identity(cls, size: int) -> "IntSparseMatrix":
        return cls(size, size, {(i, i): 1 for i in range(size)})

    @classmethod
    def from_dense(cls, dense) -> "IntSparseMatrix":
        dense = [list(row) for row in dense]
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        ent = {}
        for i, row in enumerate(dense):
            for j, v in enumerate(row):
                if v:
                    ent[(i, j)] = int(v)
        return cls(rows, cols, ent)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def get(self, r: int, c: int) -> int:
        return self.entries.get((r, c), 0)

    def transpose(self) -> "IntSparseMatrix":
        return IntSparseMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def __matmul__(self, other: "IntSparseMatrix") -> "IntSparseMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in integer matrix product")
        by_row: dict = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict = {}
        for (i, k), va in self.entries.items():
            for j, vb in by_row.get(k, ()):
                key = (i, j)
                acc[key] = acc.get(key, 0) + va * vb
        return IntSparseMatrix(self.rows, other.cols, {k: v for k, v in acc.items() if v})

    def matvec(self, vec) -> list:
        """Exact integer matrix-vector product; vec entries must be ints."""
        out = [0] * self.rows
        for (r, c), v in self.entries.items():
            out[r] += v * int(vec[c])
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, IntSparseMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        return id(self)

    def to_dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def to_ndarray(self, dtype=float) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=dtype)
        for (r, c), v in self.entries.items():
            out[r, c] = v
        return out

    def to_csr(self) -> sp.csr_matrix:
        if not self.entries:
            return sp.csr_matrix((self.rows, self.cols))
        keys = sorted(self.entries)
        data = [float(self.entries[k]) for k in keys]
        ij = np.array(keys).T
        return sp.csr_matrix(
            (data, (ij[0], ij[1])), shape=(self.rows, self.cols)
        )

    def to_coordinate_text(self) -> str:
        """Serialize as 'rows cols nnz' header plus sorted 'row col value' lines."""
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        for (r, c) in sorted(self.entries):
            lines.append(f"{r} {c} {self.entries[(r, c)]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_coordinate_text(cls, text: str) -> "IntSparseMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        rows, cols, nnz = (int(tok) for tok in lines[0].split())
        if len(lines) - 1 != nnz:
            raise ValueError(f"expected {nnz} entry lines, got {len(lines) - 1}")
        ent = {}
        for ln in lines[1:]:
            r, c, v = ln.split()
            ent[(int(r), int(c))] = int(v)
        return cls(rows, cols, ent)

    def __repr__(self):
        return f"IntSparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def boundary_matrix(ac: AbstractComplex, p: int) -> IntSparseMatrix:
    """Boundary operator from p-chains to (p-1)-chains, exact integers."""
    if not 1 <= p <= ac.complex_dim:
        raise ValueError(f"boundary degree {p} outside 1..{ac.complex_dim}")
    ent = {}
    lower = ac.index_of[p - 1]
    for j, s in enumerate(ac.simplices[p]):
        for k in range(p + 1):
            face = s[:k] + s[k + 1:]
            ent[(lower[face], j)] = (-1) ** k
    return IntSparseMatrix(ac.num_simplices(p - 1), ac.num_simplices(p), ent)


def coboundary_matrix(ac: AbstractComplex, p: int) -> IntSparseMatrix:
    """Coboundary operator from p-cochains to (p+1)-cochains (boundary transpose)."""
    if not 0 <= p <= ac.complex_dim - 1:
        raise ValueError(f"coboundary degree {p} outside 0..{ac.complex_dim - 1}")
    return boundary_matrix(ac, p + 1).transpose()


@dataclass
class ComplexMatrices:
    """All boundary/coboundary operators of one complex, with dd = 0 verified."""

    complex_dim: int
    counts: list
    boundary: dict
    coboundary: dict
    _csr_cache: dict = field(default_factory=dict, repr=False)

    def boundary_csr(self, p: int) -> sp.csr_matrix:
        key = ("b", p)
        if key not in self._csr_cache:
            self._csr_cache[key] = self.boundary[p].to_csr()
        return self._csr_cache[key]

    def coboundary_csr(self, p: int) -> sp.csr_matrix:
        key = ("d", p)
        if key not in self._csr_cache:
            self._csr_cache[key] = self.coboundary[p].to_csr()
        return self._csr_cache[key]


def complex_matrices(ac: AbstractComplex) -> ComplexMatrices:
    """Build every boundary and coboundary matrix and verify dd = 0 exactly."""
    n = ac.complex_dim
    boundary = {p: boundary_matrix(ac, p) for p in range(1, n + 1)}
    coboundary = {p: boundary[p + 1].transpose() for p in range(0, n)}
    for p in range(1, n):
        if not (boundary[p] @ boundary[p + 1]).is_zero():
            raise AssertionError(f"boundary composition nonzero at degree {p}")
    return ComplexMatrices(n, ac.face_counts(), boundary, coboundary)


_MATRICES_CACHE: "weakref.WeakKeyDictionary[AbstractComplex, ComplexMatrices]" = (
    weakref.WeakKeyDictionary()
)


def matrices_for(ac: AbstractComplex) -> ComplexMatrices:
    """Cached complex_matrices keyed on the complex instance."""
    cm = _MATRICES_CACHE.get(ac)
    if cm is None:
        cm = complex_matrices(ac)
        _MATRICES_CACHE[ac] = cm
    return cm


def _induced_map(source: AbstractComplex, target: AbstractComplex, fmap, p: int) -> IntSparseMatrix:
    rows = target.num_simplices(p) if p <= target.complex_dim else 0
    ent = {}
    for j, s in enumerate(source.simplices[p]):
        image = [fmap[v] for v in s]
        if len(set(image)) != p + 1:
            continue  # degenerate image contributes zero
        key = tuple(sorted(image))
        if p > target.complex_dim or key not in target.index_of[p]:
            raise ChainMapError(f"image of simplex {s} is not a simplex of the target")
        ent[(target.index_of[p][key], j)] = _permutation_sign(image)
    return IntSparseMatrix(rows, source.num_simplices(p), ent)


def _permutation_sign(seq) -> int:
    order = sorted(range(len(seq)), key=lambda k: seq[k])
    sign = 1
    order = list(order)
    for i in range(len(order)):
        while order[i] != i:
            j = order[i]
            order[i], order[j] = order[j], order[i]
            sign = -sign
    return sign


def apply_chain_map_check(source: AbstractComplex, target: AbstractComplex, vertex_map) -> bool:
    """Check that the chain maps induced by a vertex map commute with boundaries.

    ``vertex_map`` maps vertex ids of the source complex to vertex ids of
    the target; simplices with repeated image vertices are sent to zero.
    Returns True iff the induced maps satisfy f(boundary(c)) =
    boundary(f(c)) for every degree, in exact integer arithmetic.  Raises
    ChainMapError when a non-degenerate image is not a target simplex.
    """
    fmap = dict(enumerate(vertex_map)) if not isinstance(vertex_map, dict) else vertex_map
    n = source.complex_dim
    induced = [_induced_map(source, target, fmap, p) for p in range(n + 1)]
    src = matrices_for(source)
    tgt = matrices_for(target)
    for p in range(1, n + 1):
        lhs = induced[p - 1] @ src.boundary[p]
        if p <= target.complex_dim:
            rhs = tgt.boundary[p] @ induced[p]
        else:
            rhs = IntSparseMatrix(induced[p - 1].rows, induced[p].cols)
        if lhs != rhs:
            return False
    return True
