"""Exact integer homology: Smith normal form, Betti numbers, torsion, generators.

Everything here runs in arbitrary-precision integer arithmetic; no floating
point enters any rank or group computation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import ComplexMatrices, IntSparseMatrix

__all__ = [
    "SnfResult",
    "HomologySummary",
    "smith_normal_form",
    "betti_numbers",
    "torsion_coefficients",
    "homology_generators",
    "cohomology_betti",
    "homology_summary",
]


@dataclass
class SnfResult:
    """Smith normal form U A V = D with unimodular U, V.

    ``diag`` lists the positive invariant factors d1 | d2 | ...; ``rank`` is
    their count.  ``left``/``right`` are U and V; exact inverses are carried
    along so kernel and quotient bases can be read off without further
    elimination.  Transform fields are None for rank-only runs.
    """

    diag: list
    rank: int
    left: IntSparseMatrix | None
    right: IntSparseMatrix | None
    left_inv: IntSparseMatrix | None
    right_inv: IntSparseMatrix | None


class _Eliminator:
    """Sparse integer elimination with full transform tracking.

    The working matrix lives in dict-of-dict rows plus a column index.  U,
    V^T, U^-T and V^-1 are stored row-major so that every elementary matrix
    operation reduces to a row operation on the bookkeeping tables.
    """

    def __init__(self, mat: IntSparseMatrix, with_transforms: bool):
        self.m, self.n = mat.rows, mat.cols
        self.rows: dict = {}
        self.colrows: dict = {}
        for (r, c), v in mat.entries.items():
            self.rows.setdefault(r, {})[c] = v
            self.colrows.setdefault(c, set()).add(r)
        self.with_transforms = with_transforms
        if with_transforms:
            self.U = {i: {i: 1} for i in range(self.m)}
            self.UinvT = {i: {i: 1} for i in range(self.m)}
            self.VT = {j: {j: 1} for j in range(self.n)}
            self.Vinv = {j: {j: 1} for j in range(self.n)}

    @staticmethod
    def _axpy(table: dict, dst: int, src: int, q: int):
        """table row_dst -= q * row_src."""
        drow = table.setdefault(dst, {})
        for c, v in list(table.get(src, {}).items()):
            nv = drow.get(c, 0) - q * v
            if nv:
                drow[c] = nv
            else:
                drow.pop(c, None)

    @staticmethod
    def _swap_rows(table: dict, i: int, j: int):
        table[i], table[j] = table.get(j, {}), table.get(i, {})

    @staticmethod
    def _negate_row(table: dict, i: int):
        row = table.get(i, {})
        for c in row:
            row[c] = -row[c]

    def entry(self, r: int, c: int) -> int:
        return self.rows.get(r, {}).get(c, 0)

    def row_sub(self, i: int, t: int, q: int):
        """A row_i -= q * row_t, mirrored on U and U^-T."""
        drow = self.rows.setdefault(i, {})
        for c, v in list(self.rows.get(t, {}).items()):
            nv = drow.get(c, 0) - q * v
            if nv:
                drow[c] = nv
                self.colrows.setdefault(c, set()).add(i)
            else:
                drow.pop(c, None)
                self.colrows.get(c, set()).discard(i)
        if not drow:
            self.rows.pop(i, None)
        if self.with_transforms:
            self._axpy(self.U, i, t, q)
            self._axpy(self.UinvT, t, i, -q)

    def col_sub(self, j: int, t: int, q: int):
        """A col_j -= q * col_t, mirrored on V^T and V^-1."""
        for r in list(self.colrows.get(t, ())):
            v = self.rows[r][t]
            row = self.rows[r]
            nv = row.get(j, 0) - q * v
            if nv:
                row[j] = nv
                self.colrows.setdefault(j, set()).add(r)
            else:
                row.pop(j, None)
                self.colrows.get(j, set()).discard(r)
        if self.with_transforms:
            self._axpy(self.VT, j, t, q)
            self._axpy(self.Vinv, t, j, -q)

    def row_swap(self, i: int, t: int):
        if i == t:
            return
        ri = self.rows.pop(i, {})
        rt = self.rows.pop(t, {})
        if rt:
            self.rows[i] = rt
        if ri:
            self.rows[t] = ri
        for c in set(ri) | set(rt):
            members = self.colrows.setdefault(c, set())
            members.discard(i)
            members.discard(t)
            if c in rt:
                members.add(i)
            if c in ri:
                members.add(t)
        if self.with_transforms:
            self._swap_rows(self.U, i, t)
            self._swap_rows(self.UinvT, i, t)

    def col_swap(self, j: int, t: int):
        if j == t:
            return
        cj = self.colrows.pop(j, set())
        ct = self.colrows.pop(t, set())
        for r in cj | ct:
            row = self.rows[r]
            vj, vt = row.pop(j, None), row.pop(t, None)
            if vj is not None:
                row[t] = vj
            if vt is not None:
                row[j] = vt
        if ct:
            self.colrows[j] = ct
        if cj:
            self.colrows[t] = cj
        if self.with_transforms:
            self._swap_rows(self.VT, j, t)
            self._swap_rows(self.Vinv, j, t)

    def row_negate(self, i: int):
        self._negate_row(self.rows, i)
        if self.with_transforms:
            self._negate_row(self.U, i)
            self._negate_row(self.UinvT, i)


def _select_pivot(elim: _Eliminator, t: int):
    """Smallest |value|, then least fill-in estimate, then lowest (row, col)."""
    best = None
    best_key = None
    for r in elim.rows:
        if r < t:
            continue
        row = elim.rows[r]
        rlen = len(row)
        for c, v in row.items():
            if c < t:
                continue
            fill = (rlen - 1) * (len(elim.colrows[c]) - 1)
            key = (abs(v), fill, r, c)
            if best_key is None or key < best_key:
                best_key = key
                best = (r, c)
    return best


def _process_pivot(elim: _Eliminator, t: int):
    while True:
        # Euclidean sweeps until the pivot divides its whole row and column.
        while True:
            if elim.entry(t, t) < 0:
                elim.row_negate(t)
            p = elim.entry(t, t)
            for i in sorted(elim.colrows.get(t, set()) - {t}):
                q = elim.rows[i][t] // p
                if q:
                    elim.row_sub(i, t, q)
            for j in sorted(c for c in elim.rows.get(t, {}) if c != t):
                q = elim.rows[t][j] // p
                if q:
                    elim.col_sub(j, t, q)
            leftovers = [
                (abs(elim.rows[i][t]), 0, i)
                for i in elim.colrows.get(t, set())
                if i != t
            ]
            leftovers += [
                (abs(elim.rows[t][j]), 1, j) for j in elim.rows.get(t, {}) if j != t
            ]
            if not leftovers:
                break
            _, kind, idx = min(leftovers)
            if kind == 0:
                elim.row_swap(idx, t)
            else:
                elim.col_swap(idx, t)
        # Invariant-factor condition: pivot divides the remaining submatrix.
        p = elim.entry(t, t)
        violator = None
        for r in sorted(elim.rows):
            if r <= t:
                continue
            if any(c > t and v % p for c, v in elim.rows[r].items()):
                violator = r
                break
        if violator is None:
            return
        elim.row_sub(t, violator, -1)


def smith_normal_form(mat: IntSparseMatrix, with_transforms: bool = True) -> SnfResult:
    """Smith normal form over the integers.

    Returns positive invariant factors d1 | d2 | ..., the rank, and
    unimodular U, V with U A V = diag(d1, ..., dr, 0, ...).  The pivot rule
    is total-ordered, so identical inputs give identical outputs.
    """
    elim = _Eliminator(mat, with_transforms)
    diag: list = []
    t = 0
    limit = min(elim.m, elim.n)
    while t < limit:
        pivot = _select_pivot(elim, t)
        if pivot is None:
            break
        elim.row_swap(pivot[0], t)
        elim.col_swap(pivot[1], t)
        _process_pivot(elim, t)
        diag.append(elim.entry(t, t))
        t += 1
    rank = len(diag)
    if not with_transforms:
        return SnfResult(diag, rank, None, None, None, None)

    def build(table: dict, size: int, transposed: bool = False) -> IntSparseMatrix:
        ent = {}
        for r, row in table.items():
            for c, v in row.items():
                ent[(c, r) if transposed else (r, c)] = v
        return IntSparseMatrix(size, size, ent)

    return SnfResult(
        diag,
        rank,
        left=build(elim.U, elim.m),
        right=build(elim.VT, elim.n, transposed=True),
        left_inv=build(elim.UinvT, elim.m, transposed=True),
        right_inv=build(elim.Vinv, elim.n),
    )


def _boundary_rank(cm: ComplexMatrices, p: int) -> int:
    """Integer rank of the degree-p boundary operator (0 outside 1..n)."""
    if p < 1 or p > cm.complex_dim:
        return 0
    cache = getattr(cm, "_boundary_rank_cache", None)
    if cache is None:
        cache = {}
        cm._boundary_rank_cache = cache  # type: ignore[attr-defined]
    if p not in cache:
        cache[p] = smith_normal_form(cm.boundary[p], with_transforms=False).rank
    return cache[p]


def betti_numbers(cm: ComplexMatrices) -> list:
    """Betti numbers beta_0..beta_n from exact integer ranks."""
    return [
        cm.counts[p] - _boundary_rank(cm, p) - _boundary_rank(cm, p + 1)
        for p in range(cm.complex_dim + 1)
    ]


def torsion_coefficients(cm: ComplexMatrices, p: int) -> list:
    """Invariant factors > 1 of the degree-p homology group."""
    if not 0 <= p <= cm.complex_dim:
        raise ValueError(f"degree {p} outside 0..{cm.complex_dim}")
    if p == cm.complex_dim:
        return []
    snf = smith_normal_form(cm.boundary[p + 1], with_transforms=False)
    return [d for d in snf.diag if d > 1]


def cohomology_betti(cm: ComplexMatrices, p: int) -> int:
    """Real Betti number from coboundary ranks (torsion is invisible here)."""
    if not 0 <= p <= cm.complex_dim:
        raise ValueError(f"degree {p} outside 0..{cm.complex_dim}")
    cache = getattr(cm, "_coboundary_rank_cache", None)
    if cache is None:
        cache = {}
        cm._coboundary_rank_cache = cache  # type: ignore[attr-defined]

    def d_rank(q: int) -> int:
        if q < 0 or q > cm.complex_dim - 1:
            return 0
        if q not in cache:
            cache[q] = smith_normal_form(cm.coboundary[q], with_transforms=False).rank
        return cache[q]

    return cm.counts[p] - d_rank(p) - d_rank(p - 1)


def _column(mat: IntSparseMatrix, j: int) -> list:
    col = [0] * mat.rows
    for (r, c), v in mat.entries.items():
        if c == j:
            col[r] = v
    return col


def homology_generators(cm: ComplexMatrices, p: int) -> list:
    """Integer cycle representatives of the free part of degree-p homology.

    Columns of V beyond the rank of the degree-p boundary span its cycle
    lattice; the boundary lattice of degree p+1, rewritten in those
    coordinates, is diagonalized once more to separate free generators from
    torsion and boundaries.  Each returned chain is an exact cycle and no
    integer combination of the returned chains is a boundary.
    """
    if not 0 <= p <= cm.complex_dim:
        raise ValueError(f"degree {p} outside 0..{cm.complex_dim}")
    n_p = cm.counts[p]
    if p >= 1:
        snf_a = smith_normal_form(cm.boundary[p])
        r = snf_a.rank
        vmat, vinv = snf_a.right, snf_a.right_inv
    else:
        r = 0
        vmat = vinv = IntSparseMatrix.identity(n_p)
    z = n_p - r
    if z == 0:
        return []
    kernel_cols = [_column(vmat, j) for j in range(r, n_p)]
    if p == cm.complex_dim:
        coords_gens = [[1 if i == j else 0 for i in range(z)] for j in range(z)]
    else:
        bmat = cm.boundary[p + 1]
        coeff = vinv @ bmat
        if any(rr < r for (rr, _cc) in coeff.entries):
            raise AssertionError("boundary chain escaped the cycle lattice")
        ymat = IntSparseMatrix(
            z,
            bmat.cols,
            {(rr - r, cc): v for (rr, cc), v in coeff.entries.items()},
        )
        snf_y = smith_normal_form(ymat)
        coords_gens = [_column(snf_y.left_inv, j) for j in range(snf_y.rank, z)]
    gens = []
    for coord in coords_gens:
        chain = [0] * n_p
        for j, c in enumerate(coord):
            if c:
                col = kernel_cols[j]
                for i in range(n_p):
                    chain[i] += c * col[i]
        gens.append(chain)
    return gens


@dataclass
class HomologySummary:
    """Betti numbers, torsion lists and generator chains for every degree."""

    betti: list
    torsion: list
    generators: list


def homology_summary(cm: ComplexMatrices) -> HomologySummary:
    return HomologySummary(
        betti=betti_numbers(cm),
        torsion=[torsion_coefficients(cm, p) for p in range(cm.complex_dim + 1)],
        generators=[homology_generators(cm, p) for p in range(cm.complex_dim + 1)],
    )
