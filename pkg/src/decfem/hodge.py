"""Discrete Hodge operators and the machinery built on them.

Two realizations are provided: the mass matrix of the Whitney-form inner
product (symmetric positive definite, non-local inverse) and the diagonal
dual-volume operator of cochain methods (cheap, low accuracy on barycentric
duals).  Both feed the weak codifferential, the Hodge Laplacian and the
harmonic-cochain solver, whose dimensions reproduce the Betti numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .chains import matrices_for
from .exterior import index_combinations
from .mesh import AbstractComplex, GeometricComplex, barycentric_dual_volumes, unsigned_volume
from .quadrature import simplex_rule
from .whitney import Cochain, coboundary_apply, mesh_geometry

__all__ = [
    "DiscreteHodge",
    "HarmonicBasis",
    "galerkin_mass_matrix",
    "diagonal_hodge",
    "build_hodges",
    "codifferential",
    "harmonic_basis",
    "hodge_laplacian_apply",
    "matrix_to_coordinate_text",
]

HARMONIC_RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DiscreteHodge:
    """Symmetric degree-p inner-product matrix on cochains."""

    kind: str
    degree: int
    matrix: sp.csr_matrix


@dataclass(frozen=True, eq=False)
class HarmonicBasis:
    """Cochains spanning ker(d) meet ker(weak codifferential) at one degree."""

    degree: int
    vectors: list
    gram: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.vectors)


def _material_matrix(material, top_id: int, d: int):
    if material is None:
        return None
    if callable(material):
        g = np.asarray(material(top_id), dtype=float)
    else:
        g = np.asarray(material[top_id], dtype=float)
    if g.shape != (d, d):
        raise ValueError(f"material tensor must be {d}x{d}")
    return g


def _induced_metric(g: np.ndarray, d: int, p: int) -> np.ndarray:
    """Gram-determinant extension of a 1-covector metric to p-covectors."""
    combos = index_combinations(d, p)
    out = np.empty((len(combos), len(combos)))
    for i, ci in enumerate(combos):
        for j, cj in enumerate(combos):
            out[i, j] = np.linalg.det(g[np.ix_(ci, cj)]) if p else 1.0
    return out


def galerkin_mass_matrix(
    gc: GeometricComplex,
    ac: AbstractComplex,
    p: int,
    material=None,
) -> DiscreteHodge:
    """Mass matrix of Whitney p-forms under the pointwise Euclidean product.

    Entry (sigma, tau) sums exact integrals of the product of the two basis
    forms over the top simplices containing both.  ``material`` optionally
    supplies a symmetric positive d x d tensor per top simplex replacing the
    Euclidean product on 1-covectors (extended to degree p by Gram
    determinants).
    """
    if not 0 <= p <= ac.complex_dim:
        raise ValueError(f"degree {p} outside 0..{ac.complex_dim}")
    n, d = ac.complex_dim, gc.embed_dim
    geo = mesh_geometry(gc, ac)
    faces, globals_, wedges = geo.signed_wedge_tables(p)
    face_pos = np.array(faces)
    rule = simplex_rule(n, 2)
    lam_local = rule.points[:, face_pos]  # (nq, nloc, p+1)
    size = ac.num_simplices(p)
    rows, cols, data = [], [], []
    for t in range(geo.top_count):
        basis = np.einsum("qfk,fkc->qfc", lam_local, wedges[t])
        g = _material_matrix(material, t, d)
        if g is None:
            local = np.einsum("qic,qjc,q->ij", basis, basis, rule.weights)
        else:
            gp = _induced_metric(g, d, p)
            local = np.einsum("qic,cd,qjd,q->ij", basis, gp, basis, rule.weights)
        local *= geo.vols[t]
        idx = globals_[t]
        for a in range(len(faces)):
            for b in range(len(faces)):
                rows.append(idx[a])
                cols.append(idx[b])
                data.append(local[a, b])
    mat = sp.coo_matrix((data, (rows, cols)), shape=(size, size)).tocsr()
    return DiscreteHodge(kind="galerkin", degree=p, matrix=mat)


def diagonal_hodge(gc: GeometricComplex, ac: AbstractComplex, p: int) -> DiscreteHodge:
    """Dual-volume over primal-volume diagonal operator.

    Barycentric dual cells supply the dual measures; the dual cell of a top
    simplex is a point with unit measure, and primal 0-simplices likewise
    count as unit measure.
    """
    if not 0 <= p <= ac.complex_dim:
        raise ValueError(f"degree {p} outside 0..{ac.complex_dim}")
    n = ac.complex_dim
    dv = barycentric_dual_volumes(gc, ac)
    size = ac.num_simplices(p)
    diag = np.empty(size)
    for i, sigma in enumerate(ac.simplices[p]):
        dual = 1.0 if p == n else dv.vol[p][i]
        primal = 1.0 if p == 0 else unsigned_volume(gc, sigma)
        diag[i] = dual / primal
    mat = sp.diags(diag).tocsr()
    return DiscreteHodge(kind="diagonal", degree=p, matrix=mat)


def build_hodges(gc: GeometricComplex, ac: AbstractComplex, kind: str = "galerkin") -> dict:
    """One DiscreteHodge per degree 0..n."""
    if kind == "galerkin":
        return {p: galerkin_mass_matrix(gc, ac, p) for p in range(ac.complex_dim + 1)}
    if kind == "diagonal":
        return {p: diagonal_hodge(gc, ac, p) for p in range(ac.complex_dim + 1)}
    raise ValueError(f"unknown hodge kind {kind!r}")


def _solve_spd(hodge: DiscreteHodge, rhs: np.ndarray) -> np.ndarray:
    if hodge.kind == "diagonal":
        return rhs / hodge.matrix.diagonal()
    return spla.spsolve(hodge.matrix.tocsc(), rhs)


def codifferential(c: Cochain, hodges: dict) -> Cochain:
    """Weak codifferential: the adjoint of the coboundary in the Hodge inner
    products, realized by one symmetric solve per application."""
    p = c.degree
    if p < 1:
        raise ValueError("codifferential undefined on 0-cochains")
    cm = matrices_for(c.complex)
    boundary = cm.boundary_csr(p)  # transpose of the degree p-1 coboundary
    rhs = boundary @ (hodges[p].matrix @ c.values)
    return Cochain(c.complex, p - 1, _solve_spd(hodges[p - 1], rhs))


def hodge_laplacian_apply(c: Cochain, hodges: dict) -> Cochain:
    """Hodge Laplacian: codifferential of the coboundary plus coboundary of
    the codifferential, with the absent term dropped at boundary degrees."""
    ac = c.complex
    p = c.degree
    total = np.zeros_like(c.values)
    if p < ac.complex_dim:
        total += codifferential(coboundary_apply(c), hodges).values
    if p > 0:
        total += coboundary_apply(codifferential(c, hodges)).values
    return Cochain(ac, p, total)


def harmonic_basis(
    gc: GeometricComplex,
    ac: AbstractComplex,
    p: int,
    kind: str = "galerkin",
    hodges: dict | None = None,
    rank_tol: float = HARMONIC_RANK_TOL,
) -> HarmonicBasis:
    """Orthonormal basis of the harmonic p-cochains.

    Harmonic means simultaneously closed (coboundary vanishes) and weakly
    coclosed (orthogonal to every coboundary in the degree-p inner product).
    The space is the nullspace of the two stacked conditions, revealed by a
    singular value decomposition with a relative rank cutoff; its dimension
    equals the degree-p Betti number.
    """
    if not 0 <= p <= ac.complex_dim:
        raise ValueError(f"degree {p} outside 0..{ac.complex_dim}")
    if hodges is None:
        hodges = build_hodges(gc, ac, kind)
    cm = matrices_for(ac)
    blocks = []
    if p < ac.complex_dim:
        d_block = cm.coboundary_csr(p).toarray()
        scale = np.abs(d_block).max() or 1.0
        blocks.append(d_block / scale)
    if p > 0:
        co_block = (cm.boundary_csr(p) @ hodges[p].matrix).toarray()
        scale = np.abs(co_block).max() or 1.0
        blocks.append(co_block / scale)
    size = ac.num_simplices(p)
    if not blocks:
        vectors = [np.eye(size)[:, j] for j in range(size)]
    else:
        stacked = np.vstack(blocks)
        _, svals, vt = np.linalg.svd(stacked)
        cutoff = rank_tol * (svals[0] if svals.size else 1.0)
        rank = int(np.sum(svals > cutoff))
        vectors = [vt[j] for j in range(rank, size)]
    cochains = [Cochain(ac, p, v) for v in vectors]
    mass = hodges[p].matrix
    gram = np.array([[float(u.values @ (mass @ v.values)) for v in cochains] for u in cochains])
    if cochains and abs(np.linalg.det(gram)) < 1e-300:
        raise AssertionError("harmonic Gram matrix is singular")
    return HarmonicBasis(degree=p, vectors=cochains, gram=gram)


def matrix_to_coordinate_text(matrix) -> str:
    """Serialize a sparse/dense real matrix as 'rows cols nnz' plus entry lines."""
    coo = sp.coo_matrix(matrix)
    order = np.lexsort((coo.col, coo.row))
    lines = [f"{coo.shape[0]} {coo.shape[1]} {coo.nnz}"]
    for k in order:
        lines.append(f"{coo.row[k]} {coo.col[k]} {float(coo.data[k])!r}")
    return "\n".join(lines) + "\n"
