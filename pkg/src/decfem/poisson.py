"""Model Poisson solves, uniform refinement and convergence studies.

The 0-form Dirichlet problem is assembled as coboundary^T * (degree-1
Hodge) * coboundary, with the load vector equal to the degree-0 Hodge
applied to the integrated source.  With the Whitney mass matrix this is
exactly the piecewise-linear Galerkin stiffness system; an independent
cotangent-formula assembly of the same stiffness is provided for
cross-checking.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .chains import matrices_for
from .mesh import AbstractComplex, GeometricComplex, MeshValidationError, abstr
from .quadrature import simplex_rule
from .whitney import analytic_form, de_rham_map, mesh_geometry
from .hodge import build_hodges

__all__ = [
    "LinearSystem",
    "SolverError",
    "ManufacturedSolution",
    "ConvergenceLevel",
    "ConvergenceReport",
    "sin_sin_solution",
    "affine_solution",
    "boundary_vertex_ids",
    "assemble_poisson",
    "cg_solve",
    "uniform_refine",
    "cotangent_stiffness",
    "l2_and_energy_error",
    "convergence_study",
]


class SolverError(RuntimeError):
    """Iterative solve did not reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Symmetric system with Dirichlet rows already eliminated symmetrically."""

    matrix: sp.csr_matrix
    rhs: np.ndarray
    constrained: list


@dataclass(frozen=True)
class ManufacturedSolution:
    """Closed-form solution with matching source and (optionally) gradient."""

    u: object
    source: object
    gradient: object = None


def sin_sin_solution() -> ManufacturedSolution:
    pi = math.pi
    return ManufacturedSolution(
        u=lambda x: math.sin(pi * x[0]) * math.sin(pi * x[1]),
        source=lambda x: 2 * pi**2 * math.sin(pi * x[0]) * math.sin(pi * x[1]),
        gradient=lambda x: np.array(
            [
                pi * math.cos(pi * x[0]) * math.sin(pi * x[1]),
                pi * math.sin(pi * x[0]) * math.cos(pi * x[1]),
            ]
        ),
    )


def affine_solution(a: float = 1.0, b: float = 0.0, c: float = 0.0) -> ManufacturedSolution:
    return ManufacturedSolution(
        u=lambda x: a * x[0] + b * x[1] + c,
        source=lambda x: 0.0,
        gradient=lambda x: np.array([a, b]),
    )


def boundary_vertex_ids(ac: AbstractComplex) -> list:
    """Vertices lying on some facet with exactly one top coface."""
    counts = ac.facet_coface_counts()
    on_boundary = set()
    for i, facet in enumerate(ac.simplices[ac.complex_dim - 1]):
        if counts[i] == 1:
            on_boundary.update(facet)
    return sorted(on_boundary)


def assemble_poisson(
    gc: GeometricComplex,
    ac: AbstractComplex,
    hodge_kind: str,
    source,
    dirichlet,
) -> LinearSystem:
    """Dirichlet Poisson system on 0-cochains.

    ``source`` and ``dirichlet`` are coordinate functions; the boundary data
    is imposed at every boundary vertex by symmetric row/column elimination,
    which keeps the reduced matrix symmetric positive definite.
    """
    boundary_ids = boundary_vertex_ids(ac)
    if not boundary_ids:
        raise MeshValidationError("mesh has no boundary; Dirichlet problem is not posed")
    cm = matrices_for(ac)
    d0 = cm.coboundary_csr(0)
    hodges = build_hodges(gc, ac, hodge_kind)
    stiffness = (d0.T @ hodges[1].matrix @ d0).tocsr()
    src_cochain = de_rham_map(
        gc, ac, analytic_form(0, lambda x: np.array([source(x)])), 0
    )
    rhs = hodges[0].matrix @ src_cochain.values
    vert_index = {s[0]: i for i, s in enumerate(ac.simplices[0])}
    constrained = []
    for v in boundary_ids:
        value = dirichlet[v] if isinstance(dirichlet, dict) else dirichlet(gc.vertices[v])
        constrained.append((vert_index[v], float(value)))
    size = stiffness.shape[0]
    fixed = np.array([i for i, _ in constrained], dtype=int)
    values = np.array([v for _, v in constrained])
    lifted = np.zeros(size)
    lifted[fixed] = values
    rhs = rhs - stiffness @ lifted
    rhs[fixed] = values
    free = np.ones(size)
    free[fixed] = 0.0
    proj = sp.diags(free)
    matrix = (proj @ stiffness @ proj + sp.diags(1.0 - free)).tocsr()
    return LinearSystem(matrix=matrix, rhs=rhs, constrained=constrained)


def cg_solve(system: LinearSystem, tol: float = 1e-10, max_iter: int | None = None) -> np.ndarray:
    """Plain conjugate gradients with a fixed iteration order.

    Returns the solution vector (constrained entries included).  Raises
    SolverError, reporting the achieved relative residual, when max_iter is
    exhausted.
    """
    a = system.matrix
    b = system.rhs
    n = b.shape[0]
    if max_iter is None:
        max_iter = 20 * n + 100
    x = np.zeros(n)
    r = b - a @ x
    target = tol * float(np.linalg.norm(b))
    if float(np.linalg.norm(r)) <= target:
        return x
    d = r.copy()
    rr = float(r @ r)
    for _ in range(max_iter):
        ad = a @ d
        alpha = rr / float(d @ ad)
        x = x + alpha * d
        r = r - alpha * ad
        rr_next = float(r @ r)
        if math.sqrt(rr_next) <= target:
            return x
        d = r + (rr_next / rr) * d
        rr = rr_next
    achieved = math.sqrt(rr) / (float(np.linalg.norm(b)) or 1.0)
    raise SolverError(
        f"conjugate gradients reached {max_iter} iterations, relative residual {achieved:.3e}",
        residual=achieved,
    )


def uniform_refine(gc: GeometricComplex) -> GeometricComplex:
    """Split every triangle into four via edge midpoints (2-d complexes only)."""
    if gc.complex_dim != 2:
        raise MeshValidationError("uniform refinement implemented for 2-d complexes only")
    ac = abstr(gc)
    edges = ac.simplices[1]
    edge_index = ac.index_of[1]
    m0 = gc.num_vertices
    midpoints = np.array([(gc.vertices[a] + gc.vertices[b]) / 2.0 for a, b in edges])
    new_vertices = np.vstack([gc.vertices, midpoints])
    new_tris = []
    for tri in gc.top_simplices:
        a, b, c = (int(v) for v in tri)

        def mid(u, v):
            return m0 + edge_index[(u, v) if u < v else (v, u)]

        mab, mbc, mca = mid(a, b), mid(b, c), mid(c, a)
        new_tris += [[a, mab, mca], [mab, b, mbc], [mca, mbc, c], [mab, mbc, mca]]
    return GeometricComplex(new_vertices, new_tris)


def cotangent_stiffness(gc: GeometricComplex) -> sp.csr_matrix:
    """Classical piecewise-linear stiffness via the cotangent formula.

    Independent of the Whitney assembly route: per triangle, the entry for
    an edge pair is minus half the cotangent of the opposite angle.  Works
    in any embedding dimension.
    """
    if gc.complex_dim != 2:
        raise MeshValidationError("cotangent stiffness requires a 2-d complex")
    m0 = gc.num_vertices
    rows, cols, data = [], [], []
    for tri in gc.top_simplices:
        vids = [int(v) for v in tri]
        for k in range(3):
            c = vids[k]
            a, b = vids[(k + 1) % 3], vids[(k + 2) % 3]
            ea = gc.vertices[a] - gc.vertices[c]
            eb = gc.vertices[b] - gc.vertices[c]
            cross_sq = float(ea @ ea) * float(eb @ eb) - float(ea @ eb) ** 2
            cot = float(ea @ eb) / math.sqrt(max(cross_sq, 0.0))
            w = 0.5 * cot
            rows += [a, b, a, b]
            cols += [b, a, a, b]
            data += [-w, -w, w, w]
    full = sp.coo_matrix((data, (rows, cols)), shape=(m0, m0)).tocsr()
    ac = abstr(gc)
    order = [s[0] for s in ac.simplices[0]]
    return full[np.ix_(order, order)].tocsr()


def l2_and_energy_error(
    gc: GeometricComplex,
    ac: AbstractComplex,
    vertex_values: np.ndarray,
    solution: ManufacturedSolution,
) -> tuple:
    """L2 and gradient-seminorm errors of a vertex field against a closed form."""
    geo = mesh_geometry(gc, ac)
    rule = simplex_rule(ac.complex_dim, 5)
    n = ac.complex_dim
    l2 = 0.0
    energy = 0.0
    for t, top in enumerate(ac.simplices[n]):
        coords = gc.vertices[list(top)]
        local = np.array([vertex_values[ac.index_of[0][(v,)]] for v in top])
        grad_h = local @ geo.grads[t]
        for w, bary in zip(rule.weights, rule.points):
            x = bary @ coords
            diff = float(bary @ local) - solution.u(x)
            l2 += geo.vols[t] * w * diff * diff
            if solution.gradient is not None:
                gdiff = grad_h - solution.gradient(x)
                energy += geo.vols[t] * w * float(gdiff @ gdiff)
    return math.sqrt(max(l2, 0.0)), math.sqrt(max(energy, 0.0))


@dataclass(frozen=True)
class ConvergenceLevel:
    h: float
    dofs: int
    l2_error: float
    energy_error: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-level mesh size, dof count and errors, plus fitted rates.

    Rates are log ratios between consecutive levels; entries are None where
    an error sits at machine precision and the ratio is meaningless.
    """

    levels: list
    l2_rates: list
    energy_rates: list

    def format_table(self) -> str:
        header = f"{'h':>12} {'dofs':>8} {'L2 error':>14} {'energy error':>14} {'L2 rate':>8}"
        lines = [header]
        for i, lv in enumerate(self.levels):
            rate = self.l2_rates[i - 1] if i > 0 else None
            rate_s = f"{rate:8.3f}" if rate is not None else f"{'-':>8}"
            lines.append(
                f"{lv.h:12.6f} {lv.dofs:8d} {lv.l2_error:14.6e} {lv.energy_error:14.6e} {rate_s}"
            )
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "levels": [
                {
                    "h": lv.h,
                    "dofs": lv.dofs,
                    "l2_error": lv.l2_error,
                    "energy_error": lv.energy_error,
                }
                for lv in self.levels
            ],
            "l2_rates": self.l2_rates,
            "energy_rates": self.energy_rates,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _max_edge_length(gc: GeometricComplex, ac: AbstractComplex) -> float:
    return max(
        float(np.linalg.norm(gc.vertices[b] - gc.vertices[a])) for a, b in ac.simplices[1]
    )


def _rates(errors: list, hs: list) -> list:
    out = []
    for k in range(1, len(errors)):
        if errors[k - 1] < 1e-13 or errors[k] < 1e-13:
            out.append(None)
        else:
            out.append(math.log(errors[k - 1] / errors[k]) / math.log(hs[k - 1] / hs[k]))
    return out


def convergence_study(
    gc: GeometricComplex,
    levels: int,
    solution: ManufacturedSolution,
    hodge_kind: str = "galerkin",
    tol: float = 1e-10,
) -> ConvergenceReport:
    """Solve the manufactured Dirichlet problem on successive uniform
    refinements and report L2/energy errors with fitted rates."""
    if levels < 3:
        raise ValueError("a convergence study needs at least 3 levels")
    report_levels = []
    mesh = gc
    for _ in range(levels):
        mesh = uniform_refine(mesh)
        ac = abstr(mesh)
        system = assemble_poisson(mesh, ac, hodge_kind, solution.source, solution.u)
        values = cg_solve(system, tol=tol)
        l2, energy = l2_and_energy_error(mesh, ac, values, solution)
        report_levels.append(
            ConvergenceLevel(
                h=_max_edge_length(mesh, ac),
                dofs=len(values),
                l2_error=l2,
                energy_error=energy,
            )
        )
    hs = [lv.h for lv in report_levels]
    return ConvergenceReport(
        levels=report_levels,
        l2_rates=_rates([lv.l2_error for lv in report_levels], hs),
        energy_rates=_rates([lv.energy_error for lv in report_levels], hs),
    )
