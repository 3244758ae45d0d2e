"""Built-in example meshes for tests, demos and CLI fixtures.

The closed-surface complexes (minimal torus and projective plane) are
realized on the vertices of a regular simplex one dimension up, which makes
every triangle equilateral and keeps all metric computations perfectly
conditioned; only their combinatorics matter topologically and the
builders validate those structurally (closed, expected Euler number)
instead of trusting a hard-coded table.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .mesh import GeometricComplex, MeshValidationError, abstr

__all__ = [
    "reference_triangle",
    "split_square",
    "hollow_triangle",
    "solid_tetrahedron",
    "tetrahedron_boundary",
    "disk",
    "annulus",
    "torus_grid",
    "torus_minimal",
    "projective_plane_minimal",
    "mesh_to_json_dict",
    "mesh_to_json",
    "fixture_meshes",
]


def reference_triangle() -> GeometricComplex:
    return GeometricComplex([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [[0, 1, 2]])


def split_square() -> GeometricComplex:
    """Unit square split into two triangles along the (0, 2) diagonal."""
    return GeometricComplex(
        [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        [[0, 1, 2], [0, 2, 3]],
    )


def hollow_triangle() -> GeometricComplex:
    """Three boundary edges of a triangle, no 2-cell: a combinatorial circle."""
    return GeometricComplex(
        [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        [[0, 1], [1, 2], [2, 0]],
    )


def solid_tetrahedron() -> GeometricComplex:
    return GeometricComplex(
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [[0, 1, 2, 3]],
    )


def tetrahedron_boundary() -> GeometricComplex:
    """The four faces of the reference tetrahedron: a triangulated 2-sphere."""
    return GeometricComplex(
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
    )


def disk(segments: int = 8, rings: int = 2) -> GeometricComplex:
    """Structured triangulation of the unit disk: a center fan plus ring bands."""
    if segments < 3 or rings < 1:
        raise ValueError("need at least 3 segments and 1 ring")
    verts = [[0.0, 0.0]]
    for j in range(1, rings + 1):
        radius = j / rings
        for i in range(segments):
            angle = 2 * math.pi * i / segments
            verts.append([radius * math.cos(angle), radius * math.sin(angle)])

    def ring_vertex(j, i):
        return 1 + (j - 1) * segments + (i % segments)

    tris = []
    for i in range(segments):
        tris.append([0, ring_vertex(1, i), ring_vertex(1, i + 1)])
    for j in range(1, rings):
        for i in range(segments):
            a, b = ring_vertex(j, i), ring_vertex(j, i + 1)
            c, d = ring_vertex(j + 1, i), ring_vertex(j + 1, i + 1)
            tris.append([a, c, d])
            tris.append([a, d, b])
    return GeometricComplex(verts, tris)


def annulus(segments: int = 10, rings: int = 2, inner: float = 1.0, outer: float = 2.0) -> GeometricComplex:
    """Structured triangulation of an annulus; one independent loop."""
    if segments < 3 or rings < 1:
        raise ValueError("need at least 3 segments and 1 ring band")
    verts = []
    for j in range(rings + 1):
        radius = inner + (outer - inner) * j / rings
        for i in range(segments):
            angle = 2 * math.pi * i / segments
            verts.append([radius * math.cos(angle), radius * math.sin(angle)])

    def vid(j, i):
        return j * segments + (i % segments)

    tris = []
    for j in range(rings):
        for i in range(segments):
            a, b = vid(j, i), vid(j, i + 1)
            c, d = vid(j + 1, i), vid(j + 1, i + 1)
            tris.append([a, c, d])
            tris.append([a, d, b])
    return GeometricComplex(verts, tris)


def torus_grid(nu: int = 6, nv: int = 6, major: float = 2.0, minor: float = 1.0) -> GeometricComplex:
    """Torus of revolution on an nu x nv periodic grid, split into triangles."""
    if nu < 3 or nv < 3:
        raise ValueError("periodic grid needs at least 3 cells per direction")
    verts = []
    for i in range(nu):
        u = 2 * math.pi * i / nu
        for j in range(nv):
            v = 2 * math.pi * j / nv
            r = major + minor * math.cos(v)
            verts.append([r * math.cos(u), r * math.sin(u), minor * math.sin(v)])

    def vid(i, j):
        return (i % nu) * nv + (j % nv)

    tris = []
    for i in range(nu):
        for j in range(nv):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            tris.append([a, b, c])
            tris.append([a, c, d])
    gc = GeometricComplex(verts, tris)
    _require_closed_surface(gc, expected_euler=0, name="torus grid")
    return gc


def _regular_simplex_vertices(count: int) -> np.ndarray:
    """count points in R^(count-1), pairwise equidistant (a regular simplex)."""
    basis = np.eye(count)
    centered = basis - basis.mean(axis=0)
    # Drop the constant direction via QR on the centered coordinates.
    q, _ = np.linalg.qr(centered.T)
    coords = centered @ q[:, : count - 1]
    return coords


def torus_minimal() -> GeometricComplex:
    """The 7-vertex triangulation of the torus (two triangle orbits mod 7)."""
    tris = []
    for i in range(7):
        tris.append(sorted([i, (i + 1) % 7, (i + 3) % 7]))
        tris.append(sorted([i, (i + 2) % 7, (i + 3) % 7]))
    gc = GeometricComplex(_regular_simplex_vertices(7), tris)
    _require_closed_surface(gc, expected_euler=0, name="minimal torus")
    return gc


def projective_plane_minimal() -> GeometricComplex:
    """The 6-vertex triangulation of the real projective plane."""
    tris = [
        [0, 1, 4], [0, 1, 5], [0, 2, 3], [0, 2, 5], [0, 3, 4],
        [1, 2, 3], [1, 2, 4], [1, 3, 5], [2, 4, 5], [3, 4, 5],
    ]
    gc = GeometricComplex(_regular_simplex_vertices(6), tris)
    _require_closed_surface(gc, expected_euler=1, name="minimal projective plane")
    return gc


def _require_closed_surface(gc: GeometricComplex, expected_euler: int, name: str):
    ac = abstr(gc)
    if not ac.is_closed():
        raise MeshValidationError(f"{name} fixture is not a closed surface")
    if ac.euler_characteristic() != expected_euler:
        raise MeshValidationError(
            f"{name} fixture has Euler characteristic {ac.euler_characteristic()}, "
            f"expected {expected_euler}"
        )


def mesh_to_json_dict(gc: GeometricComplex) -> dict:
    return {
        "dimension": gc.complex_dim,
        "vertices": gc.vertices.tolist(),
        "simplices": gc.top_simplices.tolist(),
    }


def mesh_to_json(gc: GeometricComplex, indent=None) -> str:
    return json.dumps(mesh_to_json_dict(gc), indent=indent)


def fixture_meshes() -> dict:
    """The named meshes exercised throughout the test-suite."""
    return {
        "triangle": reference_triangle(),
        "square": split_square(),
        "hollow_triangle": hollow_triangle(),
        "disk": disk(),
        "annulus": annulus(),
        "tetrahedron_boundary": tetrahedron_boundary(),
        "torus": torus_grid(),
        "torus_minimal": torus_minimal(),
        "projective_plane": projective_plane_minimal(),
    }
