"""Simplicial meshes: geometric realizations and their abstract complexes.

A mesh arrives as vertex coordinates plus top-dimensional simplices (the
geometric realization).  Reducing it to pure face combinatorics with one
orientation sign per top simplex yields the abstract complex; all topology
downstream runs on the abstract side, all metric quantities on the
geometric one.

JSON mesh format (bit-exact contract): an object with keys ``"dimension"``
(the complex dimension n), ``"vertices"`` (m0 rows of d coordinates) and
``"simplices"`` (mn rows of n+1 zero-based vertex indices).  Unknown keys
are ignored.  Plain-text alternative: a header line ``n d m0 mn`` followed
by m0 coordinate lines and mn simplex lines.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MeshError",
    "MeshParseError",
    "MeshValidationError",
    "GeometricComplex",
    "AbstractComplex",
    "DualVolumes",
    "load_mesh",
    "signed_volume",
    "unsigned_volume",
    "abstr",
    "barycentric_gradients",
    "barycentric_dual_volumes",
    "relabel_vertices",
]

# A simplex counts as degenerate when n! * volume <= RTOL * (longest edge)^n.
_DEGENERATE_RTOL = 1e-12


class MeshError(ValueError):
    """Base class for mesh parsing and validation failures."""


class MeshParseError(MeshError):
    """Malformed input stream (bad JSON, bad header, wrong row widths)."""


class MeshValidationError(MeshError):
    """Structurally well-formed input that violates a mesh invariant."""


class GeometricComplex:
    """Vertex coordinates plus top-dimensional simplices.

    Vertices are Cartesian coordinates in R^d, top simplices (n+1)-tuples of
    global vertex indices with n <= d.  Construction validates index ranges,
    non-degeneracy of every top simplex and absence of duplicate simplices
    (as vertex sets).  Instances are immutable.
    """

    def __init__(self, vertices, top_simplices, complex_dim=None):
        verts = np.array(vertices, dtype=float)
        tops = np.array(top_simplices, dtype=int)
        if verts.ndim != 2 or verts.shape[0] == 0:
            raise MeshValidationError("vertex array must be a nonempty 2-d array")
        if tops.ndim != 2 or tops.shape[0] == 0:
            raise MeshValidationError("simplex array must be a nonempty 2-d array")
        n = tops.shape[1] - 1
        d = verts.shape[1]
        if complex_dim is not None and complex_dim != n:
            raise MeshValidationError(
                f"declared dimension {complex_dim} does not match simplex width {n + 1}"
            )
        if n < 1:
            raise MeshValidationError("complex dimension must be at least 1")
        if n > d:
            raise MeshValidationError(
                f"complex dimension {n} exceeds embedding dimension {d}"
            )
        verts.setflags(write=False)
        tops.setflags(write=False)
        self.vertices = verts
        self.top_simplices = tops
        self.embed_dim = d
        self.complex_dim = n
        self.top_volumes = self._validate()

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def num_top(self) -> int:
        return self.top_simplices.shape[0]

    def _validate(self) -> np.ndarray:
        m0 = self.num_vertices
        n = self.complex_dim
        seen: dict = {}
        vols = np.empty(self.num_top)
        for i, simplex in enumerate(self.top_simplices):
            if simplex.min() < 0 or simplex.max() >= m0:
                raise MeshValidationError(f"vertex index out of range in simplex {i}")
            if len(set(simplex.tolist())) != n + 1:
                raise MeshValidationError(f"degenerate simplex {i}")
            key = tuple(sorted(simplex.tolist()))
            if key in seen:
                raise MeshValidationError(
                    f"duplicate simplex {i} (same vertex set as simplex {seen[key]})"
                )
            seen[key] = i
            coords = self.vertices[simplex]
            edges = coords[1:] - coords[0]
            scale = float(np.max(np.linalg.norm(edges, axis=1)))
            if n == self.embed_dim:
                vol = float(np.linalg.det(edges)) / math.factorial(n)
            else:
                gram = edges @ edges.T
                vol = math.sqrt(max(float(np.linalg.det(gram)), 0.0)) / math.factorial(n)
            if abs(vol) * math.factorial(n) <= _DEGENERATE_RTOL * scale**n:
                raise MeshValidationError(f"degenerate simplex {i}")
            vols[i] = vol
        vols.setflags(write=False)
        return vols

    def __repr__(self):
        return (
            f"GeometricComplex(n={self.complex_dim}, d={self.embed_dim}, "
            f"vertices={self.num_vertices}, top={self.num_top})"
        )


class AbstractComplex:
    """Purely combinatorial face data of a simplicial complex.

    ``simplices[p]`` lists the p-simplices as strictly ascending vertex
    tuples, sorted lexicographically; ``index_of[p]`` inverts that list.
    ``orientation_signs`` holds one +-1 per top simplex, in the order the
    top simplices were given geometrically.
    """

    def __init__(self, complex_dim, simplices, orientation_signs):
        if len(simplices) != complex_dim + 1:
            raise MeshValidationError("need one simplex list per dimension 0..n")
        self.complex_dim = int(complex_dim)
        self.simplices = [list(map(tuple, level)) for level in simplices]
        for p, level in enumerate(self.simplices):
            if any(len(s) != p + 1 or list(s) != sorted(set(s)) for s in level):
                raise MeshValidationError(f"{p}-simplices must be strictly ascending tuples")
            if level != sorted(level) or len(set(level)) != len(level):
                raise MeshValidationError(f"{p}-simplex list must be sorted and duplicate-free")
        for p in range(1, self.complex_dim + 1):
            lower = set(self.simplices[p - 1])
            for s in self.simplices[p]:
                for k in range(p + 1):
                    if s[:k] + s[k + 1:] not in lower:
                        raise MeshValidationError(f"complex not closed under faces at {s}")
        signs = np.array(orientation_signs, dtype=int)
        if signs.shape != (len(self.simplices[-1]),) or not np.all(np.abs(signs) == 1):
            raise MeshValidationError("orientation signs must be one +-1 per top simplex")
        signs.setflags(write=False)
        self.orientation_signs = signs
        self.index_of = [
            {s: i for i, s in enumerate(level)} for level in self.simplices
        ]
        self._top_containing: dict = {}
        self._facet_cofaces = None

    def num_simplices(self, p: int) -> int:
        return len(self.simplices[p])

    def face_counts(self):
        return [len(level) for level in self.simplices]

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * len(level) for p, level in enumerate(self.simplices))

    def top_containing(self, p: int) -> np.ndarray:
        """For each p-simplex, the index (into simplices[n]) of one containing top simplex."""
        if p not in self._top_containing:
            n = self.complex_dim
            owner = np.full(self.num_simplices(p), -1, dtype=int)
            for t, top in enumerate(self.simplices[n]):
                for face in itertools.combinations(top, p + 1):
                    j = self.index_of[p][face]
                    if owner[j] < 0:
                        owner[j] = t
            owner.setflags(write=False)
            self._top_containing[p] = owner
        return self._top_containing[p]

    def facet_coface_counts(self) -> np.ndarray:
        """Number of top simplices containing each (n-1)-simplex."""
        if self._facet_cofaces is None:
            n = self.complex_dim
            counts = np.zeros(self.num_simplices(n - 1), dtype=int)
            for top in self.simplices[n]:
                for face in itertools.combinations(top, n):
                    counts[self.index_of[n - 1][face]] += 1
            counts.setflags(write=False)
            self._facet_cofaces = counts
        return self._facet_cofaces

    def is_closed(self) -> bool:
        return bool(np.all(self.facet_coface_counts() == 2))

    def __repr__(self):
        return f"AbstractComplex(n={self.complex_dim}, counts={self.face_counts()})"


@dataclass(frozen=True)
class DualVolumes:
    """Barycentric dual cell volumes, one array per primal degree.

    ``vol[p][i]`` is the total unsigned (n-p)-volume of the barycentric dual
    cell fragments around p-simplex i; for p = n the primal volume itself is
    stored.
    """

    vol: tuple


def _sort_parity(simplex) -> int:
    perm = sorted(range(len(simplex)), key=lambda k: simplex[k])
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def signed_volume(gc: GeometricComplex, simplex) -> float:
    """Oriented n-volume of a top-dimensional simplex.

    Equals det[v1-v0, ..., vn-v0]/n! when the complex fills its embedding
    dimension; for n < d the unsigned volume from the Gram determinant is
    returned instead.
    """
    simplex = tuple(int(v) for v in simplex)
    n = gc.complex_dim
    if len(simplex) != n + 1:
        raise MeshValidationError(
            f"expected {n + 1} vertices, got {len(simplex)}"
        )
    if len(set(simplex)) != n + 1:
        raise MeshValidationError("repeated vertex in simplex")
    if min(simplex) < 0 or max(simplex) >= gc.num_vertices:
        raise MeshValidationError("vertex index out of range")
    coords = gc.vertices[list(simplex)]
    edges = coords[1:] - coords[0]
    if n == gc.embed_dim:
        return float(np.linalg.det(edges)) / math.factorial(n)
    gram = edges @ edges.T
    return math.sqrt(max(float(np.linalg.det(gram)), 0.0)) / math.factorial(n)


def unsigned_volume(gc: GeometricComplex, simplex) -> float:
    """Unsigned p-volume of any p-simplex given by vertex indices (Gram determinant)."""
    simplex = tuple(int(v) for v in simplex)
    p = len(simplex) - 1
    if p == 0:
        return 1.0
    coords = gc.vertices[list(simplex)]
    edges = coords[1:] - coords[0]
    gram = edges @ edges.T
    return math.sqrt(max(float(np.linalg.det(gram)), 0.0)) / math.factorial(p)


def barycentric_gradients(gc: GeometricComplex, top_simplex_id: int) -> np.ndarray:
    """Constant gradients of the n+1 barycentric coordinates of a top simplex.

    Row i is grad(lambda_i) for the i-th vertex in the as-given vertex order;
    for n < d these are tangential gradients within the simplex plane.
    """
    simplex = gc.top_simplices[int(top_simplex_id)]
    return affine_gradients(gc.vertices[simplex])


def affine_gradients(coords: np.ndarray) -> np.ndarray:
    """Barycentric gradients for a simplex given by its vertex coordinates."""
    edges = (coords[1:] - coords[0]).T  # d x n
    gram = edges.T @ edges
    try:
        rest = np.linalg.solve(gram, edges.T)  # n x d
    except np.linalg.LinAlgError as exc:
        raise MeshValidationError("degenerate simplex") from exc
    return np.vstack([-rest.sum(axis=0), rest])


def abstr(gc: GeometricComplex) -> AbstractComplex:
    """Forget the geometry: extract the abstract simplicial complex.

    Face lists are the closures of the top simplices under taking faces, in
    canonical ascending/lexicographic order.  The orientation sign of each
    top simplex is the sign of its oriented volume in the as-given vertex
    order (for n < d, where no oriented volume exists, the permutation
    parity relative to ascending order).
    """
    n = gc.complex_dim
    simplices = [None] * (n + 1)
    simplices[n] = sorted(tuple(sorted(s.tolist())) for s in gc.top_simplices)
    for p in range(n, 0, -1):
        faces = set()
        for s in simplices[p]:
            for k in range(p + 1):
                faces.add(s[:k] + s[k + 1:])
        simplices[p - 1] = sorted(faces)
    if n == gc.embed_dim:
        signs = [1 if v > 0 else -1 for v in gc.top_volumes]
    else:
        signs = [_sort_parity(s.tolist()) for s in gc.top_simplices]
    return AbstractComplex(n, simplices, signs)


def barycentric_dual_volumes(gc: GeometricComplex, ac: AbstractComplex) -> DualVolumes:
    """Volumes of the barycentric dual cells of every simplex.

    The dual cell of a p-simplex sigma is swept out, inside each top simplex
    T containing sigma, by the simplices spanned by the barycenters of the
    strictly increasing face chains sigma = s_p < s_{p+1} < ... < s_n = T.
    For p = n the primal volume is recorded.
    """
    n = gc.complex_dim
    vols = [np.zeros(ac.num_simplices(p)) for p in range(n + 1)]
    for top in ac.simplices[n]:
        coords = gc.vertices[list(top)]
        for p in range(n):
            for face_pos in itertools.combinations(range(n + 1), p + 1):
                rest = [k for k in range(n + 1) if k not in face_pos]
                base = coords[list(face_pos)].mean(axis=0)
                sigma = tuple(top[k] for k in face_pos)
                idx = ac.index_of[p][sigma]
                for order in itertools.permutations(rest):
                    pts = [base]
                    members = list(face_pos)
                    for k in order:
                        members.append(k)
                        pts.append(coords[members].mean(axis=0))
                    edges = np.array(pts[1:]) - pts[0]
                    gram = edges @ edges.T
                    frag = math.sqrt(max(float(np.linalg.det(gram)), 0.0))
                    vols[p][idx] += frag / math.factorial(n - p)
    for i, top in enumerate(ac.simplices[n]):
        vols[n][i] = unsigned_volume(gc, top)
    for p in range(n + 1):
        if np.any(vols[p] <= 0):
            raise MeshValidationError(f"non-positive dual volume at degree {p}")
        vols[p].setflags(write=False)
    return DualVolumes(vol=tuple(vols))


def relabel_vertices(gc: GeometricComplex, permutation) -> GeometricComplex:
    """Apply a vertex-index bijection, permuting coordinates and simplex entries."""
    perm = np.asarray(permutation, dtype=int)
    if sorted(perm.tolist()) != list(range(gc.num_vertices)):
        raise MeshValidationError("permutation must be a bijection on vertex indices")
    new_verts = np.empty_like(gc.vertices)
    new_verts[perm] = gc.vertices
    new_tops = perm[gc.top_simplices]
    return GeometricComplex(new_verts, new_tops)


def _as_text(source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    raise MeshParseError(f"unsupported mesh source type {type(source).__name__}")


def load_mesh(source, fmt: str = "json") -> GeometricComplex:
    """Parse and validate a mesh from text, bytes, or a file-like object.

    ``fmt`` selects the JSON format or the plain-text alternative
    (``"json"`` | ``"text"``).  Parse failures raise MeshParseError,
    invariant violations MeshValidationError; both name the offending
    simplex where applicable.
    """
    text = _as_text(source)
    if fmt == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MeshParseError(f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise MeshParseError("mesh JSON must be an object")
        missing = {"dimension", "vertices", "simplices"} - obj.keys()
        if missing:
            raise MeshParseError(f"mesh JSON missing keys: {sorted(missing)}")
        dim = obj["dimension"]
        if not isinstance(dim, int):
            raise MeshParseError("dimension must be an integer")
        try:
            return GeometricComplex(obj["vertices"], obj["simplices"], complex_dim=dim)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, MeshError):
                raise
            raise MeshParseError(f"malformed vertex or simplex rows: {exc}") from exc
    if fmt == "text":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise MeshParseError("empty mesh text")
        header = lines[0].split()
        if len(header) != 4:
            raise MeshParseError('header must be "n d m0 mn"')
        try:
            n, d, m0, mn = (int(tok) for tok in header)
        except ValueError as exc:
            raise MeshParseError("non-integer header field") from exc
        if len(lines) != 1 + m0 + mn:
            raise MeshParseError(
                f"expected {1 + m0 + mn} lines, got {len(lines)}"
            )
        try:
            verts = [[float(tok) for tok in ln.split()] for ln in lines[1 : 1 + m0]]
            tops = [[int(tok) for tok in ln.split()] for ln in lines[1 + m0 :]]
        except ValueError as exc:
            raise MeshParseError(f"malformed coordinate or simplex line: {exc}") from exc
        if any(len(row) != d for row in verts):
            raise MeshParseError(f"coordinate rows must have {d} entries")
        if any(len(row) != n + 1 for row in tops):
            raise MeshParseError(f"simplex rows must have {n + 1} entries")
        return GeometricComplex(verts, tops, complex_dim=n)
    raise MeshParseError(f"unknown mesh format {fmt!r}")
