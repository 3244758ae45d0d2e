"""Whitney forms: cochain interpolation, integration back to cochains, cup product.

The interpolant attached to a p-simplex (s0 < ... < sp) inside a top
simplex with barycentric coordinates lambda is

    p! * sum_k (-1)^k lambda_{sk} dlambda_{s0} ^ ... ^ [omit k] ^ ... ^ dlambda_{sp},

a piecewise-affine p-form with tangentially continuous traces.  Integrating
a form over every canonical p-simplex recovers a cochain; with rules exact
for the piecewise-polynomial integrands, interpolation followed by
integration is the identity on cochains.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import weakref
from dataclasses import dataclass

import numpy as np

from .chains import matrices_for
from .exterior import eval_on_frame, num_components, wedge
from .mesh import AbstractComplex, GeometricComplex, affine_gradients
from .quadrature import QuadratureRule, simplex_rule

__all__ = [
    "Cochain",
    "FormField",
    "analytic_form",
    "whitney_basis",
    "whitney_interpolate",
    "de_rham_map",
    "coboundary_apply",
    "cup_product",
    "complex_fingerprint",
    "cochain_to_json",
    "cochain_from_json",
    "standard_test_forms",
]

DEFAULT_EXACTNESS = 2  # Whitney-form products are polynomials of degree <= 2


@dataclass(frozen=True, eq=False)
class Cochain:
    """Real coefficients on the canonical p-simplices of an abstract complex."""

    complex: AbstractComplex
    degree: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if not 0 <= self.degree <= self.complex.complex_dim:
            raise ValueError(f"degree {self.degree} outside complex dimensions")
        if vals.shape != (self.complex.num_simplices(self.degree),):
            raise ValueError(
                f"expected {self.complex.num_simplices(self.degree)} values, "
                f"got {vals.shape}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True, eq=False)
class FormField:
    """A degree-p differential form evaluated per top simplex.

    ``evaluate(top_id, x)`` returns the covector components at the ambient
    point x, with top_id indexing the canonical top-simplex list.  Analytic
    fields ignore top_id; interpolated fields use it to select the affine
    chart.
    """

    degree: int
    evaluate: object
    kind: str = "analytic"


def analytic_form(degree: int, component_fn, kind: str = "analytic") -> FormField:
    """Wrap a coordinate function x -> component vector as a form field."""
    return FormField(degree=degree, evaluate=lambda top_id, x: component_fn(x), kind=kind)


class _MeshGeometry:
    """Per-complex affine data shared by interpolation and assembly.

    All arrays are indexed by the canonical (sorted) top-simplex order.
    ``signed_wedge_tables(p)`` premultiplies the gradient wedges by the
    alternating sign and p!, so a Whitney basis value is a plain contraction
    with the barycentric coordinates.
    """

    def __init__(self, gc: GeometricComplex, ac: AbstractComplex):
        if gc.complex_dim != ac.complex_dim:
            raise ValueError("geometric and abstract complex dimensions differ")
        self.gc = gc
        self.ac = ac
        n, d = ac.complex_dim, gc.embed_dim
        tops = ac.simplices[n]
        self.top_count = len(tops)
        self.grads = np.empty((self.top_count, n + 1, d))
        self.vols = np.empty(self.top_count)
        self.origin = np.empty((self.top_count, d))
        for t, top in enumerate(tops):
            coords = gc.vertices[list(top)]
            self.grads[t] = affine_gradients(coords)
            edges = coords[1:] - coords[0]
            gram = edges @ edges.T
            self.vols[t] = math.sqrt(max(float(np.linalg.det(gram)), 0.0)) / math.factorial(n)
            self.origin[t] = coords[0]
        self._tables: dict = {}

    def barycentric(self, top_id: int, x: np.ndarray) -> np.ndarray:
        lam = self.grads[top_id] @ (np.asarray(x, dtype=float) - self.origin[top_id])
        lam[0] += 1.0
        return lam

    def signed_wedge_tables(self, p: int):
        """(local face positions, global face ids, sign-folded gradient wedges)."""
        if p in self._tables:
            return self._tables[p]
        n, d = self.ac.complex_dim, self.gc.embed_dim
        faces = tuple(itertools.combinations(range(n + 1), p + 1))
        ncomp = num_components(d, p)
        globals_ = np.empty((self.top_count, len(faces)), dtype=int)
        wedges = np.zeros((self.top_count, len(faces), p + 1, ncomp))
        factorial_p = float(math.factorial(p))
        for t, top in enumerate(self.ac.simplices[n]):
            for f, pos in enumerate(faces):
                globals_[t, f] = self.ac.index_of[p][tuple(top[k] for k in pos)]
                for k in range(p + 1):
                    if p == 0:
                        w = np.ones(1)
                    else:
                        rest = [pos[j] for j in range(p + 1) if j != k]
                        w = self.grads[t, rest[0]].copy()
                        deg = 1
                        for idx in rest[1:]:
                            w = wedge(w, deg, self.grads[t, idx], 1, d)
                            deg += 1
                    wedges[t, f, k] = ((-1) ** k) * factorial_p * w
        table = (faces, globals_, wedges)
        self._tables[p] = table
        return table


_GEOMETRY_CACHE: "weakref.WeakKeyDictionary[AbstractComplex, _MeshGeometry]" = (
    weakref.WeakKeyDictionary()
)


def mesh_geometry(gc: GeometricComplex, ac: AbstractComplex) -> _MeshGeometry:
    geo = _GEOMETRY_CACHE.get(ac)
    if geo is None or geo.gc is not gc:
        geo = _MeshGeometry(gc, ac)
        _GEOMETRY_CACHE[ac] = geo
    return geo


def whitney_basis(
    gc: GeometricComplex,
    ac: AbstractComplex,
    sigma,
    top_id: int,
    point,
) -> np.ndarray:
    """Whitney form of one p-simplex, evaluated at a barycentric point of a
    containing top simplex; returns ambient covector components."""
    n, d = ac.complex_dim, gc.embed_dim
    sigma = tuple(int(v) for v in sigma)
    top = ac.simplices[n][int(top_id)]
    if not set(sigma) <= set(top):
        raise ValueError(f"{sigma} is not a face of top simplex {top}")
    lam = np.asarray(point, dtype=float)
    if lam.shape != (n + 1,) or np.any(lam < -1e-12) or abs(lam.sum() - 1.0) > 1e-9:
        raise ValueError("point must be nonnegative barycentric coordinates summing to 1")
    geo = mesh_geometry(gc, ac)
    pos = [top.index(v) for v in sigma]
    p = len(sigma) - 1
    if p == 0:
        return np.array([lam[pos[0]]])
    out = np.zeros(num_components(d, p))
    for k in range(p + 1):
        rest = [pos[j] for j in range(p + 1) if j != k]
        w = geo.grads[top_id, rest[0]].copy()
        deg = 1
        for idx in rest[1:]:
            w = wedge(w, deg, geo.grads[top_id, idx], 1, d)
            deg += 1
        out += ((-1) ** k) * math.factorial(p) * lam[pos[k]] * w
    return out


def whitney_interpolate(gc: GeometricComplex, c: Cochain) -> FormField:
    """Piecewise-affine form with the cochain's coefficients on its simplices."""
    ac = c.complex
    geo = mesh_geometry(gc, ac)
    p = c.degree
    faces, globals_, wedges = geo.signed_wedge_tables(p)
    face_pos = np.array(faces)  # (nloc, p+1)
    coeffs = c.values

    def evaluate(top_id: int, x) -> np.ndarray:
        lam = geo.barycentric(top_id, x)
        lam_local = lam[face_pos]  # (nloc, p+1)
        basis = np.einsum("fk,fkc->fc", lam_local, wedges[top_id])
        return coeffs[globals_[top_id]] @ basis

    return FormField(degree=p, evaluate=evaluate, kind="whitney")


def de_rham_map(
    gc: GeometricComplex,
    ac: AbstractComplex,
    f: FormField,
    p: int,
    rule: QuadratureRule | None = None,
) -> Cochain:
    """Integrate a p-form over every canonical p-simplex.

    Exact whenever the form restricted to each simplex is polynomial within
    the rule's exactness degree.
    """
    if f.degree != p:
        raise ValueError(f"form degree {f.degree} does not match requested degree {p}")
    if rule is None:
        rule = simplex_rule(p, DEFAULT_EXACTNESS)
    if rule.dim != p:
        raise ValueError(f"rule dimension {rule.dim} does not match degree {p}")
    geo = mesh_geometry(gc, ac)
    owners = ac.top_containing(p)
    values = np.empty(ac.num_simplices(p))
    inv_factorial = 1.0 / math.factorial(p)
    for idx, sigma in enumerate(ac.simplices[p]):
        top_id = int(owners[idx])
        coords = gc.vertices[list(sigma)]
        if p == 0:
            values[idx] = f.evaluate(top_id, coords[0])[0]
            continue
        frame = (coords[1:] - coords[0]).T  # d x p
        acc = 0.0
        for w, bary in zip(rule.weights, rule.points):
            x = bary @ coords
            comps = f.evaluate(top_id, x)
            acc += w * eval_on_frame(comps, p, frame)
        values[idx] = acc * inv_factorial
    return Cochain(ac, p, values)


def coboundary_apply(c: Cochain) -> Cochain:
    """Discrete exterior derivative: apply the integer coboundary to a cochain."""
    ac = c.complex
    if c.degree >= ac.complex_dim:
        raise ValueError("coboundary undefined at top degree")
    d_csr = matrices_for(ac).coboundary_csr(c.degree)
    return Cochain(ac, c.degree + 1, d_csr @ c.values)


def cup_product(
    gc: GeometricComplex,
    a: Cochain,
    b: Cochain,
    rule: QuadratureRule | None = None,
) -> Cochain:
    """Combinatorial cup product: interpolate both factors, wedge pointwise,
    integrate over (p+q)-simplices.

    Bilinear and graded-commutative at the arithmetic level of a shared
    rule; associative only up to interpolation error.
    """
    if a.complex is not b.complex:
        raise ValueError("cup product factors must live on the same complex")
    ac = a.complex
    p, q = a.degree, b.degree
    if p + q > ac.complex_dim:
        raise ValueError(f"cup degree {p + q} exceeds complex dimension")
    wa = whitney_interpolate(gc, a)
    wb = whitney_interpolate(gc, b)
    d = gc.embed_dim

    def evaluate(top_id: int, x) -> np.ndarray:
        return wedge(wa.evaluate(top_id, x), p, wb.evaluate(top_id, x), q, d)

    field = FormField(degree=p + q, evaluate=evaluate, kind="whitney")
    if rule is None:
        rule = simplex_rule(p + q, DEFAULT_EXACTNESS)
    return de_rham_map(gc, ac, field, p + q, rule)


def complex_fingerprint(ac: AbstractComplex) -> str:
    """Hash of the canonical simplex lists; guards cochain (de)serialization."""
    payload = json.dumps(
        [[list(s) for s in level] for level in ac.simplices], separators=(",", ":")
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def cochain_to_json(c: Cochain) -> dict:
    return {
        "degree": c.degree,
        "values": c.values.tolist(),
        "fingerprint": complex_fingerprint(c.complex),
    }


def cochain_from_json(ac: AbstractComplex, obj: dict) -> Cochain:
    if obj.get("fingerprint") != complex_fingerprint(ac):
        raise ValueError("cochain fingerprint does not match this complex")
    return Cochain(ac, int(obj["degree"]), np.asarray(obj["values"], dtype=float))


def standard_test_forms(embed_dim: int) -> list:
    """Named polynomial (form, exterior derivative) pairs through degree 3.

    Used to exercise integration and derivative commutation on meshes
    embedded in R^2 and R^3; derivatives are supplied analytically.
    """
    forms = []
    if embed_dim == 2:
        forms += [
            (
                "x^2 y",
                analytic_form(0, lambda x: np.array([x[0] ** 2 * x[1]])),
                analytic_form(1, lambda x: np.array([2 * x[0] * x[1], x[0] ** 2])),
            ),
            (
                "x^3",
                analytic_form(0, lambda x: np.array([x[0] ** 3])),
                analytic_form(1, lambda x: np.array([3 * x[0] ** 2, 0.0])),
            ),
            (
                "y^3 dx",
                analytic_form(1, lambda x: np.array([x[1] ** 3, 0.0])),
                analytic_form(2, lambda x: np.array([-3 * x[1] ** 2])),
            ),
            (
                "x^2 y dy",
                analytic_form(1, lambda x: np.array([0.0, x[0] ** 2 * x[1]])),
                analytic_form(2, lambda x: np.array([2 * x[0] * x[1]])),
            ),
            (
                "xy dx + (x - y^2) dy",
                analytic_form(1, lambda x: np.array([x[0] * x[1], x[0] - x[1] ** 2])),
                analytic_form(2, lambda x: np.array([1.0 - x[0]])),
            ),
        ]
    elif embed_dim == 3:
        forms += [
            (
                "x^2 z",
                analytic_form(0, lambda x: np.array([x[0] ** 2 * x[2]])),
                analytic_form(1, lambda x: np.array([2 * x[0] * x[2], 0.0, x[0] ** 2])),
            ),
            (
                "xyz",
                analytic_form(0, lambda x: np.array([x[0] * x[1] * x[2]])),
                analytic_form(1, lambda x: np.array([x[1] * x[2], x[0] * x[2], x[0] * x[1]])),
            ),
            (
                "z^2 dx + x^2 dy + y^2 dz",
                analytic_form(1, lambda x: np.array([x[2] ** 2, x[0] ** 2, x[1] ** 2])),
                # components on (dx^dy, dx^dz, dy^dz)
                analytic_form(2, lambda x: np.array([2 * x[0], -2 * x[2], 2 * x[1]])),
            ),
            (
                "x^2 dy^dz",
                analytic_form(2, lambda x: np.array([0.0, 0.0, x[0] ** 2])),
                analytic_form(3, lambda x: np.array([2 * x[0]])),
            ),
        ]
    else:
        raise ValueError(f"no canned polynomial forms for embedding dimension {embed_dim}")
    return forms
