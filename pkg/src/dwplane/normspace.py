"""Two-dimensional norms: description, evaluation, validation and duality.

A norm is described declaratively by a *spec* (``Lp``, ``Mixed``,
``Polygon``, ``RegularPolygon`` or ``DualOf``) and turned into a callable
:class:`NormHandle` by :func:`build_norm`.  Handles evaluate on arrays of
shape ``(..., 2)`` and are immutable.

Polygonal norms (including ``lp:1``, ``lp:inf`` and the mixed norms built
from exponents 1 and inf) additionally carry a :class:`PolygonData` with the
exact vertex list of their unit sphere, which the orthogonality and
segment-minimisation code uses for exact answers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from ._search import golden_max
from .errors import ArgumentError, GeometryError, SpecError

DUAL_GRID_N = 2048
DUAL_TOL = 1e-8
POLYGON_TOL = 1e-9
# batch size above which polygon gauges loop over facets instead of broadcasting
_LOOP_MIN = 4096
# golden refinement of the numeric support function stops at this angular width
_DUAL_ANGLE_TOL = 1e-11


class Vector2(NamedTuple):
    x1: float
    x2: float


def as_array(v) -> np.ndarray:
    """Coerce a single vector to a finite float array of shape (2,)."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (2,):
        raise ArgumentError(f"expected a 2-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ArgumentError(f"vector has non-finite coordinates: {arr}")
    return arr


def to_vector(arr) -> Vector2:
    return Vector2(float(arr[0]), float(arr[1]))


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class Lp:
    p: float

    def __post_init__(self):
        if not self.p >= 1:
            raise SpecError(f"lp exponent must be >= 1 or inf, got {self.p!r}")


@dataclass(frozen=True)
class Mixed:
    """``p_same`` where x1*x2 >= 0, ``p_opp`` where x1*x2 <= 0."""

    p_same: float
    p_opp: float

    def __post_init__(self):
        for p in (self.p_same, self.p_opp):
            if not p >= 1:
                raise SpecError(f"mixed exponent must be >= 1 or inf, got {p!r}")


@dataclass(frozen=True)
class Polygon:
    vertices: tuple

    def __post_init__(self):
        try:
            verts = tuple((float(x), float(y)) for x, y in self.vertices)
        except (TypeError, ValueError) as exc:
            raise SpecError(f"polygon vertices must be coordinate pairs: {exc}") from None
        object.__setattr__(self, "vertices", verts)


@dataclass(frozen=True)
class RegularPolygon:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 4 or self.n % 2:
            raise SpecError(f"regular polygon needs an even n >= 4, got {self.n!r}")


@dataclass(frozen=True)
class DualOf:
    inner: "NormSpec"


NormSpec = Union[Lp, Mixed, Polygon, RegularPolygon, DualOf]


def _parse_exponent(text: str, token: str) -> float:
    text = text.strip()
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        p = float(text)
    except ValueError:
        raise SpecError(f"bad exponent {text!r} in norm spec {token!r}") from None
    if not p >= 1 or math.isinf(p):
        raise SpecError(f"exponent {text!r} in norm spec {token!r} must be >= 1 or inf")
    return p


def parse_norm(token: str) -> NormSpec:
    """Parse the one-token norm grammar (``lp:P``, ``mixed:P,Q``,
    ``polygon:x,y;...``, ``regular:N``, ``dual(SPEC)``)."""
    s = token.strip()
    m = re.fullmatch(r"dual\((.*)\)", s, flags=re.IGNORECASE)
    if m:
        return DualOf(parse_norm(m.group(1)))
    kind, sep, body = s.partition(":")
    kind = kind.strip().lower()
    if not sep:
        raise SpecError(f"unknown norm spec token {token!r}")
    if kind == "lp":
        return Lp(_parse_exponent(body, token))
    if kind == "mixed":
        parts = body.split(",")
        if len(parts) != 2:
            raise SpecError(f"mixed spec needs two exponents: {token!r}")
        return Mixed(_parse_exponent(parts[0], token), _parse_exponent(parts[1], token))
    if kind == "regular":
        try:
            n = int(body)
        except ValueError:
            raise SpecError(f"bad vertex count {body!r} in norm spec {token!r}") from None
        return RegularPolygon(n)
    if kind == "polygon":
        verts = []
        for pair in filter(None, (chunk.strip() for chunk in body.split(";"))):
            xy = pair.split(",")
            try:
                if len(xy) != 2:
                    raise ValueError
                verts.append((float(xy[0]), float(xy[1])))
            except ValueError:
                raise SpecError(f"bad vertex {pair!r} in norm spec {token!r}") from None
        return Polygon(tuple(verts))
    raise SpecError(f"unknown norm kind {kind!r} in norm spec {token!r}")


def _fmt_exponent(p: float) -> str:
    if math.isinf(p):
        return "inf"
    return str(int(p)) if float(p).is_integer() else repr(float(p))


def format_norm(spec: NormSpec) -> str:
    """Inverse of :func:`parse_norm`."""
    if isinstance(spec, Lp):
        return f"lp:{_fmt_exponent(spec.p)}"
    if isinstance(spec, Mixed):
        return f"mixed:{_fmt_exponent(spec.p_same)},{_fmt_exponent(spec.p_opp)}"
    if isinstance(spec, RegularPolygon):
        return f"regular:{spec.n}"
    if isinstance(spec, Polygon):
        return "polygon:" + ";".join(f"{x!r},{y!r}" for x, y in spec.vertices)
    if isinstance(spec, DualOf):
        return f"dual({format_norm(spec.inner)})"
    raise SpecError(f"not a norm spec: {spec!r}")


# ---------------------------------------------------------------------------
# polygons


def _wedge(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def check_polygon(vertices, tol: float = POLYGON_TOL) -> np.ndarray:
    """Validate a unit-sphere polygon and return it as an ``(m, 2)`` array.

    Raises :class:`SpecError` unless the list is counterclockwise, centrally
    symmetric, strictly convex and strictly contains the origin.
    """
    V = np.asarray(vertices, dtype=float)
    if V.ndim != 2 or V.shape[1] != 2:
        raise SpecError("polygon vertices must be a list of (x, y) pairs")
    m = len(V)
    if m < 4 or m % 2:
        raise SpecError(f"polygon needs an even number >= 4 of vertices, got {m}")
    if not np.all(np.isfinite(V)):
        raise SpecError("polygon has non-finite vertices")
    scale = float(np.max(np.abs(V)))
    E = np.roll(V, -1, axis=0) - V
    if 0.5 * float(np.sum(_wedge(V, np.roll(V, -1, axis=0)))) <= 0:
        raise SpecError("polygon vertices are not listed counterclockwise")
    half = m // 2
    if np.max(np.abs(V[half:] + V[:half])) > tol * max(scale, 1.0):
        raise SpecError("polygon is not centrally symmetric")
    turns = _wedge(E, np.roll(E, -1, axis=0))
    if np.any(turns <= tol * scale**2):
        raise SpecError("polygon is not strictly convex (collinear or reflex vertices)")
    winding = np.sum(np.arctan2(turns, np.sum(E * np.roll(E, -1, axis=0), axis=1)))
    if abs(winding - 2 * math.pi) > 1e-6:
        raise SpecError("polygon boundary winds more than once")
    if np.any(_wedge(V, E) <= tol * scale**2):
        raise SpecError("origin is not strictly inside the polygon")
    return V


def _symmetrize(V: np.ndarray) -> np.ndarray:
    half = len(V) // 2
    w = 0.5 * (V[:half] - V[half:])
    return np.vstack([w, -w])


def _drop_collinear(points) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    keep = _wedge(P - np.roll(P, 1, axis=0), np.roll(P, -1, axis=0) - P) > 1e-14
    return P[keep]


def _canonical_start(V: np.ndarray) -> np.ndarray:
    ang = np.mod(np.arctan2(V[:, 1], V[:, 0]), 2 * math.pi)
    ang[ang > 2 * math.pi - 1e-12] = 0.0
    return np.roll(V, -int(np.argmin(ang)), axis=0)


@dataclass(frozen=True, eq=False)
class PolygonData:
    """Exact description of a polygonal unit sphere.

    ``facets[i]`` is the outward normal of edge ``i`` (from vertex ``i`` to
    ``i+1``) scaled so that the edge lies on ``facets[i] . x = 1``; the gauge
    is then ``max_i facets[i] . x``.
    """

    vertices: np.ndarray
    facets: np.ndarray = field(init=False)

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float)
        V.setflags(write=False)
        E = np.roll(V, -1, axis=0) - V
        normals = np.column_stack([E[:, 1], -E[:, 0]])
        offsets = np.sum(normals * V, axis=1)
        facets = normals / offsets[:, None]
        facets.setflags(write=False)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "facets", facets)
        half = len(facets) // 2
        # with exactly opposite facets the gauge is a max of |f . x| over half of them
        exact_pairs = np.array_equal(facets[half:], -facets[:half])
        object.__setattr__(self, "_half", facets[:half] if exact_pairs else None)

    @property
    def edges(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    def gauge(self, x1, x2):
        x1 = np.asarray(x1, float)
        x2 = np.asarray(x2, float)
        f = self.facets
        if self._half is None or x1.size < _LOOP_MIN:
            return np.max(x1[..., None] * f[:, 0] + x2[..., None] * f[:, 1], axis=-1)
        # large batches: a running maximum avoids an (n, m) temporary
        h = self._half
        acc = np.abs(h[0, 0] * x1 + h[0, 1] * x2)
        for a, b in h[1:]:
            np.maximum(acc, np.abs(a * x1 + b * x2), out=acc)
        return acc

    def support(self, y1, y2):
        y1 = np.asarray(y1, float)
        y2 = np.asarray(y2, float)
        V = self.vertices
        return np.max(y1[..., None] * V[:, 0] + y2[..., None] * V[:, 1], axis=-1)


def polar_polygon(vertices) -> list[Vector2]:
    """Vertices of the polar polygon (unit sphere of the dual norm).

    The polar vertex attached to the edge ``[p_i, p_{i+1}]`` solves
    ``p_i . y = 1`` and ``p_{i+1} . y = 1``.  The output is counterclockwise
    and starts at the vertex with the smallest polar angle in ``[0, 2 pi)``.
    """
    V = check_polygon(vertices)
    return [to_vector(y) for y in _polar_array(V)]


def _polar_array(V: np.ndarray) -> np.ndarray:
    a = V
    b = np.roll(V, -1, axis=0)
    det = _wedge(a, b)
    if np.any(np.abs(det) <= 1e-14 * np.max(np.abs(V)) ** 2):
        raise GeometryError("adjacent support lines are parallel; polar vertex undefined")
    Y = np.column_stack([b[:, 1] - a[:, 1], a[:, 0] - b[:, 0]]) / det[:, None]
    return _canonical_start(Y)


def regular_polygon_vertices(n: int) -> np.ndarray:
    k = np.arange(n)
    V = np.column_stack([np.cos(2 * math.pi * k / n), np.sin(2 * math.pi * k / n)])
    return _symmetrize(V)


def _mixed_vertices(p_same: float, p_opp: float):
    if not all(p == 1 or math.isinf(p) for p in (p_same, p_opp)):
        return None
    axes = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
    pts = []
    for q in range(4):
        a, b = axes[q], axes[(q + 1) % 4]
        pts.append(a)
        if math.isinf(p_same if q % 2 == 0 else p_opp):
            pts.append((a[0] + b[0], a[1] + b[1]))
    return _canonical_start(_drop_collinear(pts))


# ---------------------------------------------------------------------------
# evaluators


def _lp(x1, x2, p: float):
    a = np.abs(x1)
    b = np.abs(x2)
    if p == 1:
        return a + b
    if p == 2:
        return np.hypot(a, b)
    if math.isinf(p):
        return np.maximum(a, b)
    m = np.maximum(a, b)
    safe = np.where(m > 0, m, 1.0)
    return m * ((a / safe) ** p + (b / safe) ** p) ** (1.0 / p)


def _conjugate(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _same_sign(x1, x2):
    return ((x1 >= 0) == (x2 >= 0)) | (x1 == 0) | (x2 == 0)


class _NumericSupport:
    """Support function of a non-polygonal unit ball.

    The sphere is sampled at ``n`` polar angles; for a query ``y`` the best
    sample is located through the normal fan of the inscribed polygon, and
    the arc between its two neighbours is refined by golden section.
    """

    def __init__(self, inner: "NormHandle", n: int = DUAL_GRID_N):
        self.inner = inner
        self.theta = 2 * math.pi * np.arange(n) / n
        dirs = np.column_stack([np.cos(self.theta), np.sin(self.theta)])
        self.points = dirs / inner(dirs)[:, None]
        E = np.roll(self.points, -1, axis=0) - self.points
        self.normal_angles = np.unwrap(np.arctan2(-E[:, 0], E[:, 1]))
        self.n = n

    def _sphere(self, theta):
        c, s = np.cos(theta), np.sin(theta)
        r = self.inner._evaluate(c, s)
        return c / r, s / r

    def _refine(self, y1, y2):
        phi0 = self.normal_angles[0]
        phi = phi0 + np.mod(np.arctan2(y2, y1) - phi0, 2 * math.pi)
        k = np.searchsorted(self.normal_angles, phi, side="right") % self.n
        lo = self.theta[k] - 2 * math.pi / self.n
        hi = self.theta[k] + 2 * math.pi / self.n

        def objective(theta):
            s1, s2 = self._sphere(theta)
            return s1 * y1 + s2 * y2

        theta, best, _ = golden_max(objective, lo, hi, _DUAL_ANGLE_TOL)
        x1, x2 = self._sphere(theta)
        for shift in (-1, 0, 1):
            P = self.points[(k + shift) % self.n]
            val = P[:, 0] * y1 + P[:, 1] * y2
            better = val > best
            best = np.where(better, val, best)
            x1 = np.where(better, P[:, 0], x1)
            x2 = np.where(better, P[:, 1], x2)
        return best, x1, x2

    def support_points(self, phi):
        """Points of the sphere where the direction ``phi`` is supported."""
        phi = np.asarray(phi, float)
        _, x1, x2 = self._refine(np.cos(phi), np.sin(phi))
        return np.column_stack([x1, x2])

    def __call__(self, y1, y2):
        y1 = np.asarray(y1, float)
        y2 = np.asarray(y2, float)
        shape = np.broadcast(y1, y2).shape
        y1 = np.broadcast_to(y1, shape).ravel()
        y2 = np.broadcast_to(y2, shape).ravel()
        best, _, _ = self._refine(y1, y2)
        return best.reshape(shape)


class _TabulatedSupport:
    """Fast support function for handles built from ``DualOf``.

    Exact support points are tabulated for ``m`` equally spaced directions.
    A query between two table directions is supported on the sphere arc
    between their support points, so the larger of the two dot products is a
    lower bound whose error is below ``R * (2 pi / m)**2 / 8`` for local
    radius of curvature ``R`` (about 1e-9 for ``m = 2**16`` and ``R = 1``).
    Corners and flat pieces of the sphere are reproduced exactly.
    """

    def __init__(self, inner: "NormHandle", m: int = 2**16):
        self.m = m
        self.table = _NumericSupport(inner).support_points(2 * math.pi * np.arange(m) / m)

    def __call__(self, y1, y2):
        y1 = np.asarray(y1, float)
        y2 = np.asarray(y2, float)
        phi = np.mod(np.arctan2(y2, y1), 2 * math.pi)
        j = np.floor(phi * (self.m / (2 * math.pi))).astype(np.int64) % self.m
        a = self.table[j]
        b = self.table[(j + 1) % self.m]
        return np.maximum(a[..., 0] * y1 + a[..., 1] * y2, b[..., 0] * y1 + b[..., 1] * y2)


class NormHandle:
    """A built norm: call it on a vector or an array of shape ``(..., 2)``."""

    __slots__ = ("spec", "polygon", "_evaluate")

    def __init__(self, spec: NormSpec, evaluate, polygon: PolygonData | None = None):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "polygon", polygon)
        object.__setattr__(self, "_evaluate", evaluate)

    def __setattr__(self, name, value):
        raise AttributeError("NormHandle is immutable")

    def __call__(self, v):
        arr = np.asarray(v, dtype=float)
        out = self._evaluate(arr[..., 0], arr[..., 1])
        if np.ndim(out) == 0:
            return float(out)
        return out

    def evaluate(self, x1, x2):
        """Evaluate on separate coordinate arrays (avoids stacking)."""
        return self._evaluate(np.asarray(x1, float), np.asarray(x2, float))

    @property
    def is_polygonal(self) -> bool:
        return self.polygon is not None

    def __repr__(self):
        return f"NormHandle({format_norm(self.spec)})"


def support_function(inner: NormHandle):
    """Vectorised ``y -> sup{x . y : ||x|| <= 1}`` for the given norm."""
    if inner.polygon is not None:
        return inner.polygon.support
    spec = inner.spec
    if isinstance(spec, Lp):
        q = _conjugate(spec.p)
        return lambda y1, y2: _lp(y1, y2, q)
    if isinstance(spec, DualOf):
        return build_norm(spec.inner)._evaluate
    return _NumericSupport(inner)


def build_norm(spec: NormSpec) -> NormHandle:
    """Build an evaluator for ``spec``.

    Raises :class:`SpecError` for malformed polygons or exponents below 1.
    """
    if isinstance(spec, str):
        spec = parse_norm(spec)
    if isinstance(spec, Lp):
        p = spec.p
        poly = _mixed_vertices(p, p)
        return NormHandle(spec, lambda x1, x2: _lp(x1, x2, p),
                          PolygonData(poly) if poly is not None else None)
    if isinstance(spec, Mixed):
        ps, po = spec.p_same, spec.p_opp

        def mixed(x1, x2):
            return np.where(_same_sign(x1, x2), _lp(x1, x2, ps), _lp(x1, x2, po))

        poly = _mixed_vertices(ps, po)
        return NormHandle(spec, mixed, PolygonData(poly) if poly is not None else None)
    if isinstance(spec, Polygon):
        data = PolygonData(_symmetrize(check_polygon(spec.vertices)))
        return NormHandle(spec, data.gauge, data)
    if isinstance(spec, RegularPolygon):
        data = PolygonData(regular_polygon_vertices(spec.n))
        return NormHandle(spec, data.gauge, data)
    if isinstance(spec, DualOf):
        inner = build_norm(spec.inner)
        if inner.polygon is not None:
            polar = PolygonData(_symmetrize(_polar_array(inner.polygon.vertices)))
            return NormHandle(spec, inner.polygon.support, polar)
        if isinstance(inner.spec, DualOf):
            # bipolar: the dual of a dual is the original norm
            base = build_norm(inner.spec.inner)
            return NormHandle(spec, base._evaluate, base.polygon)
        return NormHandle(spec, _TabulatedSupport(inner))
    raise SpecError(f"not a norm spec: {spec!r}")


def dual_eval(inner: NormHandle, y) -> float:
    """``sup{x . y : ||x|| <= 1}``, the dual norm of ``y``."""
    y = as_array(y)
    return float(support_function(inner)(y[0], y[1]))


# ---------------------------------------------------------------------------
# sampling and validation


def unit_vectors(handle: NormHandle, theta) -> np.ndarray:
    theta = np.asarray(theta, float)
    c, s = np.cos(theta), np.sin(theta)
    r = handle.evaluate(c, s)
    return np.stack([c / r, s / r], axis=-1)


def unit_vector(handle: NormHandle, theta: float) -> Vector2:
    """Radial projection of the direction ``theta`` onto the unit sphere."""
    return to_vector(unit_vectors(handle, float(theta)))


def sphere_polyline(handle: NormHandle, n: int) -> list[Vector2]:
    """``n`` unit vectors at equally spaced angles, in angular order.

    For polygonal norms the exact vertices are merged in, so that the
    polyline traces the sphere exactly.
    """
    if n < 4:
        raise ArgumentError(f"need at least 4 sphere points, got {n}")
    pts = unit_vectors(handle, 2 * math.pi * np.arange(n) / n)
    if handle.polygon is not None:
        pts = np.vstack([handle.polygon.vertices, pts])
    ang = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * math.pi)
    ang[ang > 2 * math.pi - 1e-12] = 0.0
    order = np.argsort(ang, kind="stable")
    out: list[np.ndarray] = []
    for i in order:
        if any(np.max(np.abs(pts[i] - q)) <= 1e-12 for q in out[-1:] + out[:1]):
            continue
        out.append(pts[i])
    return [to_vector(p) for p in out]


@dataclass
class ValidationReport:
    is_norm: bool
    symmetry_defect: float
    worst_triangle_violation: float
    samples_used: int
    failures: list = field(default_factory=list)


def validate_norm(handle: NormHandle, samples: int, seed: int,
                  tol: float = 1e-9, max_failures: int = 20) -> ValidationReport:
    """Sampled check of symmetry and the triangle inequality.

    This is evidence, not a proof: ``samples`` random pairs are drawn from a
    standard normal distribution seeded by ``seed``.
    """
    if samples < 1:
        raise ArgumentError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((samples, 2))
    b = rng.standard_normal((samples, 2))
    na, nb = handle(a), handle(b)
    sym = float(np.max(np.abs(handle(-a) - na)))
    viol = handle(a + b) - na - nb
    worst = float(max(np.max(viol), 0.0))
    bad = np.flatnonzero(viol > tol)
    bad = bad[np.argsort(-viol[bad])][:max_failures]
    failures = [(to_vector(a[i]), to_vector(b[i]), float(viol[i])) for i in bad]
    return ValidationReport(
        is_norm=sym <= tol and worst <= tol,
        symmetry_defect=sym,
        worst_triangle_violation=worst,
        samples_used=samples,
        failures=failures,
    )
