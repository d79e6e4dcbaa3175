"""Dunkl–Williams type constants of a normed plane.

Every supremum handled here has the shape

    sup over u, v on the unit sphere of  sup over a scalar s of  f(u, v, s)

where, for fixed ``(u, v)``, ``s -> f(u, v, s)`` is quasi-concave (a positive
affine numerator over a convex norm expression).  The engine therefore scans
a grid of angle pairs, maximises each one-dimensional profile by golden
section, and polishes the best cells by coordinate-wise golden section over
the two angles.  All formulations share this machinery and differ only in
the objective and the parameter domain.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from ._search import golden_max, golden_min
from .birkhoff import companions_batch, line_min_batch, vertex_birkhoff
from .errors import ArgumentError, ExcludedPairError, InternalError
from .normspace import (
    DualOf,
    NormHandle,
    Vector2,
    as_array,
    build_norm,
    check_polygon,
    PolygonData,
    _symmetrize,
    to_vector,
    unit_vectors,
)

# slack on the universal bounds 2 <= DW <= 4
BOUND_TOL = 1e-6
EQUIV_TOL = 5e-3
IB_R_MIN = 1e-3
IB_R_MAX = 1e3
IB_R_GRID_N = 64
# angular resolution of the vertex polish on polygons: peaks there have slopes
# of order 1 / t_margin, so the sweep tolerance is far too coarse
_POLISH_TOL = 1e-15


class Formulation(str, enum.Enum):
    TRIPLE = "Triple"
    DW1 = "DW1"
    DW2 = "DW2"
    DW3 = "DW3"
    DW4 = "DW4"
    DW5 = "DW5"
    DWB3 = "DWB3"
    IB = "IB"


@dataclass(frozen=True)
class EngineConfig:
    angle_grid_n: int = 720
    t_grid_n: int = 256
    t_margin: float = 1e-4
    refine_sweeps: int = 3
    refine_top_k: int = 16
    refine_tol: float = 1e-10
    gamma_tol: float = 1e-12
    sum_zero_tol: float = 1e-9

    def __post_init__(self):
        if not 0 < self.t_margin < 0.5:
            raise ArgumentError(f"t_margin must lie in (0, 1/2), got {self.t_margin}")
        for name in ("angle_grid_n", "t_grid_n"):
            if getattr(self, name) < 8:
                raise ArgumentError(f"{name} must be at least 8")
        if self.angle_grid_n % 2:
            raise ArgumentError("angle_grid_n must be even")
        if self.refine_sweeps < 0 or self.refine_top_k < 1:
            raise ArgumentError("refine_sweeps must be >= 0 and refine_top_k >= 1")
        if not (self.refine_tol > 0 and self.gamma_tol > 0 and self.sum_zero_tol >= 0):
            raise ArgumentError("tolerances must be positive")


class Witness(NamedTuple):
    u: Vector2
    v: Vector2
    param: float


@dataclass(frozen=True)
class DWResult:
    value: float
    witness: Witness
    formulation: Formulation
    boundary_flag: bool
    config: EngineConfig = field(repr=False)


# ---------------------------------------------------------------------------
# pointwise objectives


def _n(norm: NormHandle, x1, x2):
    return norm.evaluate(x1, x2)


def dw_point(norm: NormHandle, u, v, t: float) -> float:
    """``(1+t) ||u - v|| / ||u - t v||`` for unit ``u, v`` and ``0 < t < 1``."""
    if not 0 < t < 1:
        raise ArgumentError(f"t must lie in (0, 1), got {t}")
    u = as_array(u)
    v = as_array(v)
    return float((1 + t) * norm(u - v) / norm(u - t * v))


def _check_pair(norm: NormHandle, u, v, sum_zero_tol: float):
    u = as_array(u)
    v = as_array(v)
    s = norm(u + v)
    if s <= sum_zero_tol:
        raise ExcludedPairError(f"u + v vanishes (||u+v|| = {s:.3g}); the pair is excluded")
    return u, v, s


def dw3_point(norm: NormHandle, u, v, gamma_upper: float = 0.5,
              gamma_tol: float = 1e-12, sum_zero_tol: float = 1e-9) -> float:
    """``||u+v|| / min{||(1-g) u + g v|| : 0 <= g <= gamma_upper}``.

    The weight ``g`` sits on ``v``; with ``gamma_upper = 1/2`` this is the
    pointwise maximum over ``t`` of ``(1+t) ||u+v|| / ||u + t v||``.  The inner
    minimum of the convex function of ``g`` is found by golden section.
    """
    if not 0 < gamma_upper <= 1:
        raise ArgumentError(f"gamma_upper must lie in (0, 1], got {gamma_upper}")
    u, v, s = _check_pair(norm, u, v, sum_zero_tol)
    _, m, _ = golden_min(lambda g: _n(norm, (1 - g) * u[0] + g * v[0], (1 - g) * u[1] + g * v[1]),
                         0.0, gamma_upper, gamma_tol)
    return float(s / m)


def _polygon_of(norm_or_vertices) -> PolygonData:
    if isinstance(norm_or_vertices, NormHandle):
        if norm_or_vertices.polygon is None:
            raise ArgumentError(f"{norm_or_vertices!r} is not a polygonal norm")
        return norm_or_vertices.polygon
    return PolygonData(_symmetrize(check_polygon(norm_or_vertices)))


def _segment_breakpoints(poly: PolygonData, u, v) -> np.ndarray:
    # gamma where (1-g) u + g v crosses the ray through a vertex p:
    # wedge(p, u) + g * wedge(p, v - u) = 0
    V = poly.vertices
    d = v - u
    num = V[:, 0] * u[1] - V[:, 1] * u[0]
    den = V[:, 0] * d[1] - V[:, 1] * d[0]
    ok = np.abs(den) > 1e-300
    return -num[ok] / den[ok]


def segment_min_polygon(norm_or_vertices, u, v, gamma_upper: float = 0.5,
                        sum_zero_tol: float = 1e-9) -> tuple[float, float]:
    """Exact ``min{||(1-g) u + g v|| : 0 <= g <= gamma_upper}`` for a polygonal norm.

    The gauge is linear between consecutive crossings of vertex rays, so the
    minimum is attained at a crossing or an interval end.  Returns
    ``(gamma_star, value)``.  ``norm_or_vertices`` is a polygonal
    :class:`NormHandle` or a vertex list.
    """
    poly = _polygon_of(norm_or_vertices)
    u = as_array(u)
    v = as_array(v)
    if poly.gauge(*(u + v)) <= sum_zero_tol:
        raise ExcludedPairError("u + v vanishes; the pair is excluded")
    g = _segment_breakpoints(poly, u, v)
    g = np.concatenate([[0.0, gamma_upper], g[(g > 0) & (g < gamma_upper)]])
    vals = poly.gauge((1 - g) * u[0] + g * v[0], (1 - g) * u[1] + g * v[1])
    k = int(np.argmin(vals))
    return float(g[k]), float(vals[k])


class Certificate(NamedTuple):
    gamma: float
    rho: float
    x: Vector2
    orthogonal: bool


def segment_certificate(norm_or_vertices, u, v) -> Certificate:
    """Closest point ``rho * x`` (``x`` unit) of the line through ``u, v``.

    ``x`` is Birkhoff orthogonal to ``v - u``, which is checked exactly with
    the wedge test, and ``||u+v|| / rho`` bounds the pointwise objective of
    :func:`dw3_point` from above.
    """
    poly = _polygon_of(norm_or_vertices)
    u = as_array(u)
    v = as_array(v)
    if not np.any(v - u):
        return Certificate(0.0, float(poly.gauge(*u)), to_vector(u / poly.gauge(*u)), True)
    g = _segment_breakpoints(poly, u, v)
    pts = np.outer(1 - g, u) + np.outer(g, v)
    vals = poly.gauge(pts[:, 0], pts[:, 1])
    k = int(np.argmin(vals))
    rho = float(vals[k])
    x = pts[k] / rho
    d = v - u
    V = poly.vertices
    m = len(V)
    j = int(np.argmin(np.max(np.abs(V - x), axis=1)))
    if np.max(np.abs(V[j] - x)) <= 1e-9:
        ok = vertex_birkhoff(V[j - 1], V[j], V[(j + 1) % m], d)
    else:
        # x inside an edge: orthogonal exactly to that edge direction
        i = int(np.argmax(poly.facets @ x))
        e = V[(i + 1) % m] - V[i]
        ok = abs(e[0] * d[1] - e[1] * d[0]) <= 1e-9 * np.linalg.norm(e) * np.linalg.norm(d)
    return Certificate(float(g[k]), rho, to_vector(x), bool(ok))


# ---------------------------------------------------------------------------
# formulations


@dataclass(frozen=True)
class _Form:
    name: Formulation
    # prepare(norm, u1, u2, v1, v2) -> s -> objective (vectorised over arrays)
    prepare: Callable
    # margin -> (lo, hi) search interval for s
    domain: Callable
    # s -> equivalent t of the triple form (for the boundary flag)
    to_t: Callable
    # s -> reported witness parameter
    to_param: Callable = staticmethod(lambda s: s)
    excludes_antipodes: bool = False


def _prep_triple(norm, u1, u2, v1, v2):
    top = _n(norm, u1 - v1, u2 - v2)
    return lambda t: (1 + t) * top / _n(norm, u1 - t * v1, u2 - t * v2)


def _prep_dw5(norm, u1, u2, v1, v2):
    top = _n(norm, u1 + v1, u2 + v2)
    return lambda t: (1 + t) * top / _n(norm, u1 + t * v1, u2 + t * v2)


def _prep_dw4(norm, u1, u2, v1, v2):
    s1, s2 = u1 + v1, u2 + v2
    d1, d2 = u1 - v1, u2 - v2
    top = 2 * _n(norm, s1, s2)
    return lambda dl: top / _n(norm, s1 + dl * d1, s2 + dl * d2)


def _prep_dw2(norm, u1, u2, v1, v2):
    top = _n(norm, u1 + v1, u2 + v2)
    return lambda g: top / _n(norm, g * u1 + (1 - g) * v1, g * u2 + (1 - g) * v2)


def _prep_dw1(norm, u1, u2, v1, v2):
    # mu = 1, lambda = exp(s) on a logarithmic scale
    top = _n(norm, u1 + v1, u2 + v2)

    def f(s):
        lam = np.exp(s)
        return (lam + 1) * top / _n(norm, lam * u1 + v1, lam * u2 + v2)

    return f


def _prep_dw3(norm, u1, u2, v1, v2, sum_zero_tol=0.0):
    top = _n(norm, u1 + v1, u2 + v2)
    top = np.where(top > sum_zero_tol, top, -np.inf)
    return lambda g: top / _n(norm, (1 - g) * u1 + g * v1, (1 - g) * u2 + g * v2)


def _t_dom(m):
    return m, 1 - m


def _gamma_dom(m):
    # gamma = t / (1 + t)
    return m / (1 + m), (1 - m) / (2 - m)


FORMS = {
    Formulation.TRIPLE: _Form(Formulation.TRIPLE, _prep_triple, _t_dom, lambda s: s),
    Formulation.DW5: _Form(Formulation.DW5, _prep_dw5, _t_dom, lambda s: s),
    Formulation.DW4: _Form(Formulation.DW4, _prep_dw4,
                           lambda m: (m / (2 - m), (1 - m) / (1 + m)),
                           lambda d: (1 - d) / (1 + d)),
    Formulation.DW2: _Form(Formulation.DW2, _prep_dw2, _gamma_dom, lambda g: g / (1 - g)),
    Formulation.DW1: _Form(Formulation.DW1, _prep_dw1,
                           lambda m: (math.log(m), math.log(1 - m)),
                           lambda s: np.exp(s), to_param=lambda s: float(np.exp(s))),
    Formulation.DW3: _Form(Formulation.DW3, _prep_dw3, _gamma_dom, lambda g: g / (1 - g),
                           excludes_antipodes=True),
}


def evaluate_witness(norm: NormHandle, formulation, witness) -> float:
    """Objective of ``formulation`` at an explicit ``(u, v, param)``.

    ``param`` is ``t`` (Triple, DW5), ``lambda`` with ``mu = 1`` (DW1),
    ``gamma`` (DW2, DW3, DWB3), ``delta`` (DW4) or ``lambda`` (IB, where the
    value is ``||u + lambda v|| / ||u||``).
    """
    f = Formulation(formulation)
    u = as_array(witness[0])
    v = as_array(witness[1])
    p = float(witness[2])
    if f is Formulation.IB:
        return float(norm(u + p * v) / norm(u))
    if f is Formulation.DWB3:
        f = Formulation.DW3
    if f is Formulation.DW1:
        p = math.log(p)
    return float(FORMS[f].prepare(norm, u[0], u[1], v[0], v[1])(p))


# ---------------------------------------------------------------------------
# grid + refinement driver


def _coarse_grid(n: int):
    # u over half the circle: every objective is invariant under (u, v) -> (-u, -v)
    th_v = 2 * math.pi * np.arange(n) / n
    return th_v[: n // 2], th_v


def _top_k(values: np.ndarray, k: int) -> np.ndarray:
    flat = values.ravel()
    # stable sort on -value: equal values keep cell-index order
    order = np.argsort(-flat, kind="stable")
    return order[: min(k, flat.size)]


def _check_bounds(value: float, what: str):
    if not (2 - BOUND_TOL <= value <= 4 + BOUND_TOL):
        raise InternalError(f"{what} = {value!r} violates the bounds 2 <= DW <= 4")


def _split_golden(f, c, other, h, tol):
    """Golden-section maximisation of ``f`` around ``c`` within ``+-h``.

    Objectives degenerate where ``u = +-v`` (a numerator vanishes), which
    puts a dip right next to the sharpest peaks; the bracket is therefore
    split at ``c`` and at the nearest angle congruent to ``other`` modulo
    pi, and each piece is searched separately.
    """
    s = c + np.mod(other - c + math.pi / 2, math.pi) - math.pi / 2
    s = np.clip(s, c - h, c + h)
    cuts = [c - h, np.minimum(c, s), np.maximum(c, s), c + h]
    best_t = c
    best_v = np.full(np.shape(c), -np.inf)
    for a, b in zip(cuts[:-1], cuts[1:]):
        t, v, _ = golden_max(f, a, b, tol)
        better = v > best_v
        best_t = np.where(better, t, best_t)
        best_v = np.where(better, v, best_v)
    return best_t, best_v


def _snap(theta, corners: np.ndarray):
    """The angle in ``corners`` (sorted, in [0, 2 pi)) nearest to each ``theta``, unwrapped
    to lie within pi of ``theta``."""
    ext = np.concatenate([corners - 2 * math.pi, corners, corners + 2 * math.pi])
    th = np.mod(theta, 2 * math.pi)
    j = np.clip(np.searchsorted(ext, th), 1, len(ext) - 1)
    left, right = ext[j - 1], ext[j]
    near = np.where(th - left <= right - th, left, right)
    return theta + (near - th)


def _maximize(norm: NormHandle, form: _Form, cfg: EngineConfig) -> DWResult:
    m = cfg.t_margin
    lo, hi = form.domain(m)
    inner_tol = cfg.gamma_tol if form.name is Formulation.DW3 else cfg.refine_tol

    def prepare(u, v):
        if form.excludes_antipodes:
            return _prep_dw3(norm, u[..., 0], u[..., 1], v[..., 0], v[..., 1], cfg.sum_zero_tol)
        return form.prepare(norm, u[..., 0], u[..., 1], v[..., 0], v[..., 1])

    def profile(th_u, th_v, tol):
        u = unit_vectors(norm, th_u)
        v = unit_vectors(norm, th_v)
        f = prepare(u, v)
        s, val, _ = golden_max(f, np.full(np.shape(u)[:-1], lo), hi, tol)
        return val, s

    n = cfg.angle_grid_n
    th_u, th_v = _coarse_grid(n)
    TU, TV = np.meshgrid(th_u, th_v, indexing="ij")
    # every parameter map has |ds/dt| >= 1/4, so this resolves t to 1/t_grid_n
    coarse, _ = profile(TU, TV, 1.0 / (4 * cfg.t_grid_n))
    idx = _top_k(coarse, cfg.refine_top_k)
    cu = TU.ravel()[idx]
    cv = TV.ravel()[idx]
    best, s = profile(cu, cv, inner_tol)
    h = 2 * math.pi / n
    for _ in range(cfg.refine_sweeps):
        start_u, start_v = cu, cv
        t_new, val = _split_golden(lambda t: profile(t, cv, inner_tol)[0], cu, cv, h, cfg.refine_tol)
        better = val > best
        cu = np.where(better, t_new, cu)
        best = np.where(better, val, best)
        t_new, val = _split_golden(lambda t: profile(cu, t, inner_tol)[0], cv, cu, h, cfg.refine_tol)
        better = val > best
        cv = np.where(better, t_new, cv)
        best = np.where(better, val, best)
        # near-boundary suprema sit on thin slanted ridges that coordinate
        # moves only creep along; extrapolate along the net displacement
        du, dv = cu - start_u, cv - start_v
        z, val, _ = golden_max(lambda z: profile(cu + z * du, cv + z * dv, inner_tol)[0],
                               np.zeros_like(cu), np.full_like(cu, 8.0), cfg.refine_tol)
        better = val > best
        cu = np.where(better, cu + z * du, cu)
        cv = np.where(better, cv + z * dv, cv)
        best = np.where(better, val, best)
    if norm.polygon is not None and cfg.refine_sweeps:
        # on a polygon the objective is piecewise linear-fractional and its
        # sharpest peaks sit with u or v exactly at a vertex, in a cone too
        # narrow for coordinate moves: try snapping each to the nearest vertex
        V = norm.polygon.vertices
        corners = np.sort(np.mod(np.arctan2(V[:, 1], V[:, 0]), 2 * math.pi))
        snap_v = _snap(cv, corners)
        t_new, val = _split_golden(lambda t: profile(t, snap_v, _POLISH_TOL)[0], cu, snap_v, h,
                                   _POLISH_TOL)
        better = val > best
        cu = np.where(better, t_new, cu)
        cv = np.where(better, snap_v, cv)
        best = np.where(better, val, best)
        snap_u = _snap(cu, corners)
        t_new, val = _split_golden(lambda t: profile(snap_u, t, _POLISH_TOL)[0], cv, snap_u, h,
                                   _POLISH_TOL)
        better = val > best
        cv = np.where(better, t_new, cv)
        cu = np.where(better, snap_u, cu)
        best = np.where(better, val, best)
        inner_tol = min(inner_tol, _POLISH_TOL)
    best, s = profile(cu, cv, inner_tol)
    k = int(np.argmax(best))
    u = unit_vectors(norm, cu[k])
    v = unit_vectors(norm, cv[k])
    param = form.to_param(float(s[k]))
    witness = Witness(to_vector(u), to_vector(v), param)
    value = evaluate_witness(norm, form.name, witness)
    _check_bounds(value, form.name.value)
    t_eq = float(form.to_t(float(s[k])))
    flag = t_eq <= 2 * m or t_eq >= 1 - 2 * m
    return DWResult(value, witness, form.name, bool(flag), cfg)


def compute_dw(norm: NormHandle, cfg: EngineConfig | None = None) -> DWResult:
    """DW of the norm from the triple form ``(1+t) ||u-v|| / ||u - t v||``.

    ``t`` is restricted to ``[t_margin, 1 - t_margin]``; ``boundary_flag`` is
    set when the maximiser's ``t`` lies within ``2 * t_margin`` of that
    boundary, which signals a supremum that is approached but not attained.
    """
    return _maximize(norm, FORMS[Formulation.TRIPLE], cfg or EngineConfig())


def compute_dw_formulation(norm: NormHandle, which, cfg: EngineConfig | None = None) -> DWResult:
    """DW through one of the formulations ``DW1`` ... ``DW5`` (or ``Triple``).

    All parameter domains are the images of ``[t_margin, 1 - t_margin]`` under
    the exact changes of variables linking each formulation to the triple
    form, so all six values carry the same margin deficit.
    """
    if isinstance(which, int) and not isinstance(which, bool):
        which = f"DW{which}"
    try:
        f = Formulation(which) if not isinstance(which, str) else _parse_formulation(which)
    except ValueError:
        raise ArgumentError(f"unknown formulation {which!r}") from None
    if f not in FORMS:
        raise ArgumentError(f"unknown formulation {which!r}")
    return _maximize(norm, FORMS[f], cfg or EngineConfig())


def _parse_formulation(text: str) -> Formulation:
    t = text.strip().lower()
    if t == "triple":
        return Formulation.TRIPLE
    if t in ("1", "2", "3", "4", "5"):
        t = "dw" + t
    return Formulation(t.upper())


# ---------------------------------------------------------------------------
# DW_B


def _dwb_scores(norm: NormHandle, U: np.ndarray, cfg: EngineConfig):
    """Best DW_B objective over companions and signs for each row of ``U``.

    Returns ``(value, v, gamma)`` arrays.  Companions come with one sign;
    ``(u, v)`` and ``(u, -v)`` are scored (the other two sign combinations
    are joint negations of these and give equal values).
    """
    comps = companions_batch(norm, U, cfg.angle_grid_n)
    rows, V = [], []
    for r, vs in enumerate(comps):
        for v in vs:
            rows += [r, r]
            V += [v, -v]
    rows = np.asarray(rows)
    V = np.asarray(V)
    A = U[rows]
    f = _prep_dw3(norm, A[:, 0], A[:, 1], V[:, 0], V[:, 1], cfg.sum_zero_tol)
    g, val, _ = golden_max(f, np.zeros(len(rows)), 1.0, cfg.gamma_tol)
    best = np.full(len(U), -np.inf)
    bv = np.zeros((len(U), 2))
    bg = np.zeros(len(U))
    for i, r in enumerate(rows):
        if val[i] > best[r]:
            best[r], bv[r], bg[r] = val[i], V[i], g[i]
    return best, bv, bg


def compute_dwb(norm: NormHandle, cfg: EngineConfig | None = None) -> DWResult:
    """DW_B: the Dunkl–Williams supremum restricted to Birkhoff-orthogonal pairs.

    Uses the objective ``||u+v|| / min_{0<=g<=1} ||(1-g) u + g v||`` over unit
    ``u ⊥_B v``; ``param`` of the witness is the minimising ``g``.
    """
    cfg = cfg or EngineConfig()
    th_u, _ = _coarse_grid(cfg.angle_grid_n)
    U = unit_vectors(norm, th_u)
    val, _, _ = _dwb_scores(norm, U, cfg)
    idx = _top_k(val, cfg.refine_top_k)
    cu = th_u[idx]
    best = val[idx]
    if cfg.refine_sweeps > 0:
        h = 2 * math.pi / cfg.angle_grid_n
        t_new, v_new, _ = golden_max(lambda t: _dwb_scores(norm, unit_vectors(norm, t), cfg)[0],
                                     cu - h, cu + h, cfg.refine_tol)
        better = v_new > best
        cu = np.where(better, t_new, cu)
    U = unit_vectors(norm, cu)
    val, V, G = _dwb_scores(norm, U, cfg)
    k = int(np.argmax(val))
    witness = Witness(to_vector(U[k]), to_vector(V[k]), float(G[k]))
    value = evaluate_witness(norm, Formulation.DWB3, witness)
    _check_bounds(value, "DW_B")
    m = cfg.t_margin
    flag = G[k] <= 2 * m or G[k] >= 1 - 2 * m
    return DWResult(value, witness, Formulation.DWB3, bool(flag), cfg)


# ---------------------------------------------------------------------------
# IB


def _ib_profile(norm: NormHandle, X: np.ndarray, r: np.ndarray, n_theta: int,
                tol: float = 1e-12, chunk: int = 1024):
    """For unit rows ``x`` of ``X`` and radii ``r``: minimum over isosceles
    directions ``w`` (``||x + r w|| = ||x - r w||``) of ``inf_lam ||x + lam w||``.

    Returns ``(value, theta, lam)``; ``value`` is ``inf`` when no isosceles
    direction was found (cannot happen for a norm).
    """
    out_v = np.full(len(X), np.inf)
    out_t = np.zeros(len(X))
    out_l = np.zeros(len(X))
    theta = math.pi * np.arange(n_theta + 1) / n_theta
    W = unit_vectors(norm, theta)
    for a in range(0, len(X), chunk):
        x1 = X[a:a + chunk, 0:1]
        x2 = X[a:a + chunk, 1:2]
        rr = r[a:a + chunk, None]
        ztol = 1e-13 * (1 + rr)

        def phi(w1, w2, x1=x1, x2=x2, rr=rr):
            return _n(norm, x1 + rr * w1, x2 + rr * w2) - _n(norm, x1 - rr * w1, x2 - rr * w2)

        P = phi(W[None, :, 0], W[None, :, 1])
        S = np.where(np.abs(P) <= ztol, 0, np.sign(P)).astype(np.int8)
        # zeros on the grid are isosceles already; sign changes are bisected
        zr, zc = np.nonzero(S == 0)
        cr, cc = np.nonzero(S[:, :-1] != S[:, 1:])
        lo = theta[cc].copy()
        hi = theta[cc + 1].copy()
        s_lo = S[cr, cc]
        xr1, xr2, rr_c = x1[cr, 0], x2[cr, 0], rr[cr, 0]
        for _ in range(int(math.ceil(math.log2((theta[1] - theta[0]) / tol)))):
            mid = 0.5 * (lo + hi)
            wm = unit_vectors(norm, mid)
            pm = (_n(norm, xr1 + rr_c * wm[:, 0], xr2 + rr_c * wm[:, 1])
                  - _n(norm, xr1 - rr_c * wm[:, 0], xr2 - rr_c * wm[:, 1]))
            sm = np.where(np.abs(pm) <= 1e-13 * (1 + rr_c), 0, np.sign(pm))
            left = sm == s_lo
            lo = np.where(left, mid, lo)
            hi = np.where(left, hi, mid)
        # the end of the final bracket closest to the isosceles set
        def absphi(t):
            w = unit_vectors(norm, t)
            return np.abs(_n(norm, xr1 + rr_c * w[:, 0], xr2 + rr_c * w[:, 1])
                          - _n(norm, xr1 - rr_c * w[:, 0], xr2 - rr_c * w[:, 1]))
        root = np.where(absphi(lo) <= absphi(hi), lo, hi)
        rows = np.concatenate([zr, cr])
        th = np.concatenate([theta[zc], root])
        if len(rows) == 0:
            continue
        w = unit_vectors(norm, th)
        lam, val, _ = line_min_batch(norm, x1[rows, 0], x2[rows, 0], w[:, 0], w[:, 1])
        val = val / _n(norm, x1[rows, 0], x2[rows, 0])
        order = np.lexsort((np.arange(len(rows)), val, rows))
        first = np.ones(len(order), bool)
        first[1:] = rows[order][1:] != rows[order][:-1]
        sel = order[first]
        out_v[a + rows[sel]] = val[sel]
        out_t[a + rows[sel]] = th[sel]
        out_l[a + rows[sel]] = lam[sel]
    return out_v, out_t, out_l


def _ib_chart(norm: NormHandle, th_p, th_q, lr_lo: float, lr_hi: float):
    """IB objective in the chart ``x + y = c p``, ``x - y = c q`` (``p, q`` unit).

    Every isosceles pair arises this way, and the objective reduces to
    ``inf_lam ||a + lam b|| / ||a||`` with ``a = p + q``, ``b = p - q``.  Pairs
    whose radius ``||y|| / ||x|| = ||b|| / ||a||`` leaves the radius range score
    ``inf``.  Returns ``(value, lam, a, b)``.
    """
    p = unit_vectors(norm, th_p)
    q = unit_vectors(norm, th_q)
    a = p + q
    b = p - q
    na = _n(norm, a[..., 0], a[..., 1])
    nb = _n(norm, b[..., 0], b[..., 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        lr = np.log(nb / na)
        ok = (na > 0) & (nb > 0) & (lr >= lr_lo) & (lr <= lr_hi)
    safe_b = np.where(ok[..., None], b, 1.0)
    lam, val, _ = line_min_batch(norm, a[..., 0], a[..., 1], safe_b[..., 0], safe_b[..., 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(ok, val / na, np.inf)
    return value, lam, a, b


def _split_golden_min(f, c, other, h, tol):
    t, v = _split_golden(lambda z: -f(z), c, other, h, tol)
    return t, -v


def compute_ib(norm: NormHandle, cfg: EngineConfig | None = None) -> DWResult:
    """IB: infimum of ``inf_lam ||x + lam y|| / ||x||`` over isosceles pairs.

    Coarse stage: ``x`` runs over unit vectors, ``y = r w`` with ``w`` unit
    and ``r`` on a logarithmic grid in ``[1e-3, 1e3]``; the isosceles
    directions ``w`` for each ``(x, r)`` are bracketed on an angle grid (using
    ``phi(theta + pi) = -phi(theta)``) and bisected.  The best cells are then
    polished in the chart ``x + y = c p``, ``x - y = c q`` with ``p, q`` unit,
    where the isosceles constraint holds identically, keeping ``r`` in range.

    The witness is ``(x, y, lambda*)`` with ``x`` unit; ``boundary_flag``
    reports a minimiser whose radius ``r = ||y||`` sits at the end of the
    radius range.
    """
    cfg = cfg or EngineConfig()
    n = cfg.angle_grid_n
    th_x, _ = _coarse_grid(n)
    log_r = np.linspace(math.log(IB_R_MIN), math.log(IB_R_MAX), IB_R_GRID_N)
    lr_lo, lr_hi = float(log_r[0]), float(log_r[-1])
    TX, LR = np.meshgrid(th_x, log_r, indexing="ij")
    X = unit_vectors(norm, TX.ravel())
    R = np.exp(LR.ravel())
    coarse, th, _ = _ib_profile(norm, X, R, n // 2)
    if not np.all(np.isfinite(coarse)):
        raise InternalError("no isosceles direction found for some (x, r)")
    idx = _top_k(-coarse, cfg.refine_top_k)
    Y = R[idx, None] * unit_vectors(norm, th[idx])
    P = X[idx] + Y
    Q = X[idx] - Y
    cp = np.arctan2(P[:, 1], P[:, 0])
    cq = np.arctan2(Q[:, 1], Q[:, 0])
    best = _ib_chart(norm, cp, cq, lr_lo, lr_hi)[0]
    h = 2 * math.pi / n
    for _ in range(cfg.refine_sweeps):
        start_p, start_q = cp, cq
        t_new, val = _split_golden_min(lambda t: _ib_chart(norm, t, cq, lr_lo, lr_hi)[0],
                                       cp, cq, h, cfg.refine_tol)
        better = val < best
        cp = np.where(better, t_new, cp)
        best = np.where(better, val, best)
        t_new, val = _split_golden_min(lambda t: _ib_chart(norm, cp, t, lr_lo, lr_hi)[0],
                                       cq, cp, h, cfg.refine_tol)
        better = val < best
        cq = np.where(better, t_new, cq)
        best = np.where(better, val, best)
        # the minimum often lies in a slanted valley that coordinate moves
        # only creep along; extrapolate along this sweep's net displacement
        dp, dq = cp - start_p, cq - start_q
        s_new, val, _ = golden_min(
            lambda z: _ib_chart(norm, cp + z * dp, cq + z * dq, lr_lo, lr_hi)[0],
            np.zeros_like(cp), np.full_like(cp, 8.0), cfg.refine_tol)
        better = val < best
        cp = np.where(better, cp + s_new * dp, cp)
        cq = np.where(better, cq + s_new * dq, cq)
        best = np.where(better, val, best)
    val, lam, A, B = _ib_chart(norm, cp, cq, lr_lo, lr_hi)
    k = int(np.argmin(val))
    na = _n(norm, A[k, 0], A[k, 1])
    x = A[k] / na
    y = B[k] / na
    witness = Witness(to_vector(x), to_vector(y), float(lam[k]))
    value = evaluate_witness(norm, Formulation.IB, witness)
    if not (0.5 - BOUND_TOL <= value <= 1 + BOUND_TOL):
        raise InternalError(f"IB = {value!r} violates the bounds 1/2 <= IB <= 1")
    lr = math.log(norm(y))
    flag = lr <= lr_lo + 1e-6 or lr >= lr_hi - 1e-6
    return DWResult(value, witness, Formulation.IB, bool(flag), cfg)


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class EquivalenceReport:
    values: dict
    max_deviation: float
    passed: bool
    results: dict = field(repr=False)


def check_equivalences(norm: NormHandle, cfg: EngineConfig | None = None,
                       equiv_tol: float = EQUIV_TOL) -> EquivalenceReport:
    """Compute the triple form and DW1..DW5 and compare them."""
    cfg = cfg or EngineConfig()
    order = [Formulation.TRIPLE, Formulation.DW1, Formulation.DW2,
             Formulation.DW3, Formulation.DW4, Formulation.DW5]
    results = {f.value: _maximize(norm, FORMS[f], cfg) for f in order}
    values = {k: r.value for k, r in results.items()}
    dev = max(values.values()) - min(values.values())
    return EquivalenceReport(values, dev, dev <= equiv_tol, results)


class DualReport(NamedTuple):
    dw_primal: float
    dw_dual: float
    gap: float


def dual_experiment(norm: NormHandle, cfg: EngineConfig | None = None) -> DualReport:
    """Compare DW of the norm with DW of its dual norm (reported, not asserted)."""
    cfg = cfg or EngineConfig()
    p = compute_dw(norm, cfg).value
    d = compute_dw(build_norm(DualOf(norm.spec)), cfg).value
    return DualReport(p, d, abs(p - d))
