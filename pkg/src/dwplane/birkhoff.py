"""Birkhoff orthogonality in normed planes.

``x`` is Birkhoff orthogonal to ``y`` (``x ⊥_B y``) when ``||x + lam*y|| >=
||x||`` for every real ``lam``.  Because ``lam -> ||x + lam*y||`` is convex the
test reduces to a one-dimensional convex minimisation; for polygonal norms an
exact wedge-product characterisation is available at the vertices.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ._search import golden_min
from .errors import ArgumentError, InternalError
from .normspace import NormHandle, Vector2, as_array, to_vector, unit_vectors

LINE_TOL = 1e-12
LAMBDA_CAP = 2.0**20
ORTHO_TOL = 1e-9
WEDGE_TOL = 1e-12
COARSE_TOL = 1e-3
# bisection / golden resolution (radians) when refining companion angles
_ANGLE_TOL = 1e-12
# a polygon facet is active at u when |facet . u - 1| is below this
_FACET_TOL = 1e-9
# cone edges are located where the defect leaves this (tighter than ORTHO_TOL)
# level, so the reported edge directions sit close to the true cone boundary
_EDGE_TOL = 1e-13


class LineMinResult(NamedTuple):
    lambda_star: float
    value: float
    iterations: int


class OrthoPair(NamedTuple):
    u: Vector2
    v: Vector2
    defect: float


# ---------------------------------------------------------------------------
# line minimisation


def line_min_batch(norm: NormHandle, x1, x2, y1, y2, tol: float = LINE_TOL):
    """Minimise ``lam -> ||x + lam*y||`` elementwise over broadcast arrays.

    Returns ``(lambda_star, value, iterations)`` arrays/int.  The bracket
    ``[-L, L]`` starts at ``L = 1`` and doubles until the function at both ends
    is at least its value at 0, which by convexity guarantees the minimum
    lies inside.
    """
    x1, x2, y1, y2 = np.broadcast_arrays(*(np.asarray(a, float) for a in (x1, x2, y1, y2)))

    def g(lam):
        return norm.evaluate(x1 + lam * y1, x2 + lam * y2)

    g0 = norm.evaluate(x1, x2)
    L = np.ones(x1.shape)
    while True:
        short = (g(L) < g0) | (g(-L) < g0)
        if not np.any(short):
            break
        L = np.where(short, 2.0 * L, L)
        if np.max(L) > LAMBDA_CAP:
            raise InternalError("line minimisation bracket exceeded 2**20; evaluator is not a norm")
    lam, val, n = golden_min(g, -L, L, tol)
    at_zero = g0 <= val
    lam = np.where(at_zero, 0.0, lam)
    val = np.where(at_zero, g0, val)
    return lam, val, n


def min_along_line(norm: NormHandle, x, y) -> LineMinResult:
    """Minimum of ``lam -> ||x + lam*y||`` over the real line.

    For polyhedral norms the argmin may be an interval; only ``value`` is
    meaningful then.
    """
    x = as_array(x)
    y = as_array(y)
    if not np.any(y):
        raise ArgumentError("direction y must be nonzero")
    lam, val, n = line_min_batch(norm, x[0], x[1], y[0], y[1])
    return LineMinResult(float(lam), float(val), n)


def birkhoff_defect(norm: NormHandle, x1, x2, y1, y2):
    """Vectorised ``||x|| - inf_lam ||x + lam*y||`` (nonnegative up to rounding)."""
    _, val, _ = line_min_batch(norm, x1, x2, y1, y2)
    return norm.evaluate(x1, x2) - val


def is_birkhoff(norm: NormHandle, x, y, ortho_tol: float = ORTHO_TOL) -> tuple[bool, float]:
    """Numeric test of ``x ⊥_B y``; returns ``(holds, defect)``."""
    x = as_array(x)
    y = as_array(y)
    if not np.any(x) or not np.any(y):
        raise ArgumentError("Birkhoff orthogonality needs nonzero vectors")
    nx = norm(x)
    defect = nx - min_along_line(norm, x, y).value
    return bool(defect <= ortho_tol * nx), float(defect)


# ---------------------------------------------------------------------------
# polygon vertices


def wedge(y, z) -> float:
    """The 2D cross product ``y1*z2 - y2*z1``."""
    return float(y[0] * z[1] - y[1] * z[0])


def vertex_birkhoff(p_minus, p, p_plus, x, wedge_tol: float = WEDGE_TOL) -> bool:
    """Exact test of ``p ⊥_B x`` at a polygon vertex ``p``.

    ``p_minus`` and ``p_plus`` are the neighbouring vertices (either
    orientation gives the same answer).  The wedge conditions describe one of
    the two opposite cones of companions; orthogonality is homogeneous, so
    ``x`` qualifies when either ``x`` or ``-x`` satisfies them.
    """
    p_minus, p, p_plus, x = (np.asarray(a, float) for a in (p_minus, p, p_plus, x))
    a = wedge(p - p_minus, x)
    b = wedge(x, p_plus - p)
    return bool((a >= -wedge_tol and b >= -wedge_tol) or (-a >= -wedge_tol and -b >= -wedge_tol))


# ---------------------------------------------------------------------------
# companions


def _unit(norm: NormHandle, w: np.ndarray) -> np.ndarray:
    return w / norm(w)


def _polygon_companions(norm: NormHandle, u: np.ndarray) -> list[np.ndarray]:
    poly = norm.polygon
    V = poly.vertices
    m = len(V)
    active = np.flatnonzero(np.abs(poly.facets @ u - 1.0) <= _FACET_TOL)
    if len(active) == 1:
        i = int(active[0])
        return [_unit(norm, V[(i + 1) % m] - V[i])]
    if len(active) == 2:
        i, j = int(active[0]), int(active[1])
        # vertex shared by edges i and j; order them as (incoming, outgoing)
        if (i + 1) % m != j:
            i, j = j, i
        d_in = _unit(norm, V[j] - V[i])
        d_out = _unit(norm, V[(j + 1) % m] - V[j])
        mid = d_in / np.linalg.norm(d_in) + d_out / np.linalg.norm(d_out)
        return [d_in, _unit(norm, mid), d_out]
    raise InternalError(f"point {u} is not on the polygon unit sphere")


def _scan_companions(norm: NormHandle, U: np.ndarray, n: int,
                     ortho_tol: float) -> list[list[float]]:
    """Companion angles in ``[0, pi)`` for each row of ``U`` (unit vectors)."""
    k = len(U)
    theta = math.pi * np.arange(n) / n
    W = unit_vectors(norm, theta)
    u1 = U[:, 0:1]
    u2 = U[:, 1:2]
    nu = norm.evaluate(U[:, 0], U[:, 1])[:, None]
    D = birkhoff_defect(norm, u1, u2, W[None, :, 0], W[None, :, 1])
    ok = D <= ortho_tol * nu

    def defect_at(rows, th):
        w = unit_vectors(norm, th)
        return birkhoff_defect(norm, U[rows, 0], U[rows, 1], w[..., 0], w[..., 1])

    step = math.pi / n
    results: list[list[float]] = [[] for _ in range(k)]
    # isolated minima are refined together by golden section on the defect
    iso_rows, iso_lo, iso_d = [], [], []
    # cone edges are refined together by bisection on the predicate
    edge_rows, edge_in, edge_out, edge_tag = [], [], [], []
    for r in range(k):
        d = D[r]
        o = ok[r]
        if np.all(o):
            raise InternalError("every direction is orthogonal; evaluator is not a norm")
        runs = []
        start = int(np.flatnonzero(~o)[0])
        idx = [(start + i) % n for i in range(1, n + 1)]
        i = 0
        while i < n:
            j = idx[i]
            if o[j]:
                run = [j]
                while i + 1 < n and o[idx[i + 1]]:
                    i += 1
                    run.append(idx[i])
                runs.append(run)
            i += 1
        for run in runs:
            if len(run) >= 2:
                a, b = run[0], run[-1]
                # theta indices are cyclic with period pi; unwrap b after a
                ta = theta[a]
                tb = ta + step * (len(run) - 1)
                edge_rows += [r, r]
                edge_in += [ta, tb]
                edge_out += [ta - step, tb + step]
                edge_tag.append((r, len(edge_in) - 2))
            else:
                iso_rows.append(r)
                iso_lo.append(theta[run[0]] - step)
                iso_d.append(d[run[0]])
        left = np.roll(d, 1)
        right = np.roll(d, -1)
        cand = np.flatnonzero((d <= left) & (d <= right) & (d < COARSE_TOL) & ~o)
        for c in cand:
            iso_rows.append(r)
            iso_lo.append(theta[c] - step)
            iso_d.append(d[c])
    if iso_rows:
        rows = np.asarray(iso_rows)
        lo = np.asarray(iso_lo)
        th, val, _ = golden_min(lambda t: defect_at(rows, t), lo, lo + 2 * step, _ANGLE_TOL)
        # keep the grid point when refinement does not improve on it
        grid_wins = np.asarray(iso_d) <= val
        th = np.where(grid_wins, lo + step, th)
        val = np.where(grid_wins, iso_d, val)
        for r, t, dv in zip(rows, th, val):
            if dv <= ortho_tol * nu[r, 0]:
                results[r].append(float(t))
    if edge_rows:
        rows = np.asarray(edge_rows)
        a = np.asarray(edge_in)
        b = np.asarray(edge_out)
        nrow = nu[rows, 0]
        for _ in range(int(math.ceil(math.log2(step / _ANGLE_TOL)))):
            mid = 0.5 * (a + b)
            good = defect_at(rows, mid) <= _EDGE_TOL * nrow
            a = np.where(good, mid, a)
            b = np.where(good, b, mid)
        for r, i0 in edge_tag:
            results[r] += [float(a[i0]), float(0.5 * (a[i0] + a[i0 + 1])), float(a[i0 + 1])]
    return [sorted(np.mod(t, math.pi) for t in res) for res in results]


def companions_batch(norm: NormHandle, U, angle_grid_n: int = 720,
                     ortho_tol: float = ORTHO_TOL) -> list[list[np.ndarray]]:
    """Unit companions ``v`` with ``u ⊥_B v`` for each unit row ``u`` of ``U``.

    Only one of ``v, -v`` is listed.  Polygonal norms are handled exactly:
    an edge point is orthogonal to the edge direction only, a vertex to the
    closed cone between its two edge directions (endpoints and midpoint are
    returned).  Other norms are scanned on ``angle_grid_n`` directions and
    refined.
    """
    U = np.atleast_2d(np.asarray(U, float))
    U = U / norm(U)[:, None]
    if norm.polygon is not None:
        out = [_polygon_companions(norm, u) for u in U]
    else:
        out = [list(unit_vectors(norm, np.asarray(ts)))
               for ts in _scan_companions(norm, U, angle_grid_n, ortho_tol)]
    for u, vs in zip(U, out):
        if not vs:
            raise InternalError(f"no Birkhoff companion found for u={u}")
    return out


def orthogonal_companions(norm: NormHandle, u, angle_grid_n: int = 720,
                          ortho_tol: float = ORTHO_TOL) -> list[OrthoPair]:
    """All distinct (up to sign) unit ``v`` with ``u ⊥_B v``; see :func:`companions_batch`."""
    if angle_grid_n < 16:
        raise ArgumentError("angle_grid_n must be at least 16")
    u = as_array(u)
    if not np.any(u):
        raise ArgumentError("u must be nonzero")
    u = u / norm(u)
    pairs = []
    for v in companions_batch(norm, u[None, :], angle_grid_n, ortho_tol)[0]:
        if any(min(np.max(np.abs(v - np.asarray(p.v))), np.max(np.abs(v + np.asarray(p.v)))) <= 1e-9
               for p in pairs):
            continue
        _, defect = is_birkhoff(norm, u, v, ortho_tol)
        pairs.append(OrthoPair(to_vector(u), to_vector(v), max(defect, 0.0)))
    return pairs


def baronti_check(norm: NormHandle, u, v, ortho_tol: float = ORTHO_TOL) -> tuple[bool, float]:
    """Test whether ``u + v ⊥_B u - v`` for a unit orthogonal pair ``u ⊥_B v``.

    This implication holds for every orthogonal pair exactly when the norm
    comes from an inner product.
    """
    u = as_array(u)
    v = as_array(v)
    for name, w in (("u", u), ("v", v)):
        if abs(norm(w) - 1.0) > 1e-9:
            raise ArgumentError(f"{name} must be a unit vector, has norm {norm(w)!r}")
    holds, defect = is_birkhoff(norm, u, v, ortho_tol)
    if not holds:
        raise ArgumentError(f"u is not Birkhoff orthogonal to v (defect {defect:.3g})")
    return is_birkhoff(norm, u + v, u - v, ortho_tol)
