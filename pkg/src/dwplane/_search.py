"""Vectorised golden-section search.

Every routine works elementwise on arrays of brackets so that many
independent one-dimensional problems advance in lock-step, one objective
call per iteration.
"""

from __future__ import annotations

import math

import numpy as np

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _iterations(width: float, tol: float) -> int:
    if width <= tol:
        return 0
    return int(math.ceil(math.log(width / tol) / math.log(1.0 / INVPHI)))


def golden_max(f, lo, hi, tol: float, endpoints: bool = True):
    """Maximise a unimodal ``f`` on each ``[lo, hi]``.

    ``f`` takes an array of abscissae shaped like the broadcast of ``lo`` and
    ``hi`` and returns values of the same shape.  Returns ``(x, fx, n)`` where
    ``n`` is the number of golden iterations performed.  With ``endpoints`` the
    bracket ends are scored too, so maxima sitting on the boundary are
    reported exactly rather than ``tol`` inside it.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
    a = lo.copy()
    b = hi.copy()
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    n = _iterations(float(np.max(b - a)) if a.size else 0.0, tol)
    for _ in range(n):
        left = fc >= fd
        # left: maximum in [a, d]; new interior point c' = b' - r (b' - a)
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_d = np.where(left, c, a + INVPHI * (b - a))
        new_c = np.where(left, b - INVPHI * (b - a), d)
        x = np.where(left, new_c, new_d)
        fx = f(x)
        fc, fd = np.where(left, fx, fd), np.where(left, fc, fx)
        c, d = new_c, new_d
    best_x = np.where(fc >= fd, c, d)
    best_f = np.maximum(fc, fd)
    if endpoints:
        for edge in (lo, hi):
            fe = f(edge)
            better = fe > best_f
            best_x = np.where(better, edge, best_x)
            best_f = np.where(better, fe, best_f)
    return best_x, best_f, n


def golden_min(f, lo, hi, tol: float, endpoints: bool = True):
    """Minimise a unimodal ``f``; same conventions as :func:`golden_max`."""
    x, fx, n = golden_max(lambda z: -f(z), lo, hi, tol, endpoints)
    return x, -fx, n


def golden_max_scalar(f, lo: float, hi: float, tol: float, endpoints: bool = True):
    x, fx, n = golden_max(lambda z: np.asarray(f(float(z)), float),
                          np.float64(lo), np.float64(hi), tol, endpoints)
    return float(x), float(fx), n
