"""Brute-force reference values.

Everything here is a plain maximum or minimum over a uniform grid, built
directly on norm evaluation.  Nothing is shared with the search code in
:mod:`dwplane.dwengine` or :mod:`dwplane.birkhoff`, so agreement between the
two is meaningful evidence.  These routines are slow by design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .normspace import NormHandle

LAMBDA_BRACKET = (-8.0, 8.0)
# elements per vectorised block
_BLOCK = 1 << 22


@dataclass(frozen=True)
class OracleConfig:
    angle_n: int = 2000
    t_n: int = 500
    lambda_n: int = 10**6
    gamma_n: int = 10**6

    def __post_init__(self):
        for name in ("angle_n", "t_n", "lambda_n", "gamma_n"):
            if getattr(self, name) < 2:
                raise ArgumentError(f"{name} must be at least 2")


def _sphere(norm: NormHandle, n: int) -> np.ndarray:
    theta = 2 * math.pi * np.arange(n) / n
    d = np.column_stack([np.cos(theta), np.sin(theta)])
    return d / norm.evaluate(d[:, 0], d[:, 1])[:, None]


def _vec(x) -> np.ndarray:
    a = np.asarray(x, float)
    if a.shape != (2,):
        raise ArgumentError(f"expected a 2-vector, got shape {a.shape}")
    return a


def oracle_dw(norm: NormHandle, cfg: OracleConfig | None = None) -> float:
    """Max of ``(1+t) ||u-v|| / ||u-tv||`` over a uniform grid.

    ``u`` and ``v`` run over ``angle_n`` equally spaced directions projected to
    the unit sphere and ``t`` over ``k / (t_n + 1)``, ``k = 1..t_n``.
    """
    cfg = cfg or OracleConfig()
    S = _sphere(norm, cfg.angle_n)
    t = np.arange(1, cfg.t_n + 1) / (cfg.t_n + 1)
    v1 = S[None, :, 0, None]
    v2 = S[None, :, 1, None]
    tt = t[None, None, :]
    rows = max(1, _BLOCK // (cfg.angle_n * cfg.t_n))
    best = -math.inf
    for a in range(0, cfg.angle_n, rows):
        u1 = S[a:a + rows, 0, None, None]
        u2 = S[a:a + rows, 1, None, None]
        top = norm.evaluate(u1 - v1, u2 - v2)
        val = (1 + tt) * top / norm.evaluate(u1 - tt * v1, u2 - tt * v2)
        best = max(best, float(np.max(val)))
    return best


def oracle_line_min(norm: NormHandle, x, y, bracket=LAMBDA_BRACKET,
                    lambda_n: int = 10**6) -> float:
    """Min of ``||x + lam y||`` over ``lambda_n`` equally spaced ``lam`` in ``bracket``.

    For unit ``x`` and ``y`` the minimiser satisfies ``|lam| <= 2``, so the
    default bracket ``[-8, 8]`` is safe.
    """
    x = _vec(x)
    y = _vec(y)
    if not np.any(y):
        raise ArgumentError("direction y must be nonzero")
    lam = np.linspace(bracket[0], bracket[1], lambda_n)
    best = math.inf
    for a in range(0, lambda_n, _BLOCK):
        s = lam[a:a + _BLOCK]
        best = min(best, float(np.min(norm.evaluate(x[0] + s * y[0], x[1] + s * y[1]))))
    return best


def oracle_gamma_min(norm: NormHandle, u, v, gamma_upper: float = 0.5,
                     gamma_n: int = 10**6) -> float:
    """Min of ``||(1-g) u + g v||`` over ``gamma_n`` equally spaced ``g`` in ``[0, gamma_upper]``."""
    u = _vec(u)
    v = _vec(v)
    if not np.any(u + v):
        raise ArgumentError("u + v must be nonzero")
    g = np.linspace(0.0, gamma_upper, gamma_n)
    best = math.inf
    for a in range(0, gamma_n, _BLOCK):
        s = g[a:a + _BLOCK]
        best = min(best, float(np.min(norm.evaluate((1 - s) * u[0] + s * v[0],
                                                    (1 - s) * u[1] + s * v[1]))))
    return best


def oracle_dwb(norm: NormHandle, angle_n: int = 360, lambda_n: int = 801,
               gamma_n: int = 2001, ortho_tol: float = 1e-9) -> float:
    """Grid estimate of DW_B: max of ``||u+v|| / min_g ||(1-g) u + g v||``.

    Pairs ``(u, v)`` on an ``angle_n`` direction grid count as orthogonal when
    ``||u + lam v|| >= 1 - ortho_tol`` on a uniform ``lam`` grid over ``[-8, 8]``;
    ``g`` runs over ``gamma_n`` points of ``[0, 1]``.  Only meaningful when
    exact companions fall on the direction grid (e.g. polygons whose edge
    directions are grid directions).
    """
    S = _sphere(norm, angle_n)
    lam = np.linspace(LAMBDA_BRACKET[0], LAMBDA_BRACKET[1], lambda_n)
    g = np.linspace(0.0, 1.0, gamma_n)
    best = -math.inf
    for u in S:
        m = np.min(norm.evaluate(u[0] + lam[None, :] * S[:, 0, None],
                                 u[1] + lam[None, :] * S[:, 1, None]), axis=1)
        V = S[m >= 1 - ortho_tol]
        V = V[norm.evaluate(u[0] + V[:, 0], u[1] + V[:, 1]) > 1e-9]
        if len(V) == 0:
            continue
        den = np.min(norm.evaluate((1 - g)[None, :] * u[0] + g[None, :] * V[:, 0, None],
                                   (1 - g)[None, :] * u[1] + g[None, :] * V[:, 1, None]), axis=1)
        best = max(best, float(np.max(norm.evaluate(u[0] + V[:, 0], u[1] + V[:, 1]) / den)))
    return best
