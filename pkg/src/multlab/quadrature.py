"""Batched adaptive Gauss-Legendre quadrature.

The engine integrates a vectorized complex integrand over a union of panels,
estimating per-panel error as the difference between a 12-point and a 24-point
Gauss rule and bisecting panels whose share of the error budget is exceeded.
Panels are processed as one numpy batch per refinement generation, so the
integrand is only ever called on large node arrays.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import QuadratureError

_NODES_LO, _WEIGHTS_LO = leggauss(12)
_NODES_HI, _WEIGHTS_HI = leggauss(24)

Integrand = Callable[[np.ndarray], np.ndarray]


def _panel_batch(f: Integrand, a: np.ndarray, b: np.ndarray,
                 nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    mid = 0.5 * (a + b)[:, None]
    half = 0.5 * (b - a)[:, None]
    x = mid + half * nodes[None, :]
    values = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    return (values * weights[None, :]).sum(axis=1) * half[:, 0]


def integrate_panels(f: Integrand, edges, tol: float = 1e-10,
                     max_depth: int = 52, max_panels: int = 500_000):
    """Integrate ``f`` over the union of [edges[i], edges[i+1]].

    Returns ``(value, error_estimate, converged)``.  The integrand must accept
    a 1-d float array and return values of matching shape (complex allowed).
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise ValueError("need at least two panel edges")
    a = edges[:-1].copy()
    b = edges[1:].copy()
    span = float(np.abs(b - a).sum())
    total = 0.0 + 0.0j
    err = 0.0
    seen = a.size
    for depth in range(max_depth + 1):
        if a.size == 0:
            return total, err, True
        coarse = _panel_batch(f, a, b, _NODES_LO, _WEIGHTS_LO)
        fine = _panel_batch(f, a, b, _NODES_HI, _WEIGHTS_HI)
        local = np.abs(fine - coarse)
        share = np.abs(b - a) / span if span > 0 else np.ones_like(a)
        accept = local <= np.maximum(tol * share, 1e-18)
        accept |= local <= 5e-16 * np.abs(fine)
        if depth == max_depth or seen > max_panels:
            total += fine.sum()
            err += local.sum()
            return total, err, bool(accept.all())
        total += fine[accept].sum()
        err += local[accept].sum()
        a, b = a[~accept], b[~accept]
        mid = 0.5 * (a + b)
        a = np.concatenate([a, mid])
        b = np.concatenate([mid, b])
        seen += a.size
    return total, err, False


def integrate_interval(f: Integrand, a: float, b: float, tol: float = 1e-10,
                       initial_panels: int = 8):
    """Adaptive integral over a single interval [a, b]."""
    return integrate_panels(f, np.linspace(a, b, initial_panels + 1), tol=tol)


def geometric_edges(lo: float, hi: float, per_decade: int = 8) -> np.ndarray:
    """Log-spaced panel edges suited to integrands living on many scales."""
    if not (0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    count = max(2, int(np.ceil(np.log10(hi / lo) * per_decade)) + 1)
    return np.geomspace(lo, hi, count)


def graded_edges_toward(point: float, lo: float, hi: float,
                        levels: int = 40) -> np.ndarray:
    """Edges on [lo, hi] geometrically refined toward an interior point.

    Used to resolve an integrable kink whose exact location is known.
    """
    width = hi - lo
    extra = []
    for sign in (-1.0, 1.0):
        for k in range(1, levels + 1):
            candidate = point + sign * width * 2.0 ** (-k)
            if lo < candidate < hi:
                extra.append(candidate)
    return np.array(sorted({lo, hi, *extra} | ({point} if lo < point < hi else set())))


def annulus_principal_value(f: Integrand, eps: float, tol: float = 1e-9,
                            strict: bool = True):
    """Symmetric integral of ``f`` over eps < |u| < 1/eps.

    The positive and negative half-axes are paired pointwise (u, -u), which is
    the cancellation a principal value encodes; panel edges are log-spaced so
    the slowly-varying-in-log integrands typical of homogeneous kernels
    resolve quickly.  Returns the complex value; raises
    :class:`QuadratureError` if ``strict`` and the tolerance was not met.
    """
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")

    def paired(u: np.ndarray) -> np.ndarray:
        return np.asarray(f(u), dtype=complex) + np.asarray(f(-u), dtype=complex)

    value, err, converged = integrate_panels(paired, geometric_edges(eps, 1.0 / eps), tol=tol)
    if strict and not converged:
        raise QuadratureError("principal-value integral did not converge", achieved=err)
    return value, err
