"""Small deterministic optimization helpers."""

from __future__ import annotations

from typing import Callable

_INV_PHI = 0.6180339887498949


def golden_section_minimize(f: Callable[[float], float], lo: float, hi: float,
                            iterations: int = 220) -> tuple[float, float]:
    """Golden-section search for the minimum of a unimodal function on [lo, hi].

    Returns ``(argmin, value)``.  With the default iteration count the bracket
    shrinks below 1e-40 of its initial width, so for convex objectives the
    value converges to full double precision even at kink minima.
    """
    a, b = float(lo), float(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        if b - a <= 1e-300:
            break
    x = 0.5 * (a + b)
    return x, f(x)
