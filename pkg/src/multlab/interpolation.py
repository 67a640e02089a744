"""Closed-form interpolation norms for the scalar couple (C, lam*C).

Pair norms with prescribed value/derivative data, the four derivative-space
norms h, H, h2, H2, their theta -> 0 limits, the log-perturbed Lebesgue
functional, and the weighted-couple norms obtained by applying h or H to a
pointwise weight ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ZeroFunctionError
from .grids import GridFunction, lp_norm

__all__ = [
    "CoupleParams", "PairValue", "WeightedCouple",
    "pair_norm", "schechter_norm", "endpoint_limits",
    "schechter_lp_functional", "weighted_couple_norm",
    "h_lower", "H_upper", "h2_lower", "H2_upper", "inverse_map_derivative",
]


@dataclass(frozen=True)
class CoupleParams:
    """Strip abscissa theta and couple scale lam of (C, lam*C)."""

    theta: float
    lam: float

    def __post_init__(self):
        if not (0.0 < self.theta < 1.0):
            raise DomainError(f"theta must lie strictly inside (0, 1), got {self.theta}")
        if not self.lam > 0.0:
            raise DomainError(f"lam must be positive, got {self.lam}")


@dataclass(frozen=True)
class PairValue:
    """Prescribed value u and (rescaled) derivative v at the base point."""

    u: complex
    v: complex


@dataclass(frozen=True)
class WeightedCouple:
    """Exponent p and the two weights of (L^p(w0), L^p(w1)) on a common grid."""

    p: float
    w0: np.ndarray
    w1: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w0", np.asarray(self.w0, dtype=float))
        object.__setattr__(self, "w1", np.asarray(self.w1, dtype=float))
        if self.p < 1.0:
            raise DomainError(f"p must be >= 1, got {self.p}")
        if self.w0.shape != self.w1.shape:
            raise DomainError("w0 and w1 must share a grid")
        if np.any(self.w0 < 0.0):
            raise DomainError("w0 must be nonnegative")
        if np.any(self.w1 <= 0.0):
            raise DomainError("w1 must be strictly positive on the grid")


def inverse_map_derivative(theta: float) -> float:
    """|phi^{-1}'(0)| = 2 sin(pi theta) / pi for the normalized strip map."""
    return 2.0 * math.sin(math.pi * theta) / math.pi


def _lam_power(lam, theta):
    return np.exp(theta * np.log(lam))


def pair_norm(pv: PairValue | tuple, cp: CoupleParams, flavor: str = "sup") -> float:
    """Minimal boundary norm of analytic data (value u, derivative v).

    sup flavor:  lam^theta * (|w| + sqrt(|w|^2 + 4|u|^2)) / 2
    quadratic:   lam^theta * sqrt(|u|^2 + |w|^2)
    with w = v + log(lam) * (2 sin(pi theta)/pi) * u.
    """
    if isinstance(pv, tuple):
        pv = PairValue(*pv)
    u = complex(pv.u)
    w = complex(pv.v) + math.log(cp.lam) * inverse_map_derivative(cp.theta) * u
    scale = _lam_power(cp.lam, cp.theta)
    if flavor == "sup":
        return scale * 0.5 * (abs(w) + math.hypot(abs(w), 2.0 * abs(u)))
    if flavor == "quadratic":
        return scale * math.hypot(abs(u), abs(w))
    raise ValueError(f"unknown pair-norm flavor {flavor!r}")


# ---------------------------------------------------------------------------
# Scalar closed forms (vectorized over lam so weighted couples can reuse them)
# ---------------------------------------------------------------------------

def h_lower(lam, theta: float):
    """Norm scale of the derivative space below the couple, two branches.

    lam^theta / |log lam|                                        if |log lam| >= pi/sin(pi theta)
    lam^theta * 2 pi sin(pi theta) / (pi^2 + log^2 lam sin^2)    otherwise.
    Continuous across the branch boundary; extended by 0 at lam = 0.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0.0):
        raise DomainError("lam must be nonnegative")
    sin_t = math.sin(math.pi * theta)
    out = np.zeros(lam.shape)
    pos = lam > 0.0
    with np.errstate(divide="ignore"):
        ll = np.where(pos, np.abs(np.log(np.where(pos, lam, 1.0))), np.inf)
        power = np.where(pos, _lam_power(np.where(pos, lam, 1.0), theta), 0.0)
    far = pos & (ll >= math.pi / sin_t)
    near = pos & ~far
    out[far] = power[far] / ll[far]
    out[near] = power[near] * 2.0 * math.pi * sin_t / (math.pi ** 2 + ll[near] ** 2 * sin_t ** 2)
    return out if out.ndim else float(out)


def H_upper(lam, theta: float, printed_lambda: bool = False):
    """Norm scale of the derivative space above the couple.

    lam^theta * (sin(pi theta)/pi) * (|log lam| + sqrt(pi^2/sin^2 + log^2 lam)).
    ``printed_lambda=True`` swaps the lam^theta prefactor for a plain lam,
    the variant reading kept for comparison; the default is the one with
    H(lam, theta) -> 1 as theta -> 0.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0.0):
        raise DomainError("lam must be nonnegative")
    sin_t = math.sin(math.pi * theta)
    out = np.zeros(lam.shape)
    pos = lam > 0.0
    safe = np.where(pos, lam, 1.0)
    ll = np.abs(np.log(safe))
    prefactor = safe if printed_lambda else _lam_power(safe, theta)
    vals = prefactor * (sin_t / math.pi) * (ll + np.hypot(math.pi / sin_t, ll))
    out[pos] = vals[pos]
    return out if out.ndim else float(out)


def h2_lower(lam, theta: float):
    """Quadratic-flavor lower norm scale."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0.0):
        raise DomainError("lam must be nonnegative")
    c = inverse_map_derivative(theta)
    out = np.zeros(lam.shape)
    pos = lam > 0.0
    safe = np.where(pos, lam, 1.0)
    vals = _lam_power(safe, theta) * c / np.sqrt(1.0 + (c * np.log(safe)) ** 2)
    out[pos] = vals[pos]
    return out if out.ndim else float(out)


def H2_upper(lam, theta: float):
    """Quadratic-flavor upper norm scale."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0.0):
        raise DomainError("lam must be nonnegative")
    c = inverse_map_derivative(theta)
    out = np.zeros(lam.shape)
    pos = lam > 0.0
    safe = np.where(pos, lam, 1.0)
    vals = _lam_power(safe, theta) * np.sqrt(1.0 + (c * np.log(safe)) ** 2)
    out[pos] = vals[pos]
    return out if out.ndim else float(out)


_KINDS = {
    "lower_h": lambda lam, th: h_lower(lam, th),
    "upper_H": lambda lam, th: H_upper(lam, th),
    "lower_h2": lambda lam, th: h2_lower(lam, th),
    "upper_H2": lambda lam, th: H2_upper(lam, th),
}


def schechter_norm(cp: CoupleParams, kind: str, printed_lambda: bool = False) -> float:
    """Exact closed form of the chosen derivative-space norm scale."""
    if kind == "upper_H":
        return float(H_upper(cp.lam, cp.theta, printed_lambda=printed_lambda))
    if printed_lambda:
        raise ValueError("printed_lambda applies to upper_H only")
    try:
        fn = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown norm kind {kind!r}") from None
    return float(fn(cp.lam, cp.theta))


def endpoint_limits(lam: float) -> tuple[float, float, float, float]:
    """(lim h/theta, lim H, lim h2/theta, lim H2) as theta -> 0+.

    Evaluated at theta in {1e-2, 1e-3, 1e-4} with linear-in-theta Richardson
    extrapolation from the two smallest abscissae; equals (2, 1, 2, 1) for
    every lam > 0.
    """
    if lam <= 0.0:
        raise DomainError(f"lam must be positive, got {lam}")
    thetas = (1e-2, 1e-3, 1e-4)
    rows = []
    for th in thetas:
        rows.append((
            float(h_lower(lam, th)) / th,
            float(H_upper(lam, th)),
            float(h2_lower(lam, th)) / th,
            float(H2_upper(lam, th)),
        ))
    t1, t2 = thetas[-2], thetas[-1]
    out = []
    for i in range(4):
        v1, v2 = rows[-2][i], rows[-1][i]
        out.append((v2 * t1 - v1 * t2) / (t1 - t2))
    return tuple(out)


# ---------------------------------------------------------------------------
# Log-perturbed Lebesgue functional and weighted couples
# ---------------------------------------------------------------------------

def _p_of_theta(theta: float, p0: float, p1: float) -> float:
    inv = 0.0
    if not math.isinf(p0):
        inv += (1.0 - theta) / p0
    if not math.isinf(p1):
        inv += theta / p1
    return math.inf if inv == 0.0 else 1.0 / inv


def schechter_lp_functional(f: GridFunction, theta: float, p0: float, p1: float) -> float:
    """||f||_{p(theta)} + coeff * || f log(|f| / ||f||_{p(theta)}) ||_{p(theta)}.

    1/p(theta) interpolates 1/p0 and 1/p1; the coefficient is
    theta |p1 - p0| / ((1-theta) p1 + theta p0) for finite p1 and
    theta/(1-theta) when p1 = inf (its p0 -> inf limit, 1, when p0 = inf).
    Zero samples contribute zero to the log term.
    """
    if not (0.0 < theta < 1.0):
        raise DomainError(f"theta must lie strictly inside (0, 1), got {theta}")
    if p0 < 1.0 or p1 < 1.0:
        raise DomainError("exponents must be >= 1")
    if math.isinf(p0) and math.isinf(p1):
        raise DomainError("at most one of p0, p1 may be infinite")
    samples = f.samples
    if not np.any(samples != 0):
        raise ZeroFunctionError("functional undefined for the zero function")
    p_theta = _p_of_theta(theta, p0, p1)
    if math.isinf(p1):
        coeff = theta / (1.0 - theta)
    elif math.isinf(p0):
        coeff = 1.0
    else:
        coeff = theta * abs(p1 - p0) / ((1.0 - theta) * p1 + theta * p0)
    base = lp_norm(f, p_theta)
    mags = np.abs(samples)
    log_term = np.zeros_like(samples)
    nz = mags > 0.0
    log_term[nz] = samples[nz] * np.log(mags[nz] / base)
    log_part = lp_norm(GridFunction(samples=log_term, spacing=f.spacing), p_theta)
    return base + coeff * log_part


def weighted_couple_norm(f: GridFunction, wc: WeightedCouple, theta: float,
                         kind: str) -> float:
    """L^p norm of f against w0 * h(lam(x), theta)^p or w0 * H(lam(x), theta)^p.

    lam(x) = (w1/w0)^{1/p} pointwise, set to 0 where w0 vanishes (the weight
    vanishes there regardless).
    """
    if kind not in ("delta_prime_lower", "delta_prime_upper"):
        raise ValueError(f"unknown weighted-couple kind {kind!r}")
    if not (0.0 < theta < 1.0):
        raise DomainError(f"theta must lie strictly inside (0, 1), got {theta}")
    if wc.w0.shape != f.samples.shape:
        raise DomainError("weights and function must share a grid")
    lam = np.zeros_like(wc.w0)
    pos = wc.w0 > 0.0
    lam[pos] = (wc.w1[pos] / wc.w0[pos]) ** (1.0 / wc.p)
    scale = h_lower(lam, theta) if kind == "delta_prime_lower" else H_upper(lam, theta)
    weight = np.where(pos, wc.w0 * scale ** wc.p, 0.0)
    return lp_norm(f, wc.p, weight)
