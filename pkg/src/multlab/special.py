"""Scalar analytic machinery.

Complex log-Gamma, the conformal map between the unit strip and the disk, the
Poisson harmonic majorant of |y|^s on the right half-plane, the two majorant
constants at the point 1, a two-branch extremal problem, Schwarz-Pick extremal
disk maps, and the power conformal map onto a sector.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, InfeasibleError, PoleError, QuadratureError
from .quadrature import graded_edges_toward, integrate_panels

__all__ = [
    "StripParameter", "MajorantParameter", "HalfPlanePoint",
    "log_gamma", "abs_gamma", "strip_to_disk", "disk_to_strip",
    "derivative_at_center", "poisson_majorant", "majorant_constants",
    "extremal_infimum", "schwarz_pick_extremal", "SchwarzPickMap",
    "sector_map",
]


@dataclass(frozen=True)
class StripParameter:
    """Interior abscissa theta of the unit strip, 0 < theta < 1 strictly."""

    theta: float

    def __post_init__(self):
        if not (0.0 < self.theta < 1.0):
            raise DomainError(f"theta must lie strictly inside (0, 1), got {self.theta}")


@dataclass(frozen=True)
class MajorantParameter:
    """Growth exponent s of the majorant, 0 < s < 1 strictly."""

    s: float

    def __post_init__(self):
        if not (0.0 < self.s < 1.0):
            raise DomainError(f"s must lie strictly inside (0, 1), got {self.s}")


@dataclass(frozen=True)
class HalfPlanePoint:
    """Point alpha + i*t of the closed right half-plane."""

    alpha: float
    t: float

    def __post_init__(self):
        if self.alpha < 0.0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")

    @property
    def value(self) -> complex:
        return complex(self.alpha, self.t)


def _theta_of(theta: Union[float, StripParameter]) -> float:
    if isinstance(theta, StripParameter):
        return theta.theta
    return StripParameter(float(theta)).theta


def _s_of(s: Union[float, MajorantParameter]) -> float:
    if isinstance(s, MajorantParameter):
        return s.s
    return MajorantParameter(float(s)).s


# ---------------------------------------------------------------------------
# log Gamma (Lanczos, g = 607/128, 15 terms)
# ---------------------------------------------------------------------------

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEFFS = (
    0.99999999999999709182,
    57.156235665862923517, -59.597960355475491248, 14.136097974741747174,
    -0.49191381609762019978, 0.33994649984811888699e-4,
    0.46523628927048575665e-4, -0.98374475304879564677e-4,
    0.15808870322491248884e-3, -0.21026444172410488319e-3,
    0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4, -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma.

    Direct Lanczos evaluation for Re z >= 1/2; elsewhere the recurrence
    log Gamma(z) = log Gamma(z + k) - sum log(z + j), which continues the
    principal branch across the left half-plane (all arguments stay off the
    cut for Im z != 0).  Relative accuracy of exp(log_gamma) is ~1e-13 for
    |z| <= 50.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real):
        raise PoleError(f"Gamma pole at z = {z.real:g}")
    if z.real >= 0.5:
        zz = z - 1.0
        series = _LANCZOS_COEFFS[0]
        for k in range(1, len(_LANCZOS_COEFFS)):
            series += _LANCZOS_COEFFS[k] / (zz + k)
        t = zz + _LANCZOS_G + 0.5
        return _HALF_LOG_TWO_PI + (zz + 0.5) * cmath.log(t) - t + cmath.log(series)
    shift = int(math.ceil(0.5 - z.real))
    acc = 0.0 + 0.0j
    for j in range(shift):
        acc += cmath.log(z + j)
    return log_gamma(z + shift) - acc


def abs_gamma(z: complex) -> float:
    """|Gamma(z)| via the principal log."""
    return math.exp(log_gamma(z).real)


# ---------------------------------------------------------------------------
# Strip <-> disk conformal map
# ---------------------------------------------------------------------------

def _cayley(z: complex) -> complex:
    e = cmath.exp(1j * math.pi * z)
    return (e - 1j) / (e + 1j)


def strip_to_disk(theta: Union[float, StripParameter], z: complex) -> complex:
    """Conformal map of the closed strip 0 <= Re z <= 1 onto the closed disk.

    Normalized so the interior point theta goes to 0; the strip boundary maps
    onto the unit circle.
    """
    th = _theta_of(theta)
    z = complex(z)
    if not (-1e-12 <= z.real <= 1.0 + 1e-12):
        raise DomainError(f"Re z = {z.real:g} outside the strip [0, 1]")
    alpha = _cayley(th)
    w = _cayley(z)
    return (w - alpha) / (1.0 - alpha.conjugate() * w)


def disk_to_strip(theta: Union[float, StripParameter], w: complex) -> complex:
    """Inverse of :func:`strip_to_disk` on the open disk."""
    th = _theta_of(theta)
    w = complex(w)
    if abs(w) > 1.0 + 1e-12:
        raise DomainError(f"|w| = {abs(w):g} outside the closed unit disk")
    alpha = _cayley(th)
    # e^{i pi z} expressed in one fraction of w to avoid a lossy intermediate
    ac = alpha.conjugate()
    target = 1j * ((1.0 + alpha) + w * (1.0 + ac)) / ((1.0 - alpha) - w * (1.0 - ac))
    return cmath.log(target) / (1j * math.pi)


def derivative_at_center(theta: Union[float, StripParameter]) -> tuple[float, float]:
    """(|phi'(theta)|, |phi^{-1}'(0)|) for the normalized strip-to-disk map.

    The first factor is pi / (2 sin(pi theta)), the second its reciprocal.
    """
    th = _theta_of(theta)
    forward = math.pi / (2.0 * math.sin(math.pi * th))
    return forward, 1.0 / forward


# ---------------------------------------------------------------------------
# Poisson majorant of |y|^s on the right half-plane
# ---------------------------------------------------------------------------

def _binom_real(s: float, j: int) -> float:
    out = 1.0
    for i in range(j):
        out *= (s - i) / (i + 1)
    return out


def _majorant_tail(s: float, x: float, y: float, big: float, terms: int = 60) -> float:
    """(1/pi) * int_{|t| > big} x/(x^2+t^2) |y+t|^s dt by double binomial series.

    Requires big >= 2*max(x, |y|); both expansion ratios are then <= 1/2 and
    the truncation error is far below 1e-15 of the leading term.
    """
    total = 0.0
    for i in range(terms):
        ci = (-1.0) ** i * x ** (2 * i + 1)
        if ci == 0.0:
            break
        inner = 0.0
        for j in range(0, terms, 2):
            cj = 2.0 * _binom_real(s, j) * y ** j
            expo = s - 2.0 - 2.0 * i - j
            inner += cj * big ** (expo + 1.0) / (-(expo + 1.0))
        total += ci * inner
    return total / math.pi


def poisson_majorant(s: Union[float, MajorantParameter], x: float, y: float,
                     tol: float = 1e-12) -> float:
    """Harmonic extension of |y|^s to the right half-plane x > 0.

    psi_s(x, y) = (1/pi) * int x/(x^2 + t^2) |y + t|^s dt, computed on a
    finite window with panels graded into the kink at t = -y plus an analytic
    series for the algebraic tails.  Dominates |y|^s for every x > 0 and tends
    to |y|^s as x -> 0+.
    """
    sv = _s_of(s)
    x = float(x)
    y = float(y)
    if x <= 0.0:
        raise DomainError(f"poisson_majorant requires x > 0, got {x}")
    big = 8.0 * max(x, abs(y), 1.0)

    def integrand(t: np.ndarray) -> np.ndarray:
        return x / (x * x + t * t) * np.abs(y + t) ** sv

    edges = graded_edges_toward(-y, -big, big)
    # the integrand also has a scale change near t = 0 when |y| is small
    if abs(y) > 1e-13:
        edges = np.array(sorted(set(edges) | {0.0}))
    value, err, converged = integrate_panels(integrand, edges, tol=tol)
    if not converged:
        raise QuadratureError("poisson majorant quadrature stalled", achieved=err)
    return value.real / math.pi + _majorant_tail(sv, x, y, big)


def _psi_at_one_zero(s: float, tol: float = 1e-12) -> float:
    """(2/pi) int_0^inf t^s / (1 + t^2) dt with an analytic tail."""
    big = 8.0

    def integrand(t: np.ndarray) -> np.ndarray:
        return t ** s / (1.0 + t * t)

    value, err, converged = integrate_panels(
        integrand, graded_edges_toward(0.0, 0.0, big), tol=tol)
    if not converged:
        raise QuadratureError("majorant-constant quadrature stalled", achieved=err)
    tail = 0.0
    for i in range(60):
        expo = s - 2.0 - 2.0 * i
        tail += (-1.0) ** i * big ** (expo + 1.0) / (-(expo + 1.0))
    return (2.0 / math.pi) * (value.real + tail)


def _conjugate_derivative_at_one(s: float, tol: float = 1e-12) -> float:
    """|d/dz of the analytic completion of the majorant at z = 1|.

    Equals (1/pi) |int_0^inf (u^{s/2+1/2} - u^{s/2-1/2}) / (1+u)^2 du|.  The
    half-line is folded onto (0, 1] by u -> 1/u; each endpoint-singular
    monomial integral over (0, delta] is summed analytically.
    """
    a = 0.5 * s + 0.5
    delta = 0.5
    series = 0.0
    for beta, sign in ((a, 1.0), (a - 1.0, -1.0), (-a, 1.0), (1.0 - a, -1.0)):
        acc = 0.0
        for k in range(80):
            acc += (k + 1) * (-1.0) ** k * delta ** (k + 1 + beta) / (k + 1 + beta)
        series += sign * acc

    def integrand(u: np.ndarray) -> np.ndarray:
        return (u ** a - u ** (a - 1.0) + u ** (-a) - u ** (1.0 - a)) / (1.0 + u) ** 2

    value, err, converged = integrate_panels(integrand, np.linspace(delta, 1.0, 9), tol=tol)
    if not converged:
        raise QuadratureError("conjugate-derivative quadrature stalled", achieved=err)
    return abs(series + value.real) / math.pi


def majorant_constants(s: Union[float, MajorantParameter]) -> tuple[float, float]:
    """(psi_s(1, 0), |Phi_s'(1)|): the majorant and the modulus of the
    derivative of its analytic completion, both at the point 1.

    Both blow up like 1/(1-s) as s -> 1-.
    """
    sv = _s_of(s)
    return _psi_at_one_zero(sv), _conjugate_derivative_at_one(sv)


# ---------------------------------------------------------------------------
# Two-branch extremal problem
# ---------------------------------------------------------------------------

def extremal_infimum(M: float) -> tuple[float, float]:
    """inf over real a of |1 + a| + sqrt((1 + a)^2 + M a^2), with its argmin.

    The infimum is sqrt(M) at a = -1 for M <= 1 and 2M/(M+1) at
    a = -2/(M+1) for M > 1; both branches agree at M = 1. Ties at M = 1
    report the a = -1 witness.
    """
    M = float(M)
    if M < 0.0:
        raise DomainError(f"M must be >= 0, got {M}")
    if M <= 1.0:
        return math.sqrt(M), -1.0
    return 2.0 * M / (M + 1.0), -2.0 / (M + 1.0)


# ---------------------------------------------------------------------------
# Schwarz-Pick extremal maps
# ---------------------------------------------------------------------------

class SchwarzPickMap:
    """Disk self-map with prescribed value u and derivative v at 0.

    For |u|^2 + |v| = 1 this is the rotated Moebius extremal (unimodular on
    the boundary circle); strictly feasible data is realized by scaling the
    boundary extremal of the tight pair (lam*u, lam*v).
    """

    def __init__(self, u: complex, v: complex):
        u = complex(u)
        v = complex(v)
        slack = abs(u) ** 2 + abs(v) - 1.0
        if slack > 1e-12:
            raise InfeasibleError(
                f"|u|^2 + |v| = {abs(u) ** 2 + abs(v):.6f} exceeds 1; no disk map exists")
        self.u = u
        self.v = v
        if u == 0 and v == 0:
            self._scale = 1.0
        elif abs(u) == 0.0:
            self._scale = 1.0 / abs(v)
        else:
            uu, vv = abs(u) ** 2, abs(v)
            self._scale = (-vv + math.sqrt(vv * vv + 4.0 * uu)) / (2.0 * uu)
        self._u0 = self._scale * u
        self._v0 = self._scale * v
        self.boundary = slack >= -1e-12

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        if self._v0 == 0:
            out = np.full(zeta.shape, self._u0 / self._scale, dtype=complex)
            return out if out.ndim else complex(out)
        sigma = self._v0 / abs(self._v0)
        out = (sigma * zeta + self._u0) / (1.0 + self._u0.conjugate() * sigma * zeta)
        out = out / self._scale
        return out if out.ndim else complex(out)


def schwarz_pick_extremal(u: complex, v: complex) -> SchwarzPickMap:
    """Evaluator zeta -> Psi(zeta) with sup|Psi| <= 1, Psi(0) = u, Psi'(0) = v."""
    return SchwarzPickMap(u, v)


# ---------------------------------------------------------------------------
# Sector map
# ---------------------------------------------------------------------------

def sector_map(s: float, z: complex) -> complex:
    """Principal-branch power z^s mapping the right half-plane into a sector.

    |z^s| = |z|^s and arg(z^s) = s * arg(z) with the argument in (-pi, pi].
    """
    s = float(s)
    if not (0.0 < s < 1.0):
        raise DomainError(f"sector exponent must lie in (0, 1), got {s}")
    z = complex(z)
    if z == 0:
        return 0.0 + 0.0j
    return cmath.exp(s * (math.log(abs(z)) + 1j * cmath.phase(z)))
