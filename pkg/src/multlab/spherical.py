"""Zonal spherical-harmonic machinery on S^1 and S^3.

Transform coefficients of homogeneous kernels, sphere Sobolev norms,
Laplace-Beltrami powers, the kernel-vs-symbol norm ratio, quadrature-exact
zonal evaluation/projection, and the growth in t of the Laplacian of
oscillated symbols e^{itm}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import jv, roots_jacobi

from .errors import AliasingError, CancellationError, DomainError
from .quadrature import geometric_edges, integrate_panels

__all__ = [
    "ZonalExpansion", "LatitudeGrid",
    "gamma_coefficient", "gamma_coefficient_oracle",
    "symbol_from_omega", "sphere_sobolev_norm", "laplace_power", "omom_ratio",
    "evaluate_zonal", "project_zonal",
    "unimodular_sphere_growth", "SphereGrowthResult", "leibniz_residual",
]

_SPHERE_MEASURE = {2: 2.0 * math.pi, 4: 2.0 * math.pi ** 2}


@dataclass(frozen=True)
class ZonalExpansion:
    """Zonal harmonic coefficients indexed by degree j = 0..J.

    ``n`` is the ambient dimension (2 for the circle, 4 for zonal S^3); the
    cancellation flag asserts a vanishing mean, i.e. coeffs[0] = 0.
    """

    n: int
    coeffs: np.ndarray
    cancellation: bool = False

    def __post_init__(self):
        if self.n not in (2, 4):
            raise DomainError(f"ambient dimension must be 2 or 4, got {self.n}")
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise DomainError("coefficients must form a nonempty 1-d array")
        if not np.all(np.isfinite(coeffs.view(float))):
            raise DomainError("coefficients must be finite")
        if self.cancellation and coeffs[0] != 0:
            raise CancellationError("cancellation flag set but the j=0 coefficient is nonzero")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1


@dataclass(frozen=True)
class LatitudeGrid:
    """Quadrature nodes and weights along the zonal angle.

    S^1 uses the uniform full circle (weights summing to 2*pi); zonal S^3
    uses Gauss-Jacobi nodes for the sin^2 density (weights summing to
    2*pi^2, the full measure of S^3).
    """

    n: int
    angles: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise DomainError("quadrature weights must be positive")
        total = float(self.weights.sum())
        if abs(total - _SPHERE_MEASURE[self.n]) > 1e-8 * _SPHERE_MEASURE[self.n]:
            raise DomainError("weights must sum to the sphere measure")

    @classmethod
    def circle(cls, count: int) -> "LatitudeGrid":
        angles = 2.0 * math.pi * np.arange(count) / count
        weights = np.full(count, 2.0 * math.pi / count)
        return cls(n=2, angles=angles, weights=weights)

    @classmethod
    def zonal_s3(cls, count: int) -> "LatitudeGrid":
        nodes, wq = roots_jacobi(count, 0.5, 0.5)
        order = np.argsort(np.arccos(nodes))
        angles = np.arccos(nodes)[order]
        weights = 4.0 * math.pi * wq[order]
        return cls(n=4, angles=angles, weights=weights)

    @property
    def count(self) -> int:
        return self.angles.size


def _basis_matrix(grid: LatitudeGrid, J: int) -> np.ndarray:
    j = np.arange(J + 1)
    if grid.n == 2:
        return np.exp(1j * np.outer(grid.angles, j)) / math.sqrt(2.0 * math.pi)
    st = np.sin(grid.angles)[:, None]
    return np.sin(np.outer(grid.angles, j + 1)) / st / math.sqrt(2.0 * math.pi ** 2)


def _basis_dtheta(grid: LatitudeGrid, J: int) -> np.ndarray:
    j = np.arange(J + 1)
    if grid.n == 2:
        return (1j * j)[None, :] * np.exp(1j * np.outer(grid.angles, j)) / math.sqrt(2.0 * math.pi)
    st = np.sin(grid.angles)[:, None]
    ct = np.cos(grid.angles)[:, None]
    num = (j + 1) * np.cos(np.outer(grid.angles, j + 1)) * st \
        - np.sin(np.outer(grid.angles, j + 1)) * ct
    return num / st ** 2 / math.sqrt(2.0 * math.pi ** 2)


def evaluate_zonal(e: ZonalExpansion, grid: LatitudeGrid) -> np.ndarray:
    """Samples of the expansion at the grid nodes."""
    if grid.n != e.n:
        raise DomainError("grid and expansion live on different spheres")
    return _basis_matrix(grid, e.degree) @ e.coeffs


def project_zonal(samples: np.ndarray, grid: LatitudeGrid, J: int,
                  cancellation: bool = False) -> ZonalExpansion:
    """Quadrature projection onto degrees 0..J; exact for bandlimited data.

    Requires grid resolution >= 4J so the products of basis functions stay
    inside the quadrature's exactness range.
    """
    if grid.count < max(4 * J, 4):
        raise AliasingError(f"grid resolution {grid.count} < 4*J = {4 * J}")
    B = _basis_matrix(grid, J)
    coeffs = (grid.weights[:, None] * np.conj(B) * np.asarray(samples, dtype=complex)[:, None]).sum(axis=0)
    if cancellation:
        coeffs[0] = 0.0
    return ZonalExpansion(n=grid.n, coeffs=coeffs, cancellation=cancellation)


# ---------------------------------------------------------------------------
# Transform coefficients of homogeneous kernels
# ---------------------------------------------------------------------------

def gamma_coefficient(j: int, n: int) -> float:
    """pi^{n/2} Gamma(j/2) / Gamma((j+n)/2), of size j^{-n/2}.

    For n = 2 this collapses to 2*pi/j by the Gamma recurrence.
    """
    if j < 1 or int(j) != j:
        raise DomainError(f"degree j must be a positive integer, got {j}")
    if n not in (2, 4):
        raise DomainError(f"ambient dimension must be 2 or 4, got {n}")
    return math.pi ** (n / 2.0) * math.exp(math.lgamma(j / 2.0) - math.lgamma((j + n) / 2.0))


def gamma_coefficient_oracle(j: int, r_max: float = 2000.0, tol: float = 1e-8) -> float:
    """Independent quadrature route to the n = 2 coefficient.

    Radial oscillatory integral 2*pi * int_0^{r_max} J_j(r)/r dr; the Bessel
    factor is the angular average of the plane wave, so no Gamma-function
    identity enters.  Truncation error decays like r_max^{-3/2}.
    """
    edges = np.concatenate([geometric_edges(1e-8, 1.0),
                            np.arange(1.0, r_max + 1e-9, 25.0), [r_max]])
    edges = np.unique(edges)

    def integrand(r: np.ndarray) -> np.ndarray:
        return jv(j, r) / r

    value, _err, _ok = integrate_panels(integrand, edges, tol=tol)
    return 2.0 * math.pi * value.real


_I_POWER_CYCLE = (1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j)  # i^{-j} for j mod 4


def symbol_from_omega(omega: ZonalExpansion) -> ZonalExpansion:
    """Coefficient map a_j -> i^{-j} gamma_j a_j of the kernel-to-symbol transform."""
    if not omega.cancellation:
        raise CancellationError("symbol transform requires a mean-zero kernel expansion")
    out = np.zeros_like(omega.coeffs)
    for j in range(1, omega.degree + 1):
        out[j] = _I_POWER_CYCLE[j % 4] * gamma_coefficient(j, omega.n) * omega.coeffs[j]
    return ZonalExpansion(n=omega.n, coeffs=out, cancellation=True)


def sphere_sobolev_norm(e: ZonalExpansion, s: float) -> float:
    """(sum (1+j)^{2s} |coeff_j|^2)^{1/2} in the L2-normalized basis."""
    if s < 0.0:
        raise DomainError(f"Sobolev order must be >= 0, got {s}")
    j = np.arange(e.degree + 1)
    return float(np.sqrt(np.sum((1.0 + j) ** (2.0 * s) * np.abs(e.coeffs) ** 2)))


def _eigenvalues(J: int, n: int) -> np.ndarray:
    j = np.arange(J + 1, dtype=float)
    return j * (j + n - 2.0)


def laplace_power(e: ZonalExpansion, r: float) -> ZonalExpansion:
    """Coefficient-wise (j(j+n-2))^r; needs a vanishing j = 0 coefficient."""
    if r < 0.0:
        raise DomainError(f"power must be >= 0, got {r}")
    if e.coeffs[0] != 0:
        raise CancellationError("fractional Laplacian undefined on the constant mode")
    factors = _eigenvalues(e.degree, e.n) ** r if r > 0 else np.ones(e.degree + 1)
    factors[0] = 0.0 if r > 0 else factors[0]
    out = e.coeffs * factors
    out[0] = 0.0
    return ZonalExpansion(n=e.n, coeffs=out, cancellation=True)


def omom_ratio(omega: ZonalExpansion) -> float:
    """||Omega||_2^2 / ||Delta^{n/4} m_Omega||_2^2 in coefficient space.

    With the exact transform coefficients the denominator factor
    (j(j+n-2))^{n/2} gamma_j^2 is constant in j, so the ratio is independent
    of the expansion: 1/(2 pi)^2 for n = 2 and 1/(4 pi^2)^2 for n = 4.
    """
    if not omega.cancellation:
        raise CancellationError("ratio requires a mean-zero expansion")
    num = float(np.sum(np.abs(omega.coeffs) ** 2))
    if num == 0.0:
        raise DomainError("ratio undefined for the zero expansion")
    m = symbol_from_omega(omega)
    lap = laplace_power(m, omega.n / 4.0)
    den = float(np.sum(np.abs(lap.coeffs) ** 2))
    return num / den


# ---------------------------------------------------------------------------
# Growth of the oscillated symbol
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereGrowthResult:
    rows: tuple  # (t, value)
    exponent: float

    @property
    def ts(self) -> np.ndarray:
        return np.array([t for t, _ in self.rows])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.rows])


def _real_zonal_samples(e: ZonalExpansion, grid: LatitudeGrid) -> np.ndarray:
    vals = evaluate_zonal(e, grid)
    scale = max(1.0, float(np.abs(vals).max()))
    if np.max(np.abs(vals.imag)) > 1e-10 * scale:
        raise DomainError("expansion must be real-valued on the grid")
    return vals.real


def _normalized_symbol(m: ZonalExpansion) -> ZonalExpansion:
    """Scale so the implied kernel density has unit L2 norm (when nonzero)."""
    j = np.arange(1, m.degree + 1)
    if j.size == 0:
        return m
    gammas = np.array([gamma_coefficient(int(jj), m.n) for jj in j])
    omega_norm = float(np.sqrt(np.sum((np.abs(m.coeffs[1:]) / gammas) ** 2)))
    if omega_norm == 0.0:
        return m
    return ZonalExpansion(n=m.n, coeffs=m.coeffs / omega_norm,
                          cancellation=m.cancellation)


def _resolved_projection(m: ZonalExpansion, t: float, resid_tol: float,
                         j_cap: int):
    """Grid and projection of e^{itm} with certified resolution.

    Doubles the bandwidth until the quadrature reconstruction residual of
    e^{itm} drops below ``resid_tol``; the oscillation needs bandwidth
    proportional to t * max|m|.
    """
    base = LatitudeGrid.zonal_s3(max(4 * (m.degree + 1), 16))
    m_max = float(np.abs(_real_zonal_samples(m, base)).max())
    J = max(4 * m.degree, int(math.ceil(m.degree * (2.0 + 1.3 * abs(t) * m_max))), 8)
    while True:
        grid = LatitudeGrid.zonal_s3(4 * (J + 1))
        m_samples = _real_zonal_samples(m, grid)
        f = np.exp(1j * t * m_samples)
        coeffs = project_zonal(f, grid, J)
        recon = evaluate_zonal(coeffs, grid)
        scale = math.sqrt(float((grid.weights * np.abs(f) ** 2).sum()))
        resid = math.sqrt(float((grid.weights * np.abs(f - recon) ** 2).sum())) / scale
        if resid < resid_tol:
            return grid, m_samples, f, coeffs
        if 2 * J > j_cap:
            raise AliasingError(
                f"e^(itm) at t={t:g} not resolved below {resid_tol:g} within "
                f"bandwidth cap {j_cap} (residual {resid:.2e})")
        J *= 2


def unimodular_sphere_growth(m: ZonalExpansion, t_grid: Sequence[float],
                             resid_tol: float = 1e-9, j_cap: int = 4096,
                             normalize: bool = True) -> SphereGrowthResult:
    """L2 size of the Laplacian of the mean-free oscillation e^{itm} on S^3.

    For each t: evaluate e^{itm} on a resolution-certified grid, subtract the
    sphere mean, apply the Laplacian spectrally, and take the L2 norm.  The
    result carries the log-log fitted growth exponent in t (roughly 2 for
    smooth m, driven by the |grad m|^2 chain-rule term).
    """
    if m.n != 4:
        raise DomainError("sphere growth is computed on zonal S^3 (n = 4)")
    if normalize:
        m = _normalized_symbol(m)
    rows = []
    for t in t_grid:
        t = float(t)
        if t == 0.0:
            rows.append((t, 0.0))
            continue
        grid, _m_samples, f, coeffs = _resolved_projection(m, t, resid_tol, j_cap)
        mean = complex((grid.weights * f).sum() / _SPHERE_MEASURE[4])
        centered = project_zonal(f - mean, grid, coeffs.degree)
        lap = _eigenvalues(centered.degree, 4) * centered.coeffs
        rows.append((t, float(np.linalg.norm(lap))))
    ts = np.array([t for t, _ in rows])
    vals = np.array([v for _, v in rows])
    fit_mask = (ts > 0) & (vals > 1e-12)
    if fit_mask.sum() >= 2:
        exponent = float(np.polyfit(np.log(ts[fit_mask]), np.log(vals[fit_mask]), 1)[0])
    else:
        exponent = math.nan
    return SphereGrowthResult(rows=tuple(rows), exponent=exponent)


def leibniz_residual(m: ZonalExpansion, t: float, resid_tol: float = 1e-9,
                     j_cap: int = 4096, normalize: bool = True) -> float:
    """Relative L2 gap of Delta e^{itm} = it e^{itm} Delta m - t^2 e^{itm} |grad m|^2.

    The left side is computed spectrally, the right side pointwise from the
    spectral Laplacian and angular derivative of m; both on the same
    resolution-certified grid.
    """
    if m.n != 4:
        raise DomainError("the chain-rule identity is evaluated on zonal S^3")
    if normalize:
        m = _normalized_symbol(m)
    grid, m_samples, f, coeffs = _resolved_projection(m, float(t), resid_tol, j_cap)
    lap_f = evaluate_zonal(
        ZonalExpansion(n=4, coeffs=-_eigenvalues(coeffs.degree, 4) * coeffs.coeffs), grid)
    dm = (_basis_dtheta(grid, m.degree) @ m.coeffs).real
    lap_m = evaluate_zonal(
        ZonalExpansion(n=4, coeffs=-_eigenvalues(m.degree, 4) * m.coeffs), grid).real
    rhs = 1j * t * f * lap_m - t * t * f * dm ** 2
    num = math.sqrt(float((grid.weights * np.abs(lap_f - rhs) ** 2).sum()))
    den = math.sqrt(float((grid.weights * np.abs(rhs) ** 2).sum()))
    return num / den if den > 0 else num
