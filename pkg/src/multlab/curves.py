"""Symbols of singular integrals along curves and oscillatory model operators.

Principal-value symbol quadrature over truncation annuli, the divergence
witness tabulation, exact norms of the dyadic-piece counterexample family,
and dense oscillatory/moment operators with spectral-norm probes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, GridTooLargeError, QuadratureError
from .quadrature import annulus_principal_value, geometric_edges, integrate_panels
from .special import log_gamma

__all__ = [
    "CurveSpec", "CounterexampleParams",
    "curve_symbol", "sincos_symbol", "divergence_witness",
    "counterexample_norms", "counterexample_unboundedness",
    "oscillatory_operator", "moment_operator", "spectral_norm",
    "taylor_consistency", "moment_growth", "phase_removal_check",
]

MAX_DENSE_GRID = 2048


@dataclass(frozen=True)
class CurveSpec:
    """Curve components, kernel, and truncation for a singular integral.

    All evaluators must be numpy-vectorized maps R -> R.  The kernel only
    needs to be integrable on each annulus eps < |t| < 1/eps.
    """

    components: tuple
    kernel: Callable[[np.ndarray], np.ndarray]
    eps: float = 1e-3

    def __post_init__(self):
        if not (0.0 < self.eps < 1.0):
            raise DomainError(f"truncation eps must lie in (0, 1), got {self.eps}")
        if len(self.components) == 0:
            raise DomainError("need at least one curve component")

    @property
    def ndim(self) -> int:
        return len(self.components)

    def kernel_annulus_mass(self, tol: float = 1e-8) -> float:
        """int_{eps<|t|<1/eps} |K(t)| dt, the integrability check."""
        value, _err = annulus_principal_value(
            lambda u: np.abs(self.kernel(u)) + 0.0j, self.eps, tol=tol)
        mass = value.real
        if not math.isfinite(mass):
            raise DomainError("kernel is not integrable on the annulus")
        return mass

    def phase(self, u: np.ndarray, xi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(u, dtype=float))
        for comp, x in zip(self.components, xi):
            if x != 0.0:
                out = out + x * comp(u)
        return out


def curve_symbol(spec: CurveSpec, xi, tol: float = 1e-7) -> complex:
    """p.v. int_{eps<|u|<1/eps} e^{i gamma(u).xi} K(u) du.

    Symmetric pairing of u and -u realizes the principal value; the quadrature
    reports failure (with the achieved bound) instead of returning silently
    degraded values.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.size != spec.ndim:
        raise DomainError(f"xi has {xi.size} entries for a {spec.ndim}-component curve")

    def integrand(u: np.ndarray) -> np.ndarray:
        return np.exp(1j * spec.phase(u, xi)) * spec.kernel(u)

    value, _err = annulus_principal_value(integrand, spec.eps, tol=tol)
    return complex(value)


def sincos_symbol(spec: CurveSpec, t: float, xi, flavor: str = "cos",
                  tol: float = 1e-7) -> complex:
    """int_{eps<|u|<1/eps} e^{i t trig(gamma(u).xi)} K(u) du."""
    if flavor not in ("cos", "sin"):
        raise ValueError(f"flavor must be 'cos' or 'sin', got {flavor!r}")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.size != spec.ndim:
        raise DomainError(f"xi has {xi.size} entries for a {spec.ndim}-component curve")
    trig = np.cos if flavor == "cos" else np.sin

    def integrand(u: np.ndarray) -> np.ndarray:
        return np.exp(1j * t * trig(spec.phase(u, xi))) * spec.kernel(u)

    value, _err = annulus_principal_value(integrand, spec.eps, tol=tol)
    return complex(value)


def divergence_witness(spec: CurveSpec, component: int, eps_list: Sequence[float],
                       xi_grid: Optional[Sequence] = None,
                       tol: float = 1e-9) -> list[dict]:
    """Tabulate I(eps) = int gamma_j K against the symbol sup S(eps).

    Rows carry both sides of the contrapositive mechanism (a uniformly
    bounded symbol forces I(eps) to stay bounded by a multiple of
    e^{sup|gamma_j|}); no constant is asserted, only reported data.
    """
    if not (0 <= component < spec.ndim):
        raise DomainError(f"component index {component} out of range")
    gamma_j = spec.components[component]
    if xi_grid is None:
        xi_grid = [np.full(spec.ndim, x) for x in (-2.0, -0.5, 0.5, 1.0, 2.0)]
    rows = []
    for eps in eps_list:
        probe = CurveSpec(components=spec.components, kernel=spec.kernel, eps=float(eps))
        samples = np.concatenate([np.geomspace(eps, 1.0 / eps, 512),
                                  -np.geomspace(eps, 1.0 / eps, 512)])
        sup_gamma = float(np.abs(gamma_j(samples)).max())
        if not math.isfinite(sup_gamma):
            raise DomainError("component is unbounded on the annulus samples")
        value, _err = annulus_principal_value(
            lambda u: gamma_j(u) * spec.kernel(u) + 0.0j, float(eps), tol=tol)
        sup_symbol = max(abs(curve_symbol(probe, xi, tol=max(tol, 1e-7))) for xi in xi_grid)
        rows.append({
            "eps": float(eps),
            "integral": float(value.real),
            "symbol_sup": float(sup_symbol),
            "sup_gamma": sup_gamma,
            "exp_sup_gamma": math.exp(sup_gamma),
        })
    return rows


# ---------------------------------------------------------------------------
# Dyadic-piece counterexample family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleParams:
    """Number of dyadic kernel pieces and the complex family parameter."""

    J: int
    alpha: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if self.J < 1 or int(self.J) != self.J:
            raise DomainError(f"J must be a positive integer, got {self.J}")
        if self.alpha < 0.0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")


def counterexample_norms(params: CounterexampleParams) -> tuple[float, float]:
    """(exact L1->L1 norm on the imaginary axis, L1->L2 bound at alpha + it).

    The kernel pieces K_j = chi_{[2^j, 2^{j+1}]}(x)/x are disjointly
    supported with ||K_j||_1 = log 2 and ||K_j||_2 = 2^{-(j+1)/2}, so the
    weighted sums collapse to explicit series divided by |Gamma(1 + z)|.
    """
    j = np.arange(1, params.J + 1, dtype=float)
    l1_series = float(np.sum(j ** -2.0)) * math.log(2.0)
    l1_exact = l1_series / math.exp(log_gamma(complex(1.0, params.t)).real)
    l2_series = float(np.sum(j ** (params.alpha - 2.0) * 2.0 ** (-(j + 1.0) / 2.0)))
    l1_l2 = l2_series / math.exp(log_gamma(complex(1.0 + params.alpha, params.t)).real)
    return l1_exact, l1_l2


def counterexample_unboundedness(R_list: Sequence[float], tol: float = 1e-12) -> list[dict]:
    """||x^{-1} chi_[1, R]||_1 tabulated by quadrature against log R."""
    rows = []
    for R in R_list:
        R = float(R)
        if R < 1.0:
            raise DomainError(f"R must be >= 1, got {R}")
        if R == 1.0:
            quadrature = 0.0
        else:
            value, err, ok = integrate_panels(
                lambda x: 1.0 / x + 0.0j, geometric_edges(1.0, R), tol=tol)
            if not ok:
                raise QuadratureError("mass quadrature stalled", achieved=err)
            quadrature = float(value.real)
        rows.append({"R": R, "l1_mass": quadrature, "closed_form": math.log(R)})
    return rows


# ---------------------------------------------------------------------------
# Dense oscillatory operators
# ---------------------------------------------------------------------------

def _dense_kernel(kernel, x: np.ndarray) -> np.ndarray:
    if x.size > MAX_DENSE_GRID:
        raise GridTooLargeError(f"dense assembly capped at {MAX_DENSE_GRID} points")
    xx, yy = np.meshgrid(x, x, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.asarray(kernel(xx, yy), dtype=complex)
    np.fill_diagonal(K, 0.0)  # symmetric-pair p.v. cancellation about the diagonal
    if not np.all(np.isfinite(K.view(float))):
        raise DomainError("kernel produced non-finite off-diagonal entries")
    return K


def _grid_step(x: np.ndarray) -> float:
    if x.size < 2:
        return 1.0
    steps = np.diff(x)
    if np.any(np.abs(steps - steps[0]) > 1e-9 * abs(steps[0])):
        raise DomainError("dense grids must be uniformly spaced")
    return float(steps[0])


def oscillatory_operator(kernel, phase, t: float, x: np.ndarray) -> np.ndarray:
    """Dense matrix of f -> int K(x, y) e^{i t Q(x, y)} f(y) dy on the grid."""
    x = np.asarray(x, dtype=float)
    K = _dense_kernel(kernel, x)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    return K * np.exp(1j * t * np.asarray(phase(xx, yy), dtype=float)) * _grid_step(x)


def moment_operator(kernel, phase, n: int, x: np.ndarray) -> np.ndarray:
    """Dense matrix of the n-th phase moment f -> int K Q^n f dy."""
    if n < 0 or int(n) != n:
        raise DomainError(f"moment order must be a nonnegative integer, got {n}")
    x = np.asarray(x, dtype=float)
    K = _dense_kernel(kernel, x)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    return K * np.asarray(phase(xx, yy), dtype=float) ** n * _grid_step(x)


def spectral_norm(A: np.ndarray, tol: float = 1e-12, max_iter: int = 5000,
                  restarts: int = 4, seed: int = 0) -> float:
    """Largest singular value by power iteration on the normal matrix."""
    A = np.asarray(A, dtype=complex)
    AH = A.conj().T
    rng = np.random.default_rng(seed)
    starts = [np.ones(A.shape[1], dtype=complex)]
    starts += [rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
               for _ in range(restarts)]
    best = 0.0
    for v in starts:
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue
        v = v / nv
        sigma = 0.0
        for _ in range(max_iter):
            u = AH @ (A @ v)
            norm_u = np.linalg.norm(u)
            if norm_u == 0.0:
                sigma = 0.0
                break
            v = u / norm_u
            sigma_new = math.sqrt(norm_u)
            if abs(sigma_new - sigma) <= tol * max(sigma_new, 1e-300):
                sigma = sigma_new
                break
            sigma = sigma_new
        best = max(best, sigma)
    return best


def taylor_consistency(kernel, phase, t: float, N: int, x: np.ndarray) -> dict:
    """Spectral-norm gap between e^{itQ} assembly and its N-term moment sum.

    Returns the gap together with the provable bound
    || |K| h ||_2 * (|t| ||Q||_inf)^{N+1}/(N+1)! * e^{|t| ||Q||_inf}.
    """
    x = np.asarray(x, dtype=float)
    T = oscillatory_operator(kernel, phase, t, x)
    S = np.zeros_like(T)
    for n in range(N + 1):
        S = S + (1j * t) ** n / math.factorial(n) * moment_operator(kernel, phase, n, x)
    gap = spectral_norm(T - S)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    q_sup = float(np.abs(np.asarray(phase(xx, yy), dtype=float)).max())
    abs_kernel_norm = spectral_norm(np.abs(_dense_kernel(kernel, x)) * _grid_step(x))
    arg = abs(t) * q_sup
    tail = arg ** (N + 1) / math.factorial(N + 1) * math.exp(arg)
    return {"gap": gap, "bound": abs_kernel_norm * tail,
            "kernel_norm": abs_kernel_norm, "scalar_tail": tail}


def moment_growth(kernel, phase, n_list: Sequence[int], x: np.ndarray) -> dict:
    """Norms of the phase moments and the fitted geometric base D."""
    rows = [{"n": int(n), "norm": spectral_norm(moment_operator(kernel, phase, n, x))}
            for n in n_list]
    ns = np.array([r["n"] for r in rows], dtype=float)
    vals = np.array([max(r["norm"], 1e-300) for r in rows])
    base = float(np.exp(np.polyfit(ns, np.log(vals), 1)[0])) if len(rows) >= 2 else math.nan
    return {"rows": rows, "base": base}


def phase_removal_check(kernel, phase, n: int, x: np.ndarray) -> dict:
    """Cosine-phase moment norm against the D^n bound, D = (A^2 + 1)/A.

    A is the largest norm of the pure-oscillation operators T_{K, kQ} over
    the frequencies k = n - 2j entering the cosine power expansion.
    """
    x = np.asarray(x, dtype=float)
    freqs = sorted({abs(n - 2 * j) for j in range(n + 1)})
    A = max(spectral_norm(oscillatory_operator(kernel, phase, float(k), x)) for k in freqs)
    D = (A * A + 1.0) / A if A > 0 else math.inf

    def cos_power_kernel(xv, yv):
        return kernel(xv, yv) * np.cos(np.asarray(phase(xv, yv), dtype=float)) ** n

    lhs = spectral_norm(moment_operator(cos_power_kernel, lambda xv, yv: np.ones_like(xv), 0, x))
    return {"A": A, "D": D, "moment_norm": lhs, "bound": D ** n}
