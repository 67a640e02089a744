"""Experiment orchestration CLI.

Named experiments map to the module operations; configs are flat JSON
documents; every randomized experiment demands an explicit seed and identical
config + seed reproduces byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import curves, growth, interpolation, serialize, special, spherical
from .grids import NormBudget, Symbol, Weight, multiplier_norm
from .optimize import golden_section_minimize

__all__ = ["main", "EXPERIMENTS", "ConfigError"]


class ConfigError(Exception):
    """Invalid experiment configuration; the message names the field."""


@dataclass(frozen=True)
class Experiment:
    group: str
    defaults: dict
    randomized: bool
    run: Callable[[dict, Optional[int], str], dict]


def _merge_params(defaults: dict, overrides: dict) -> dict:
    params = dict(defaults)
    for key, value in overrides.items():
        if key not in defaults:
            raise ConfigError(f"unknown parameter field {key!r}")
        params[key] = value
    return params


def _table(fmt: str, name: str, columns, rows) -> dict:
    if fmt == "json":
        doc = [dict(zip(columns, row)) for row in rows]
        return {f"{name}.json": serialize.dumps_json(doc)}
    return {f"{name}.csv": serialize.table_to_csv(columns, rows)}


# ---------------------------------------------------------------------------
# Experiment bodies
# ---------------------------------------------------------------------------

def _run_psi_majorant(params, seed, fmt):
    rows = []
    for s in params["s_values"]:
        psi = special.poisson_majorant(s, params["x"], params["y"])
        psi10, phi_prime = special.majorant_constants(s)
        rows.append((s, psi, 1.0 / math.cos(math.pi * s / 2.0), psi10, phi_prime))
    return _table(fmt, "psi_majorant",
                  ["s", "psi_value", "closed_form", "psi_at_1_0", "phi_prime_abs"], rows)


def _run_extremal(params, seed, fmt):
    ms = np.geomspace(params["m_min"], params["m_max"], int(params["count"]))
    rows = []
    for M in ms:
        value, argmin = special.extremal_infimum(float(M))
        obj = lambda a, M=M: abs(1.0 + a) + math.sqrt((1.0 + a) ** 2 + M * a * a)
        _, golden = golden_section_minimize(obj, -3.0, 1.0)
        rows.append((float(M), value, golden, argmin))
    return _table(fmt, "extremal_branch", ["M", "closed_value", "golden_value", "argmin"], rows)


def _run_interp_norms(params, seed, fmt):
    rows = []
    for lam in params["lambdas"]:
        for theta in params["thetas"]:
            cp = interpolation.CoupleParams(theta=theta, lam=lam)
            rows.append((lam, theta,
                         interpolation.schechter_norm(cp, "lower_h"),
                         interpolation.schechter_norm(cp, "upper_H"),
                         interpolation.schechter_norm(cp, "lower_h2"),
                         interpolation.schechter_norm(cp, "upper_H2")))
    return _table(fmt, "interp_norms", ["lambda", "theta", "h", "H", "h2", "H2"], rows)


def _run_interp_limits(params, seed, fmt):
    lims = interpolation.endpoint_limits(params["lam"])
    doc = {"lambda": params["lam"], "lim_h_over_theta": lims[0], "lim_H": lims[1],
           "lim_h2_over_theta": lims[2], "lim_H2": lims[3]}
    return {"interp_limits.json": serialize.dumps_json(doc)}


def _make_symbol(kind: str, n: int, rng: np.random.Generator) -> Symbol:
    k = np.arange(n)
    if kind == "sawtooth":
        return Symbol(((2.0 * math.pi * k / n) % (2.0 * math.pi)) + 0.0j)
    if kind == "random_bounded":
        return Symbol(rng.uniform(-1.0, 1.0, size=n) + 0.0j)
    if kind == "random_unimodular":
        return Symbol(np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, size=n)))
    raise ConfigError(f"unknown symbol kind {kind!r}")


def _make_weight(kind: str, n: int, jump: float, rng: np.random.Generator):
    if kind == "unit":
        return None
    if kind == "two_valued":
        w = np.ones(n)
        w[n // 2:] = jump
        return Weight(w)
    if kind == "random":
        return Weight(np.exp(rng.normal(size=n)))
    raise ConfigError(f"unknown weight kind {kind!r}")


def _run_mult_norm(params, seed, fmt):
    rng = np.random.default_rng(seed)
    n = int(params["n"])
    m = _make_symbol(params["symbol"], n, rng)
    w = _make_weight(params["weight"], n, params["weight_jump"], rng)
    budget = NormBudget(probes=int(params["probes"]), seed=seed)
    est = multiplier_norm(m, params["p"], w, budget)
    doc = {"p": params["p"], "value": est.value, "kind": est.kind,
           "converged": est.converged, "witness_check": est.check(m, params["p"], w)}
    return {"mult_norm.json": serialize.dumps_json(doc),
            "witness.csv": serialize.grid_to_csv(est.witness)}


def _run_mult_norm_soundness(params, seed, fmt):
    rng = np.random.default_rng(seed)
    n = int(params["n"])
    m = Symbol(rng.uniform(0.2, 3.0, size=n) * np.exp(1j * rng.uniform(0, 2 * math.pi, n)))
    rows = []
    est2 = multiplier_norm(m, 2.0)
    rows.append(("p2_exact_vs_supremum", est2.value, float(np.abs(m.samples).max())))
    w = Weight(np.exp(rng.normal(size=n)))
    estw = multiplier_norm(m, 2.0, w, NormBudget(seed=seed))
    dense = _dense_weighted_matrix(m, w)
    rows.append(("weighted_p2_vs_svd", estw.value,
                 float(np.linalg.svd(dense, compute_uv=False)[0])))
    est1 = multiplier_norm(m, 1.0)
    rows.append(("p1_kernel_mass", est1.value,
                 float(np.abs(np.fft.ifft(m.samples)).sum())))
    out = [(name, value, reference, abs(value - reference)) for name, value, reference in rows]
    return _table(fmt, "mult_norm_soundness", ["check", "value", "reference", "abs_diff"], out)


def _dense_weighted_matrix(m: Symbol, w: Weight) -> np.ndarray:
    n = m.samples.size
    eye = np.eye(n, dtype=complex)
    circulant = np.fft.ifft(m.samples[:, None] * np.fft.fft(eye, axis=0), axis=0)
    sqrt_w = np.sqrt(w.samples)
    return sqrt_w[:, None] * circulant / sqrt_w[None, :]


def _run_growth_curve(params, seed, fmt):
    rng = np.random.default_rng(seed)
    n = int(params["n"])
    m = _make_symbol(params["symbol"], n, rng)
    w = _make_weight(params["weight"], n, params["weight_jump"], rng)
    ts = np.linspace(params["t_min"], params["t_max"], int(params["t_count"]))
    curve = growth.growth_curve(m, params["p"], w, ts, NormBudget(seed=seed))
    artifacts = _table(fmt, "growth_curve", ["t", "value", "kind"],
                       [(t, est.value, est.kind) for t, est in curve.samples])
    try:
        bound = growth.fit_exponential_power(curve, mode=params["fit_mode"])
        fit_doc = {"A": bound.A, "c": bound.c, "s": bound.s, "mode": bound.mode}
    except (growth.DegenerateCurveError, growth.InsufficientDataError) as exc:
        fit_doc = {"error": str(exc)}
    artifacts["growth_fit.json"] = serialize.dumps_json(fit_doc)
    return artifacts


def _run_growth_fit_recovery(params, seed, fmt):
    ts = np.linspace(params["t_min"], params["t_max"], int(params["count"]))
    values = params["A"] * np.exp(params["c"] * ts ** params["s"])
    bound = growth.fit_exponential_power((ts, values), mode=params["mode"])
    artifacts = _table(fmt, "synthetic_curve", ["t", "value"], list(zip(ts, values)))
    artifacts["growth_fit.json"] = serialize.dumps_json(
        {"A": bound.A, "c": bound.c, "s": bound.s, "mode": bound.mode})
    return artifacts


def _run_converse_envelope(params, seed, fmt):
    rng = np.random.default_rng(seed)
    n = int(params["n"])
    rows = []
    for trial in range(int(params["trials"])):
        m = Symbol(rng.uniform(-1.0, 1.0, size=n) + 0.0j)
        base = multiplier_norm(m, 1.0).value
        for t in params["t_values"]:
            lhs = multiplier_norm(growth.unimodular_symbol(m, t), 1.0).value
            rhs = math.exp(abs(t) * base)
            rows.append((trial, t, lhs, rhs, lhs <= rhs))
    return _table(fmt, "converse_envelope", ["trial", "t", "exp_norm", "envelope", "ok"], rows)


def _run_cube_study(params, seed, fmt):
    rows = growth.cube_norm_study(params["R_values"], params["p"], None,
                                  (int(params["n"]),), 1.0,
                                  NormBudget(seed=seed if seed is not None else 0))
    return _table(fmt, "cube_study", ["R", "value", "kind"],
                  [(r["R"], r["value"], r["kind"]) for r in rows])


def _run_gamma_coefficients(params, seed, fmt):
    rows = []
    for n in params["n_values"]:
        for j in range(1, int(params["j_max"]) + 1):
            g = spherical.gamma_coefficient(j, int(n))
            oracle = (spherical.gamma_coefficient_oracle(j)
                      if n == 2 and j <= int(params["oracle_j_max"]) else math.nan)
            rows.append((j, int(n), g, g * j ** (n / 2.0), oracle))
    return _table(fmt, "gamma_coefficients",
                  ["j", "n", "gamma", "gamma_times_j_pow", "oracle"], rows)


def _parse_expansion(coeffs, n=4, cancellation=True) -> spherical.ZonalExpansion:
    arr = np.asarray(coeffs, dtype=complex)
    return spherical.ZonalExpansion(n=n, coeffs=arr, cancellation=cancellation)


def _run_sphere_growth(params, seed, fmt):
    m = _parse_expansion(params["m_coeffs"])
    result = spherical.unimodular_sphere_growth(m, params["t_values"],
                                                resid_tol=params["resid_tol"])
    artifacts = _table(fmt, "sphere_growth", ["t", "value"], list(result.rows))
    artifacts["sphere_growth_fit.json"] = serialize.dumps_json({"exponent": result.exponent})
    return artifacts


def _run_counterexample(params, seed, fmt):
    J = int(params["J"])
    rows = []
    for t in params["t_values"]:
        l1, _ = curves.counterexample_norms(curves.CounterexampleParams(J=J, t=t))
        rows.append((t, l1, l1 / math.exp(math.pi * abs(t) / 2.0)))
    artifacts = _table(fmt, "counterexample_growth", ["t", "l1_exact", "ratio_to_envelope"], rows)
    mass_rows = curves.counterexample_unboundedness(params["R_values"])
    artifacts.update(_table(fmt, "counterexample_mass", ["R", "l1_mass", "closed_form"],
                            [(r["R"], r["l1_mass"], r["closed_form"]) for r in mass_rows]))
    limit, _ = curves.counterexample_norms(curves.CounterexampleParams(J=J, t=0.0))
    artifacts["counterexample_anchors.json"] = serialize.dumps_json(
        {"J": J, "t0_value": limit, "zeta_anchor": math.pi ** 2 * math.log(2.0) / 6.0})
    return artifacts


def _model_curve(eps: float) -> curves.CurveSpec:
    return curves.CurveSpec(
        components=(lambda u: np.sign(u) * np.minimum(np.abs(u), 1.0),),
        kernel=lambda u: 1.0 / u,
        eps=eps)


def _run_divergence_witness(params, seed, fmt):
    spec0 = _model_curve(min(params["eps_values"]))
    rows = curves.divergence_witness(spec0, 0, params["eps_values"])
    return _table(fmt, "divergence_witness",
                  ["eps", "integral", "symbol_sup", "sup_gamma", "exp_sup_gamma"],
                  [(r["eps"], r["integral"], r["symbol_sup"], r["sup_gamma"],
                    r["exp_sup_gamma"]) for r in rows])


def _run_hilbert_symbol(params, seed, fmt):
    spec = curves.CurveSpec(components=(lambda u: u,), kernel=lambda u: 1.0 / u,
                            eps=params["eps"])
    rows = []
    for xi in params["xi_values"]:
        value = curves.curve_symbol(spec, [xi])
        target = math.pi * (1.0 if xi > 0 else -1.0 if xi < 0 else 0.0)
        rows.append((xi, value.real, value.imag, abs(value - 1j * target)))
    return _table(fmt, "hilbert_symbol", ["xi", "re", "im", "abs_error"], rows)


def _run_cosine_identity(params, seed, fmt):
    xs = np.linspace(-math.pi, math.pi, int(params["x_count"]))
    rows = []
    for k in range(int(params["k_max"]) + 1):
        terms = growth.cosine_power_expand(k)
        err = float(np.abs(growth.cosine_power_eval(terms, xs) - np.cos(xs) ** k).max())
        rows.append((k, err))
    return _table(fmt, "cosine_identity", ["k", "max_abs_err"], rows)


def _osc_grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, int(n), endpoint=False)


def _osc_kernel(x, y):
    with np.errstate(divide="ignore"):
        return np.where(x == y, 0.0, 1.0 / (x - y))


def _osc_phase(x, y):
    return np.sin(2.0 * math.pi * (x - y))


def _run_taylor_consistency(params, seed, fmt):
    x = _osc_grid(params["n"])
    rows = []
    for t in params["t_values"]:
        res = curves.taylor_consistency(_osc_kernel, _osc_phase, t, int(params["N"]), x)
        rows.append((t, res["gap"], res["bound"], res["gap"] <= res["bound"]))
    return _table(fmt, "taylor_consistency", ["t", "gap", "bound", "ok"], rows)


def _run_moment_growth(params, seed, fmt):
    x = _osc_grid(params["n"])
    result = curves.moment_growth(_osc_kernel, _osc_phase, params["n_values"], x)
    artifacts = _table(fmt, "moment_growth", ["n", "norm"],
                       [(r["n"], r["norm"]) for r in result["rows"]])
    artifacts["moment_growth_fit.json"] = serialize.dumps_json({"base": result["base"]})
    return artifacts


def _svg_polyline(xs, ys, width=480, height=320, margin=40) -> str:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    x_span = float(xs.max() - xs.min()) or 1.0
    y_span = float(ys.max() - ys.min()) or 1.0
    pts = []
    for x, y in zip(xs, ys):
        px = margin + (x - xs.min()) / x_span * (width - 2 * margin)
        py = height - margin - (y - ys.min()) / y_span * (height - 2 * margin)
        pts.append(f"{px:.2f},{py:.2f}")
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
            f'<rect width="{width}" height="{height}" fill="white"/>'
            f'<polyline points="{" ".join(pts)}" fill="none" stroke="black"/></svg>\n')


def _run_report(params, seed, fmt):
    artifacts = {}
    summary = []
    for path in params["inputs"]:
        text = Path(path).read_text()
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        entry = {"path": str(path), "rows": max(0, len(lines) - 1)}
        if lines:
            entry["columns"] = lines[0].split(",")
        summary.append(entry)
        if params["svg"] and len(lines) > 2:
            try:
                data = np.array([[float(v) for v in ln.split(",")[:2]] for ln in lines[1:]])
                artifacts[Path(path).stem + ".svg"] = _svg_polyline(data[:, 0], data[:, 1])
            except ValueError:
                pass
    artifacts["summary.json"] = serialize.dumps_json(summary)
    return artifacts


EXPERIMENTS: dict[str, Experiment] = {
    "psi-majorant": Experiment("psi", {
        "s_values": [round(0.1 * k, 1) for k in range(1, 10)], "x": 1.0, "y": 0.0,
    }, False, _run_psi_majorant),
    "extremal-branch": Experiment("interp", {
        "m_min": 1e-4, "m_max": 1e4, "count": 100,
    }, False, _run_extremal),
    "interp-norms": Experiment("interp", {
        "lambdas": [0.01, 0.1, 1.0, 10.0, 100.0],
        "thetas": [0.1, 0.25, 0.5, 0.75, 0.9],
    }, False, _run_interp_norms),
    "interp-limits": Experiment("interp", {"lam": 7.0}, False, _run_interp_limits),
    "mult-norm": Experiment("mult-norm", {
        "n": 64, "p": 2.0, "symbol": "random_unimodular", "weight": "two_valued",
        "weight_jump": 4.0, "probes": 16,
    }, True, _run_mult_norm),
    "mult-norm-soundness": Experiment("mult-norm", {"n": 64}, True, _run_mult_norm_soundness),
    "growth-curve": Experiment("growth", {
        "n": 128, "p": 2.0, "symbol": "sawtooth", "weight": "two_valued",
        "weight_jump": 4.0, "t_min": 0.5, "t_max": 6.0, "t_count": 6,
        "fit_mode": "envelope",
    }, True, _run_growth_curve),
    "growth-fit-recovery": Experiment("growth", {
        "A": 2.0, "c": 0.5, "s": 0.7, "count": 20, "t_min": 1.0, "t_max": 20.0,
        "mode": "envelope",
    }, False, _run_growth_fit_recovery),
    "converse-envelope": Experiment("growth", {
        "trials": 4, "n": 64, "t_values": [0.5, 1.0, 2.0, 5.0],
    }, True, _run_converse_envelope),
    "cube-study": Experiment("growth", {
        "n": 256, "p": 1.0, "R_values": [0.5, 1.0, 2.0, 3.0, 6.2],
    }, True, _run_cube_study),
    "gamma-coefficients": Experiment("spherical", {
        "j_max": 20, "oracle_j_max": 8, "n_values": [2, 4],
    }, False, _run_gamma_coefficients),
    "sphere-growth": Experiment("spherical", {
        "m_coeffs": [0.0, 0.0, -3.0, 0.0, 1.0], "t_values": [1.0, 2.0, 4.0, 8.0],
        "resid_tol": 1e-9,
    }, False, _run_sphere_growth),
    "counterexample-anchors": Experiment("counterexample", {
        "J": 1000000, "t_values": [0.0, 1.0, 2.0, 5.0, 10.0],
        "R_values": [1.0, math.e, 1000.0],
    }, False, _run_counterexample),
    "divergence-witness": Experiment("curves", {
        "eps_values": [1e-2, 1e-4, 1e-6],
    }, False, _run_divergence_witness),
    "hilbert-symbol": Experiment("curves", {
        "xi_values": [-2.0, -1.0, 1.0, 2.0], "eps": 1e-3,
    }, False, _run_hilbert_symbol),
    "cosine-identity": Experiment("oscillatory", {
        "k_max": 12, "x_count": 17,
    }, False, _run_cosine_identity),
    "taylor-consistency": Experiment("oscillatory", {
        "n": 128, "N": 8, "t_values": [0.5, 1.0],
    }, False, _run_taylor_consistency),
    "moment-growth": Experiment("oscillatory", {
        "n": 128, "n_values": [1, 2, 3, 4, 5, 6],
    }, False, _run_moment_growth),
    "report": Experiment("report", {"inputs": [], "svg": True}, False, _run_report),
}

_GROUPS = ("psi", "interp", "mult-norm", "growth", "spherical", "counterexample",
           "curves", "oscillatory", "report")
_GROUP_DEFAULT = {
    "psi": "psi-majorant", "interp": "interp-norms", "mult-norm": "mult-norm",
    "growth": "growth-curve", "spherical": "gamma-coefficients",
    "counterexample": "counterexample-anchors", "curves": "divergence-witness",
    "oscillatory": "taylor-consistency", "report": "report",
}


def _load_config(path: Optional[str], group: str) -> tuple[str, dict, Optional[int]]:
    if path is None:
        return _GROUP_DEFAULT[group], {}, None
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    allowed = {"experiment", "params", "rng_seed"}
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"unknown config field {key!r}")
    name = doc.get("experiment", _GROUP_DEFAULT[group])
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment name {name!r}")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("config field 'params' must be an object")
    seed = doc.get("rng_seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ConfigError("config field 'rng_seed' must be an integer")
    return name, params, seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multlab",
        description="Multiplier-norm, growth-law, and interpolation-constant experiments.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for group in _GROUPS:
        sub = subparsers.add_parser(group, help=f"{group} experiments")
        sub.add_argument("--config", default=None, help="JSON experiment config")
        sub.add_argument("--seed", type=int, default=None, help="64-bit RNG seed")
        sub.add_argument("--out", default=".", help="artifact output directory")
        sub.add_argument("--format", choices=("csv", "json"), default="csv",
                         help="table artifact format")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        name, overrides, config_seed = _load_config(args.config, args.command)
        exp = EXPERIMENTS[name]
        if exp.group != args.command:
            raise ConfigError(
                f"experiment field {name!r} belongs to group {exp.group!r}, "
                f"not {args.command!r}")
        params = _merge_params(exp.defaults, overrides)
        seed = args.seed if args.seed is not None else config_seed
        if exp.randomized and seed is None:
            raise ConfigError("field 'rng_seed' is required for this randomized experiment")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        artifacts = exp.run(params, seed, args.format)
    except Exception as exc:  # propagate with module context, no partial artifacts
        print(f"experiment {name!r} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for filename, content in sorted(artifacts.items()):
        path = out_dir / filename
        path.write_text(content)
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
