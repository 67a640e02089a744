"""Growth curves, exponential-power fits, and the symbol calculus helpers."""

import math

import numpy as np
import pytest

from multlab.errors import (BranchSelectionError, DegenerateCurveError,
                            DivergentWeightError, DomainError,
                            InsufficientDataError, NonpositiveSampleError)
from multlab.grids import NormBudget, Symbol, Weight, multiplier_norm
from multlab.growth import (BoundFunction, GrowthBound, ap_table,
                            cosine_power_eval, cosine_power_expand,
                            cube_indicator_symbol, cube_norm_study,
                            fit_exponential_power, growth_curve,
                            mollified_symbol, power_log_symbols, rf_transfer,
                            unimodular_symbol)

RNG = np.random.default_rng(5150)


class TestUnimodularSymbol:
    def test_zero_time_is_identity_symbol(self):
        m = Symbol(RNG.uniform(-1, 1, 16) + 0.0j)
        out = unimodular_symbol(m, 0.0)
        assert np.max(np.abs(out.samples - 1.0)) == 0.0

    def test_constant_symbol_global_phase(self):
        m = Symbol(np.full(8, 0.7 + 0.0j))
        out = unimodular_symbol(m, 2.0)
        assert np.max(np.abs(out.samples - np.exp(1.4j))) <= 1e-15
        for p in (1.0, 2.0, math.inf):
            assert abs(multiplier_norm(out, p).value - 1.0) <= 1e-12

    def test_linear_phase_shift_isometry(self):
        n, j0 = 64, 3
        m = Symbol(2.0 * math.pi * np.arange(n) * j0 / n + 0.0j)
        out = unimodular_symbol(m, 1.0)
        for p in (1.0, 2.0, math.inf):
            assert abs(multiplier_norm(out, p).value - 1.0) <= 1e-9

    def test_complex_input_rejected(self):
        with pytest.raises(DomainError):
            unimodular_symbol(Symbol(1j * np.ones(8)), 1.0)

    def test_group_property(self):
        m = Symbol(RNG.uniform(-2, 2, 32) + 0.0j)
        lhs = unimodular_symbol(m, 1.3).samples * unimodular_symbol(m, 0.9).samples
        rhs = unimodular_symbol(m, 2.2).samples
        assert np.max(np.abs(lhs - rhs)) <= 1e-12


class TestGrowthCurve:
    def test_p2_unweighted_is_flat_one(self):
        m = Symbol(RNG.uniform(-3, 3, 64) + 0.0j)
        curve = growth_curve(m, 2.0, None, [0.0, 1.0, 2.0, 4.0])
        assert np.max(np.abs(curve.values - 1.0)) <= 1e-12
        assert all(k == "exact" for k in curve.kinds)

    def test_weighted_sawtooth_exceeds_one(self):
        n = 256
        m = Symbol((2.0 * math.pi * np.arange(n) / n) % (2.0 * math.pi) + 0.0j)
        w = np.ones(n)
        w[n // 2:] = 4.0
        curve = growth_curve(m, 2.0, Weight(w), [0.5, 2.0, 6.0],
                             NormBudget(seed=4))
        assert all(k == "exact" for k in curve.kinds)
        assert np.all(curve.values >= 1.0 - 1e-10)
        assert curve.values.max() > 1.0 + 1e-6

    def test_exponential_envelope_on_p1_path(self):
        for _ in range(5):
            m = Symbol(RNG.uniform(-1, 1, 64) + 0.0j)
            base = multiplier_norm(m, 1.0).value
            for t in (0.5, 1.0, 2.0, 5.0):
                value = multiplier_norm(unimodular_symbol(m, t), 1.0).value
                assert value <= math.exp(t * base) + 1e-9


class TestFit:
    def test_envelope_recovery_exact_data(self):
        ts = np.linspace(1.0, 20.0, 20)
        values = 2.0 * np.exp(0.5 * ts ** 0.7)
        bound = fit_exponential_power((ts, values))
        assert abs(bound.s - 0.7) <= 0.02
        assert abs(bound.c - 0.5) / 0.5 <= 0.05
        assert abs(bound.A - 2.0) <= 0.05

    def test_envelope_soundness_stored_numbers(self):
        ts = np.linspace(1.0, 10.0, 12)
        values = 1.3 * np.exp(0.8 * ts ** 0.55) * RNG.uniform(0.9, 1.0, 12)
        bound = fit_exponential_power((ts, values))
        assert np.all(values <= bound.A * np.exp(bound.c * ts ** bound.s))

    def test_pure_exponential_hits_cap(self):
        ts = np.linspace(1.0, 12.0, 12)
        bound = fit_exponential_power((ts, np.exp(ts)))
        assert bound.s == 1.0
        assert abs(bound.c - 1.0) <= 1e-6

    def test_degenerate_flat_curve(self):
        ts = np.linspace(0.0, 10.0, 11)
        with pytest.raises(DegenerateCurveError):
            fit_exponential_power((ts, np.ones(11)))

    def test_insufficient_samples(self):
        with pytest.raises(InsufficientDataError):
            fit_exponential_power((np.array([1.0, 2.0, 3.0]),
                                   np.array([2.0, 3.0, 4.0])))

    def test_lsq_mode(self):
        ts = np.linspace(1.0, 20.0, 20)
        values = 2.0 * np.exp(0.5 * ts ** 0.7)
        bound = fit_exponential_power((ts, values), mode="lsq")
        assert bound.mode == "lsq"
        assert abs(bound.s - 0.7) <= 0.05
        assert np.all(values <= bound.A * np.exp(bound.c * ts ** bound.s) * (1 + 1e-9))

    def test_bound_is_callable(self):
        bound = GrowthBound(A=2.0, c=0.5, s=0.7)
        assert abs(bound(2.0) - 2.0 * math.exp(0.5 * 2.0 ** 0.7)) <= 1e-12


class TestCosinePower:
    def test_zeroth_power(self):
        assert cosine_power_expand(0) == [(0, 1.0)]

    def test_square(self):
        terms = dict()
        for freq, coeff in cosine_power_expand(2):
            terms[freq] = terms.get(freq, 0.0) + coeff
        assert abs(terms[2] - 0.25) <= 1e-15
        assert abs(terms[0] - 0.5) <= 1e-15
        assert abs(terms[-2] - 0.25) <= 1e-15

    def test_reconstruction(self):
        xs = np.linspace(-math.pi, math.pi, 41)
        for k in range(13):
            got = cosine_power_eval(cosine_power_expand(k), xs)
            assert np.max(np.abs(got - np.cos(xs) ** k)) <= 1e-12

    def test_fifth_power_at_point(self):
        got = cosine_power_eval(cosine_power_expand(5), np.array([0.3]))[0]
        assert abs(got - math.cos(0.3) ** 5) <= 1e-12

    def test_coefficients_sum_to_one(self):
        for k in range(13):
            assert abs(sum(c for _, c in cosine_power_expand(k)) - 1.0) <= 1e-12


class TestCubeIndicator:
    def test_full_grid_is_identity(self):
        m = cube_indicator_symbol(2.0 * math.pi, (16,), 1.0)
        assert np.all(m.samples == 1.0)
        assert abs(multiplier_norm(m, 1.0).value - 1.0) <= 1e-12

    def test_p2_always_one(self):
        for R in (0.5, 1.5, 3.0):
            m = cube_indicator_symbol(R, (64,), 1.0)
            assert abs(multiplier_norm(m, 2.0).value - 1.0) <= 1e-13

    def test_p1_dirichlet_mass_grows(self):
        masses = []
        for n in (64, 128, 256):
            rows = cube_norm_study([math.pi], 1.0, None, (n,), 1.0,
                                   NormBudget(seed=0))
            assert rows[0]["kind"] == "exact"
            masses.append(rows[0]["value"])
        assert masses[0] < masses[1] < masses[2]

    def test_extent_error(self):
        with pytest.raises(DomainError):
            cube_indicator_symbol(10.0, (16,), 1.0)


class TestTransferTables:
    def test_identity_transfer_above(self):
        psi = BoundFunction.identity(1.0, 1e4, 32)
        out = rf_transfer(psi, 2.0, 4.0)
        assert np.max(np.abs(out.values - psi.ts)) == 0.0

    def test_power_branch_below(self):
        psi = BoundFunction.identity(1.0, 1e4, 32)
        out = rf_transfer(psi, 3.0, 2.0)
        want = np.minimum(psi.ts ** 2.0, 1e4)
        assert np.max(np.abs(out.values - want)) <= 1e-9 * 1e4

    def test_equal_exponents_unchanged(self):
        psi = BoundFunction(ts=np.array([1.0, 2.0, 4.0]),
                            values=np.array([1.0, 3.0, 9.0]))
        assert rf_transfer(psi, 2.5, 2.5) is psi

    def test_transfer_preserves_monotonicity(self):
        psi = BoundFunction(ts=np.geomspace(1, 100, 16),
                            values=np.log1p(np.geomspace(1, 100, 16)))
        out = rf_transfer(psi, 3.0, 1.5)
        assert np.all(np.diff(out.values) >= -1e-12)

    def test_ap_table_branches(self):
        psi = BoundFunction.identity(1.0, 1e6, 64)
        cases = [
            (3.0, 1.5, (3.0 - 1.0) / (1.5 - 1.0)),   # p < 2 < p0
            (1.5, 3.0, 1.0),                          # p0 < 2 < p
            (1.2, 1.5, 1.0 / (1.5 - 1.0)),            # p0 < p < 2
            (1.5, 1.2, 1.0 / (1.2 - 1.0)),            # p < p0 < 2
            (3.0, 4.0, 3.0 - 1.0),                    # 2 < p0 < p
            (4.0, 3.0, 4.0 - 1.0),                    # 2 < p < p0
        ]
        for p0, p, expo in cases:
            out = ap_table(psi, p0, p)
            # exact at the table nodes (between nodes the table interpolates)
            want = np.minimum(psi.ts ** expo, 1e6)
            assert np.max(np.abs(out.values - want) / want) <= 1e-12

    def test_ap_table_boundary_needs_position(self):
        psi = BoundFunction.identity()
        with pytest.raises(BranchSelectionError):
            ap_table(psi, 2.0, 3.0)
        out = ap_table(psi, 2.0, 3.0, position="p0<2<p")
        assert abs(out(2.0) - 2.0) <= 1e-12


class TestSymbolCalculus:
    def test_power_identity(self):
        m = Symbol(RNG.uniform(0.5, 2.0, 16) + 0.0j)
        out = power_log_symbols(m, 1.0, 0)
        assert np.max(np.abs(out.samples - m.samples)) == 0.0

    def test_constant_e(self):
        m = Symbol(np.full(8, math.e + 0.0j))
        out = power_log_symbols(m, 2.0, 3)
        assert np.max(np.abs(out.samples - math.e ** 2)) <= 1e-12

    def test_two_valued(self):
        m = Symbol(np.array([1.0, 4.0], dtype=complex))
        out = power_log_symbols(m, 0.5, 1)
        assert abs(out.samples[0]) == 0.0
        assert abs(out.samples[1] - 2.0 * math.log(2.0) * 2.0) <= 1e-12  # sqrt(4)*log(4)

    def test_nonpositive_rejected(self):
        with pytest.raises(NonpositiveSampleError):
            power_log_symbols(Symbol(np.array([1.0, -1.0], dtype=complex)), 1.0, 0)

    def test_mollified_point_mass(self):
        xs = np.array([0.0])
        m = Symbol(RNG.uniform(-1, 1, 8) + 0.0j)
        out = mollified_symbol(np.array([3.0]), xs, m)
        assert np.max(np.abs(out.samples - 3.0 * np.exp(-1j * m.samples.real * 0.0))) <= 1e-14

    def test_mollified_exponential_resolvent(self):
        dx = 1e-3
        xs = (np.arange(20000) + 0.5) * dx
        phi = np.exp(-xs)
        m = Symbol(np.zeros(4, dtype=complex))
        out = mollified_symbol(phi, xs, m, s=0.5)
        geometric = dx * math.exp(-dx / 2.0) * (1.0 - math.exp(-20000 * dx)) \
            / (1.0 - math.exp(-dx))
        assert np.max(np.abs(out.samples - geometric)) <= 1e-12
        assert abs(geometric - 1.0) <= 1e-4

    def test_mollified_constant_symbol(self):
        dx = 0.01
        xs = np.arange(-400, 400) * dx + dx / 2.0
        phi = np.exp(-xs ** 2)
        c = 0.8
        m = Symbol(np.full(4, c + 0.0j))
        out = mollified_symbol(phi, xs, m)
        direct = np.sum(phi * np.exp(-1j * c * xs)) * dx
        assert np.max(np.abs(out.samples - direct)) <= 1e-12

    def test_mollified_divergence_guard(self):
        xs = np.linspace(0.5, 4000.0, 4096)
        phi = np.ones_like(xs)
        with pytest.raises(DivergentWeightError):
            mollified_symbol(phi, xs, Symbol(np.zeros(4, dtype=complex)), s=0.9)
