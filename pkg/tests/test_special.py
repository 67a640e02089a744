"""Scalar machinery: Gamma, conformal maps, majorant, extremal problems."""

import cmath
import math

import numpy as np
import pytest
import scipy.special as sps
from hypothesis import given, settings
from hypothesis import strategies as st

from multlab.errors import DomainError, InfeasibleError, PoleError
from multlab.optimize import golden_section_minimize
from multlab.special import (abs_gamma, derivative_at_center, disk_to_strip,
                             extremal_infimum, log_gamma, majorant_constants,
                             poisson_majorant, schwarz_pick_extremal, sector_map,
                             strip_to_disk)

RNG = np.random.default_rng(20240901)


class TestLogGamma:
    def test_at_one(self):
        assert abs(log_gamma(1.0)) <= 1e-14

    def test_at_half(self):
        assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) <= 1e-14

    def test_abs_gamma_one_plus_i(self):
        # reflection identity |Gamma(1+it)|^2 = pi t / sinh(pi t)
        want = math.sqrt(math.pi / math.sinh(math.pi))
        assert abs(abs_gamma(1 + 1j) - want) <= 1e-13
        # independent quadrature of the integral definition
        from scipy.integrate import quad
        re = quad(lambda x: np.cos(np.log(x)) * np.exp(-x), 0, 50, limit=400)[0]
        im = quad(lambda x: np.sin(np.log(x)) * np.exp(-x), 0, 50, limit=400)[0]
        assert abs(abs(complex(re, im)) - abs_gamma(1 + 1j)) <= 1e-9

    @pytest.mark.parametrize("z", [0.0, -1.0, -5.0])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            log_gamma(z)

    def test_matches_scipy_on_disk(self):
        worst = 0.0
        for _ in range(800):
            z = complex(RNG.uniform(-45, 45), RNG.uniform(-45, 45))
            if abs(z) > 50 or (z.imag == 0 and z.real <= 0):
                continue
            if min(abs(z + n) for n in range(0, 47)) < 1e-2:
                continue
            worst = max(worst, abs(log_gamma(z) - sps.loggamma(z)))
        assert worst <= 1e-11

    def test_asymptotic_bracket(self):
        # |Gamma(x+iy)| ~ sqrt(2 pi) |y|^{x-1/2} e^{-pi|y|/2} for large |y|
        target = math.sqrt(2.0 * math.pi)
        for x in (0.0, 1.0, 2.0):
            for y in np.linspace(5.0, 40.0, 15):
                value = abs_gamma(complex(x, y)) * math.exp(math.pi * y / 2.0) * y ** (0.5 - x)
                assert 0.9 * target <= value <= 1.1 * target


class TestStripMap:
    def test_center_goes_to_origin(self):
        for theta in (0.1, 0.3, 0.5, 0.7, 0.9):
            assert abs(strip_to_disk(theta, theta)) <= 1e-14

    def test_boundary_to_circle(self):
        for t in (-3.0, -0.5, 0.0, 1.0, 4.0):
            assert abs(abs(strip_to_disk(0.3, 1j * t)) - 1.0) <= 1e-12
            assert abs(abs(strip_to_disk(0.3, 1.0 + 1j * t)) - 1.0) <= 1e-12

    def test_round_trip_bulk(self):
        # |Im z| capped at 2.5: the Cayley map compresses deeper points to
        # within e^{-pi |Im z|} of the circle, where 1e-12 is unrecoverable
        for theta in (0.08, 0.25, 0.5, 0.66, 0.93):
            xs = RNG.uniform(0.0, 1.0, 200)
            ys = RNG.uniform(-2.5, 2.5, 200)
            for x, y in zip(xs, ys):
                z = complex(x, y)
                back = disk_to_strip(theta, strip_to_disk(theta, z))
                assert abs(back - z) <= 1e-12

    def test_round_trip_deep_strip(self):
        for theta in (0.25, 0.7):
            for y in (-4.0, 4.0):
                z = complex(0.4, y)
                back = disk_to_strip(theta, strip_to_disk(theta, z))
                assert abs(back - z) <= 1e-10

    @settings(max_examples=60, deadline=None)
    @given(theta=st.floats(0.02, 0.98), x=st.floats(0.001, 0.999),
           y=st.floats(-2.5, 2.5))
    def test_round_trip_property(self, theta, x, y):
        z = complex(x, y)
        assert abs(disk_to_strip(theta, strip_to_disk(theta, z)) - z) <= 1e-12

    def test_domain_error(self):
        with pytest.raises(DomainError):
            strip_to_disk(0.5, 1.5 + 0j)

    def test_derivative_at_center_half(self):
        fwd, inv = derivative_at_center(0.5)
        assert abs(fwd - math.pi / 2.0) <= 1e-14
        assert abs(inv - 2.0 / math.pi) <= 1e-14

    def test_derivative_quarter_against_finite_differences(self):
        theta = 0.25
        fwd, inv = derivative_at_center(theta)
        assert abs(fwd - math.pi / math.sqrt(2.0)) <= 1e-12
        h = 1e-6
        fd = abs(strip_to_disk(theta, theta + h) - strip_to_disk(theta, theta - h)) / (2 * h)
        assert abs(fd - fwd) / fwd <= 1e-8
        assert abs(fwd * inv - 1.0) <= 1e-14


class TestPoissonMajorant:
    def test_closed_form_on_axis(self):
        for s in np.arange(0.1, 0.95, 0.1):
            got = poisson_majorant(float(s), 1.0, 0.0)
            assert abs(got - 1.0 / math.cos(math.pi * s / 2.0)) <= 1e-10

    def test_lower_bound_snapshot(self):
        # value frozen from an independent scipy.quad evaluation (2.9716917563647)
        value = poisson_majorant(0.5, 3.0, 5.0)
        assert value >= math.sqrt(5.0)
        assert abs(value - 2.9716917563646) <= 1e-10

    def test_boundary_limit(self):
        for s in (0.3, 0.7):
            gap_coarse = abs(poisson_majorant(s, 1e-3, 2.0) - 2.0 ** s)
            gap_fine = abs(poisson_majorant(s, 1e-6, 2.0) - 2.0 ** s)
            assert gap_fine < gap_coarse
            assert gap_fine <= 1e-4

    def test_majorant_dominates(self):
        for _ in range(200):
            s = RNG.uniform(0.05, 0.95)
            x = RNG.uniform(1e-3, 10.0)
            y = RNG.uniform(-10.0, 10.0)
            assert poisson_majorant(s, x, y) >= abs(y) ** s - 1e-10

    def test_harmonicity(self):
        h = 1e-3
        for s in (0.2, 0.5, 0.8):
            for x in (0.6, 1.3, 1.9):
                for y in (-1.5, 0.4, 1.8):
                    lap = (poisson_majorant(s, x + h, y) + poisson_majorant(s, x - h, y)
                           + poisson_majorant(s, x, y + h) + poisson_majorant(s, x, y - h)
                           - 4.0 * poisson_majorant(s, x, y)) / h ** 2
                    assert abs(lap) <= 1e-4

    def test_domain_error(self):
        with pytest.raises(DomainError):
            poisson_majorant(0.5, 0.0, 1.0)
        with pytest.raises(DomainError):
            poisson_majorant(1.2, 1.0, 1.0)


class TestMajorantConstants:
    def test_half(self):
        psi10, phi_prime = majorant_constants(0.5)
        assert abs(psi10 - math.sqrt(2.0)) <= 1e-10
        # Beta-function reduction of the derivative integral gives s/cos(pi s/2)
        assert abs(phi_prime - 0.5 / math.cos(math.pi * 0.25)) <= 1e-10

    def test_agrees_with_majorant_on_axis(self):
        for s in (0.2, 0.6, 0.85):
            psi10, _ = majorant_constants(s)
            assert abs(psi10 - poisson_majorant(s, 1.0, 0.0)) <= 1e-9

    def test_blow_up_rate(self):
        for s in (0.9, 0.95, 0.99):
            psi10, phi_prime = majorant_constants(s)
            assert 0.5 <= (1.0 - s) * psi10 <= 1.0
            assert phi_prime > 1.0

    def test_two_quadrature_schemes_agree(self):
        from scipy.integrate import quad
        for s in (0.3, 0.5, 0.8):
            _, phi_prime = majorant_constants(s)
            a = 0.5 * s + 0.5
            ref = quad(lambda u: (u ** a - u ** (a - 1.0)) / (1.0 + u) ** 2,
                       0.0, np.inf, limit=400)[0]
            assert abs(phi_prime - abs(ref) / math.pi) <= 1e-6


class TestExtremalInfimum:
    def test_branch_values(self):
        value, argmin = extremal_infimum(1.0)
        assert value == 1.0 and argmin == -1.0
        value, argmin = extremal_infimum(0.0)
        assert value == 0.0 and argmin == -1.0
        value, argmin = extremal_infimum(4.0)
        assert abs(value - 1.6) <= 1e-15
        assert abs(argmin + 0.4) <= 1e-15

    def test_argmin_attains_value(self):
        for M in np.geomspace(1e-4, 1e4, 60):
            value, argmin = extremal_infimum(float(M))
            direct = abs(1.0 + argmin) + math.sqrt((1.0 + argmin) ** 2 + M * argmin ** 2)
            assert abs(direct - value) <= 1e-10

    def test_golden_section_agrees(self):
        for M in np.geomspace(1e-4, 1e4, 100):
            value, _ = extremal_infimum(float(M))
            obj = lambda a, M=M: abs(1.0 + a) + math.sqrt((1.0 + a) ** 2 + M * a * a)
            _, found = golden_section_minimize(obj, -3.0, 1.0)
            assert abs(found - value) <= 1e-8

    def test_domain_error(self):
        with pytest.raises(DomainError):
            extremal_infimum(-0.5)


class TestSchwarzPick:
    def test_boundary_case_is_inner(self):
        psi = schwarz_pick_extremal(0.6, 0.64)
        zs = np.exp(1j * np.linspace(0, 2 * math.pi, 64, endpoint=False))
        assert np.max(np.abs(np.abs(psi(zs)) - 1.0)) <= 1e-12

    def test_constant_branch(self):
        psi = schwarz_pick_extremal(0.3 - 0.2j, 0.0)
        zs = RNG.uniform(-0.7, 0.7, 20) + 1j * RNG.uniform(-0.7, 0.7, 20)
        assert np.max(np.abs(psi(zs) - (0.3 - 0.2j))) == 0.0

    def test_rotation_case(self):
        psi = schwarz_pick_extremal(0.0, 1.0)
        zs = 0.5 * np.exp(1j * np.linspace(0, 2 * math.pi, 17))
        assert np.max(np.abs(psi(zs) - zs)) <= 1e-14

    def test_interpolation_data(self):
        for _ in range(40):
            u = RNG.uniform(-0.6, 0.6) + 1j * RNG.uniform(-0.6, 0.6)
            cap = 1.0 - abs(u) ** 2
            v = RNG.uniform(0.0, cap) * cmath.exp(1j * RNG.uniform(0, 2 * math.pi))
            psi = schwarz_pick_extremal(u, v)
            assert abs(psi(0.0) - u) <= 1e-14
            h = 1e-6
            fd = (psi(h) - psi(-h)) / (2.0 * h)
            assert abs(fd - v) <= 1e-8
            zs = 0.999 * np.exp(1j * np.linspace(0, 2 * math.pi, 64))
            assert np.max(np.abs(psi(zs))) <= 1.0 + 1e-12

    def test_no_candidate_beats_derivative_cap(self):
        # any disk-bounded candidate with P(0) = u has |P'(0)| <= 1 - |u|^2
        for _ in range(60):
            u = RNG.uniform(-0.7, 0.7) + 1j * RNG.uniform(-0.5, 0.5)
            coeffs = RNG.normal(size=5) + 1j * RNG.normal(size=5)
            circle = np.exp(1j * np.linspace(0, 2 * math.pi, 256, endpoint=False))
            tail = np.polyval(np.append(coeffs[::-1], 0.0), circle)
            scale = (1.0 - abs(u)) / max(np.abs(tail).max(), 1e-12)
            derivative = scale * abs(coeffs[0])
            assert derivative <= 1.0 - abs(u) ** 2 + 1e-9

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            schwarz_pick_extremal(0.9, 0.5)


class TestSectorMap:
    def test_principal_values(self):
        assert abs(sector_map(0.5, 1j) - cmath.exp(1j * math.pi / 4)) <= 1e-15
        assert abs(sector_map(0.5, 4.0) - 2.0) <= 1e-15

    def test_modulus_and_argument(self):
        z = 2.0 + 3.0j
        s = 0.37
        w = sector_map(s, z)
        assert abs(abs(w) - abs(z) ** s) <= 1e-13
        assert abs(cmath.phase(w) - s * cmath.phase(z)) <= 1e-13

    def test_sector_modulus_inequality(self):
        beta, t, s = 2.0, 3.0, 0.5
        assert abs(complex(beta, t)) ** s <= beta ** s + abs(t) ** s + 1e-12
