import math

import numpy as np
import pytest
from scipy.integrate import quad

from hyperheat import oracle
from hyperheat.oracle import (
    bump,
    classical_solution,
    compound_growth,
    difference_symbol,
    difference_symbol_residual,
    gaussian,
    gaussian_heat_kernel,
    gaussian_symbol_approx,
    gaussian_transform_identity,
    indicator,
    quadrature_rate_check,
    rate_check_p,
    rate_check_t,
    sampled,
    tail_bound_check,
)


class TestBoundaryConditions:
    def test_gaussian_values_and_certificate(self):
        g = gaussian(2.0, 0.5)
        assert g(0.0) == pytest.approx(2.0)
        assert g(np.array([1.0]))[0] == pytest.approx(2.0 * math.exp(-0.5))
        assert g.check_certificate()

    def test_indicator_halfopen(self):
        g = indicator(-1.0, 1.0)
        assert g(-1.0) == 1.0 and g(0.99) == 1.0
        assert g(1.0) == 0.0 and g(-1.01) == 0.0

    def test_bump_support_and_peak(self):
        g = bump(0.5, 2.0)
        assert g(0.5) == pytest.approx(1.0)
        assert g(2.5) == 0.0 and g(-1.5) == 0.0
        assert abs(g(2.4999)) < 1e-3  # decays continuously to the edge

    def test_sampled_nearest(self):
        g = sampled([(0.0, 1.0 + 1j), (1.0, 3.0)])
        assert g(0.2) == 1.0 + 1j
        assert g(0.8) == 3.0
        assert g(-5.0) == 1.0 + 1j
        assert np.array_equal(g(np.array([0.0, 1.0])), np.array([1 + 1j, 3.0]))

    def test_constructor_validation(self):
        with pytest.raises(ValueError):
            gaussian(1.0, 0.0)
        with pytest.raises(ValueError):
            indicator(1.0, 1.0)
        with pytest.raises(ValueError):
            sampled([])


class TestClassicalSolution:
    def test_rejects_nonpositive_time(self):
        with pytest.raises(ValueError):
            classical_solution(gaussian(), 0.0, 0.0)

    def test_small_time_continuity(self):
        g = gaussian()
        for x in (0.0, 1.0, -1.0):
            assert abs(classical_solution(g, 1e-6, x) - g(x)) <= 1e-3

    def test_gaussian_closed_form_value(self):
        # a=b=1, t=0.5: amplitude (1+4bt)^(-1/2) = 1/sqrt(3)
        assert classical_solution(gaussian(), 0.5, 0.0).real == pytest.approx(
            1 / math.sqrt(3), abs=1e-9
        )

    def test_closed_form_vs_quadrature_lattice(self):
        g = gaussian(1.3, 0.8)
        for t in (0.1, 0.25, 0.5, 1.0):
            for x in (0.0, 0.5, -0.5, 1.0, -1.0):
                assert abs(g.closed_form(t, x) - classical_solution(g, t, x)) <= 1e-9

    def test_mass_conservation(self):
        g = gaussian()
        boundary_mass, _ = quad(lambda y: float(g(y).real), -12, 12, epsabs=1e-12)
        for t in (0.25, 1.0):
            mass, _ = quad(lambda x: classical_solution(g, t, x).real, -14, 14,
                           epsabs=1e-8, limit=200)
            assert abs(mass - boundary_mass) <= 1e-6 * abs(boundary_mass)

    def test_satisfies_heat_equation(self):
        g = gaussian()
        h = 1e-3
        t = 0.5
        for x in (0.0, 0.5, -0.5, 1.0, -1.0):
            u = lambda tt, xx: classical_solution(g, tt, xx).real
            ut = (u(t + h, x) - u(t - h, x)) / (2 * h)
            uxx = (u(t, x + h) - 2 * u(t, x) + u(t, x - h)) / (h * h)
            assert abs(ut - uxx) <= 1e-4

    def test_closed_form_requires_gaussian(self):
        with pytest.raises(ValueError):
            indicator(-1, 1).closed_form(0.5, 0.0)

    def test_complex_data(self):
        g = oracle.BoundaryCondition(
            "custom",
            lambda y: (1 + 2j) * np.exp(-np.asarray(y) ** 2),
            oracle.GrowthCertificate(math.sqrt(5.0), 0.0, 1.0),
            "complex-gaussian",
        )
        val = classical_solution(g, 0.5, 0.0)
        # the kernel is linear, so the imag/real ratio of the data is preserved
        assert val.imag == pytest.approx(2 * val.real, rel=1e-6)
        assert val.real == pytest.approx(1 / math.sqrt(3), abs=1e-8)


class TestGaussianTransformIdentity:
    def test_zero_offset_value(self):
        # the t=1, z=0 integral is 1/sqrt(pi)
        left, _ = quad(lambda w: math.exp(-math.pi**2 * w * w), -4, 4, epsabs=1e-12)
        assert left == pytest.approx(1 / math.sqrt(math.pi), abs=1e-10)
        assert gaussian_transform_identity(1.0, 0.0) <= 1e-8

    def test_offset_case(self):
        assert gaussian_transform_identity(0.5, 1.0) <= 1e-8

    def test_imaginary_part_vanishes_by_oddness(self):
        im, _ = quad(lambda w: math.exp(-math.pi**2 * 0.5 * w * w) * math.sin(math.pi * w),
                     -6, 6, epsabs=1e-12)
        assert abs(im) <= 1e-10


class TestSequences:
    def test_first_residual_exact(self):
        # n=1: 1*(e^{i pi} - 1) - i pi = -2 - i pi
        p1 = difference_symbol_residual(1)
        assert p1 == pytest.approx(-2 - 1j * math.pi)
        assert abs(p1) == pytest.approx(math.sqrt(4 + math.pi**2))

    def test_symbol_limit(self):
        assert difference_symbol(10**6, 2.0) == pytest.approx(2j * math.pi, abs=1e-4)

    def test_compound_growth_limit(self):
        assert compound_growth(10**6, -1.0 + 0.5j) == pytest.approx(
            np.exp(-1.0 + 0.5j), abs=1e-5
        )

    def test_gaussian_symbol_at_zero_is_exactly_one(self):
        for n in (1, 7, 1000):
            assert gaussian_symbol_approx(n, 0.0) == 1.0


class TestRateChecks:
    def test_p_bounds_and_order(self):
        rep = rate_check_p([1, 10, 100, 1000, 10**4, 10**5, 10**6])
        assert rep.bounds_hold
        assert rep.observed[0] == pytest.approx(math.sqrt(4 + math.pi**2))
        assert rep.observed[-1] <= 2.29e-4  # instantiated bound at n=1e6
        fit = rate_check_p([100, 1000, 10**4, 10**5, 10**6])
        assert 0.8 <= fit.fitted_order <= 1.2
        assert fit.passed

    def test_t_order_fit(self):
        (rep,) = rate_check_t([1.0], [100, 1000, 10**4])
        assert all(a > b for a, b in zip(rep.observed, rep.observed[1:]))
        assert 0.8 <= rep.fitted_order <= 1.2

    def test_t_vanishing_large_argument(self):
        (rep,) = rate_check_t([5.0], [10**4])
        assert rep.observed[0] <= 1e-3
        assert rep.passed

    def test_t_rejects_zero(self):
        with pytest.raises(ValueError):
            rate_check_t([0.0], [100])


class TestTailBound:
    def test_reference_cases(self):
        left, right = tail_bound_check(1.0, 1.0, 100)
        assert left <= right
        assert left <= 1.66e-5  # ~ (1/pi) e^{-pi^2}
        left, right = tail_bound_check(0.25, 2.0, 100)
        assert left <= right

    def test_precondition_enforced(self):
        # cut below 1/(pi sqrt(t)) voids the bound
        with pytest.raises(ValueError):
            tail_bound_check(1.0, 0.25, 100)


class TestQuadratureCheck:
    def test_absolute_error_tiny(self):
        rep = quadrature_rate_check(1.0, 1.0, [256])
        assert rep.observed[0] <= 1e-2

    def test_errors_sit_at_float_floor(self):
        # the lattice sum of an analytic Gaussian is spectrally exact, so no
        # 1/n rate is measurable: the report must say so rather than pretend
        rep = quadrature_rate_check(1.0, 0.0, [64, 128, 256])
        assert rep.floor_noise
        assert max(rep.observed) <= 1e-12
        assert not rep.order_in_bracket
        assert not rep.passed

    def test_rejects_bad_time(self):
        with pytest.raises(ValueError):
            quadrature_rate_check(0.0, 0.0, [64])


class TestCertificate:
    def test_exponent_below_two_required(self):
        with pytest.raises(ValueError):
            oracle.GrowthCertificate(1.0, 1.0, 2.0)

    def test_bound_shape(self):
        c = oracle.GrowthCertificate(2.0, 0.5, 1.0)
        assert c.bound(0.0) == pytest.approx(2.0)
        assert c.bound(2.0) == pytest.approx(2.0 * math.exp(1.0))
