import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from tdho import (BoundViolation, EntropyRecord, LEIPNIK_MINIMUM,
                  NormalizationError, Scenario, differential_entropy,
                  entropy_sweep, gaussian_joint_entropy,
                  joint_entropy_closed_inverse_square,
                  joint_entropy_closed_pulsating, joint_entropy_gaussian,
                  joint_entropy_numeric, leipnik_bound_margin, sigma_p_sq,
                  sigma_x_sq)

LN_E_OVER_2 = 1.0 - math.log(2.0)


def gaussian_grid(variance, n=4096, spread=10.0):
    sigma = math.sqrt(variance)
    x = np.linspace(-spread * sigma, spread * sigma, n)
    return x, np.exp(-x * x / (2 * variance)) / math.sqrt(2 * math.pi * variance)


class TestDifferentialEntropy:
    def test_gaussian_entropy_zero_point(self):
        x, rho = gaussian_grid(1.0 / (2 * math.pi * math.e))
        assert differential_entropy(x, rho) == pytest.approx(0.0, abs=1e-10)

    def test_unit_gaussian(self):
        x, rho = gaussian_grid(1.0)
        expected = 0.5 * math.log(2 * math.pi * math.e)
        assert differential_entropy(x, rho) == pytest.approx(expected, abs=1e-10)

    def test_uniform_density(self):
        x = np.linspace(0.0, 2.0, 1001)
        rho = np.full_like(x, 0.5)
        assert differential_entropy(x, rho) == pytest.approx(math.log(2.0), abs=1e-12)

    def test_adaptive_quadrature_oracle(self):
        # independent oracle: scipy adaptive quadrature on the same density
        var = 0.37
        x, rho = gaussian_grid(var)
        grid_value = differential_entropy(x, rho)
        def integrand(u):
            d = math.exp(-u * u / (2 * var)) / math.sqrt(2 * math.pi * var)
            return -d * math.log(d) if d > 0 else 0.0
        oracle, _ = quad(integrand, -12 * math.sqrt(var), 12 * math.sqrt(var))
        assert grid_value == pytest.approx(oracle, abs=1e-9)

    def test_rejects_unnormalized(self):
        x, rho = gaussian_grid(1.0)
        with pytest.raises(NormalizationError):
            differential_entropy(x, 1.5 * rho)

    def test_rejects_negative(self):
        x, rho = gaussian_grid(1.0)
        rho[10] = -1e-3
        with pytest.raises(NormalizationError):
            differential_entropy(x, rho)


class TestGaussianJointEntropy:
    def test_minimum_uncertainty(self):
        assert gaussian_joint_entropy(0.5, 0.5, 1.0) == pytest.approx(LN_E_OVER_2,
                                                                      abs=1e-15)

    def test_known_value(self):
        got = gaussian_joint_entropy(0.5, 1.0, 1.0)
        assert got == pytest.approx(0.6534264097200273, abs=1e-12)

    def test_matches_quadrature(self):
        var_x, var_p = 0.8, 0.9
        x, rho_x = gaussian_grid(var_x)
        p, rho_p = gaussian_grid(var_p)
        quadrature = (differential_entropy(x, rho_x) + differential_entropy(p, rho_p)
                      - math.log(2 * math.pi))
        assert gaussian_joint_entropy(var_x, var_p) == pytest.approx(quadrature,
                                                                     abs=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(scale=st.floats(0.1, 10), var_x=st.floats(0.05, 5), var_p=st.floats(0.05, 5))
    def test_scale_invariance(self, scale, var_x, var_p):
        base = gaussian_joint_entropy(var_x, var_p)
        scaled = gaussian_joint_entropy(var_x * scale ** 2, var_p / scale ** 2)
        assert scaled == pytest.approx(base, abs=1e-10)


class TestJointEntropyNumeric:
    def test_static_ground_state_saturates_bound(self, static_unit):
        rec = joint_entropy_numeric(0, static_unit, 0.7)
        assert rec.s_joint == pytest.approx(LN_E_OVER_2, abs=1e-6)
        assert rec.method == "Quadrature"

    def test_inverse_square_known_value(self, inverse_square_unit):
        for force in (False, True):
            rec = joint_entropy_numeric(0, inverse_square_unit, 1.0,
                                        force_numeric=force)
            assert rec.s_joint == pytest.approx(0.6534264097200273, abs=1e-6)
            assert rec.s_closed == pytest.approx(rec.s_joint, abs=1e-6)

    def test_pulsating_quarter_period_oracle_value(self, pulsating_unit):
        # Transform oracle: at t = pi/4 the variance product is 3/8
        # (position hbar/(2 m(t) Omega), momentum hbar m(t)(Omega^2 +
        # nu^2 tan^2)/(2 Omega)), so S_j = ln(e/2) + ln(3/2)/2. The
        # constant-mass momentum-width variant would give ln(e/2) + ln(3)/2;
        # the quadrature refutes it.
        rec = joint_entropy_numeric(0, pulsating_unit, math.pi / 4,
                                    force_numeric=True)
        assert rec.s_joint == pytest.approx(0.5095853734941369, abs=1e-6)
        assert abs(rec.s_joint - 0.8561589637741096) > 0.3

    def test_quadrature_matches_analytic_variances(self, pulsating_unit,
                                                   inverse_square_unit):
        for s, times in ((pulsating_unit, (0.1, 0.5, 1.0, 1.3)),
                         (inverse_square_unit, (0.3, 1.0, 2.5, 4.0))):
            for t in times:
                rec = joint_entropy_numeric(0, s, t, force_numeric=True)
                expected = gaussian_joint_entropy(sigma_x_sq(s, t), sigma_p_sq(s, t))
                assert rec.s_joint == pytest.approx(expected, abs=1e-6)

    def test_record_identity(self, inverse_square_unit):
        rec = joint_entropy_numeric(1, inverse_square_unit, 2.0)
        assert rec.s_joint == pytest.approx(rec.s_x + rec.s_p - math.log(2 * math.pi),
                                            abs=1e-12)
        assert rec.s_closed is None  # no closed form beyond the ground state

    def test_grid_refinement_converged(self, inverse_square_unit):
        from tdho import default_grid
        coarse = joint_entropy_numeric(0, inverse_square_unit, 1.5,
                                       grid=default_grid(0, inverse_square_unit, 1.5,
                                                         n_points=4096),
                                       force_numeric=True)
        fine = joint_entropy_numeric(0, inverse_square_unit, 1.5,
                                     grid=default_grid(0, inverse_square_unit, 1.5,
                                                       n_points=8192),
                                     force_numeric=True)
        assert abs(coarse.s_joint - fine.s_joint) < 1e-8


class TestClosedForms:
    def test_inverse_square_limit(self):
        assert joint_entropy_closed_inverse_square(1.0, 1e-9) == pytest.approx(
            LN_E_OVER_2, abs=1e-12)

    def test_inverse_square_value(self):
        assert joint_entropy_closed_inverse_square(1.0, 1.0) == pytest.approx(
            0.6534264097200273, abs=1e-12)

    def test_inverse_square_ratio_structure(self):
        assert joint_entropy_closed_inverse_square(2.0, 2.0) == pytest.approx(
            joint_entropy_closed_inverse_square(1.0, 1.0), abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(omega0=st.floats(0.2, 5), t1=st.floats(0.1, 10), dt=st.floats(0.01, 5))
    def test_inverse_square_monotone(self, omega0, t1, dt):
        assert (joint_entropy_closed_inverse_square(omega0, t1 + dt)
                > joint_entropy_closed_inverse_square(omega0, t1))

    def test_pulsating_candidate_finite_and_periodic(self, pulsating_unit):
        values = [joint_entropy_closed_pulsating(pulsating_unit, t)
                  for t in (0.1, 0.5, 1.0, 1.4)]
        assert all(np.isfinite(values))
        for t in (0.1, 0.6, 1.2):
            a = joint_entropy_closed_pulsating(pulsating_unit, t)
            b = joint_entropy_closed_pulsating(pulsating_unit, t + math.pi)
            assert a == pytest.approx(b, abs=1e-9)

    def test_pulsating_candidate_disagrees_with_quadrature(self, pulsating_unit):
        # the gap is reported, never hidden: nonzero already at t = 0
        quadrature = joint_entropy_numeric(0, pulsating_unit, 0.0,
                                           force_numeric=True).s_joint
        candidate = joint_entropy_closed_pulsating(pulsating_unit, 0.0)
        assert abs(candidate - quadrature) > 0.1


class TestBoundMargin:
    def test_static_ground_state_margin_zero(self, static_unit):
        rec = joint_entropy_numeric(0, static_unit, 0.3)
        assert leipnik_bound_margin(rec) == pytest.approx(0.0, abs=1e-6)

    def test_inverse_square_margin_closed_form(self, inverse_square_unit):
        for t in (0.5, 1.0, 3.0):
            rec = joint_entropy_numeric(0, inverse_square_unit, t)
            expected = 0.5 * math.log(1.0 + t * t)
            assert leipnik_bound_margin(rec) == pytest.approx(expected, abs=1e-6)

    def test_excited_state_strictly_above(self, static_unit):
        rec = joint_entropy_numeric(1, static_unit, 0.0)
        assert leipnik_bound_margin(rec) > 0.1

    def test_violation_raises(self):
        rec = EntropyRecord(t=0.0, s_x=0.0, s_p=0.0,
                            s_joint=LN_E_OVER_2 - 1e-3, s_closed=None,
                            bound_margin=-1e-3, method="Quadrature")
        with pytest.raises(BoundViolation):
            leipnik_bound_margin(rec)


class TestSweeps:
    def test_parallel_matches_serial(self, inverse_square_unit):
        times = np.linspace(0.5, 3.0, 12)
        serial = entropy_sweep(0, inverse_square_unit, times, max_workers=1)
        parallel = entropy_sweep(0, inverse_square_unit, times, max_workers=4)
        assert [r.s_joint for r in serial] == [r.s_joint for r in parallel]

    def test_pulsating_periodicity_and_fluctuation(self, pulsating_unit):
        period = math.pi
        base = [0.2, 0.5, 0.9, 1.3, 1.8, 2.2, 2.6, 3.0]
        first = entropy_sweep(0, pulsating_unit, base)
        second = entropy_sweep(0, pulsating_unit, [t + period for t in base])
        for a, b in zip(first, second):
            assert abs(a.s_joint - b.s_joint) < 1e-6
        diffs = np.diff([r.s_joint for r in first])
        assert np.any(diffs > 0) and np.any(diffs < 0)

    def test_gaussian_path_matches_quadrature(self, pulsating_unit):
        for t in (0.2, 0.7, 1.2):
            fast = joint_entropy_gaussian(pulsating_unit, t)
            slow = joint_entropy_numeric(0, pulsating_unit, t, force_numeric=True)
            assert fast.s_joint == pytest.approx(slow.s_joint, abs=1e-6)
            assert fast.method == "GaussianAnalytic"
