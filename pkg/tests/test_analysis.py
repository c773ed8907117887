import math

import numpy as np
import pytest

from conftest import random_staircase
from twoflux import analysis
from twoflux.analysis import (
    ErrorRecord,
    bv_bound_rhs,
    fit_rate,
    l1_distance,
    l1_distance_to_profile,
    linf_hat_distance,
    main_bound_rhs,
    records_to_csv,
    total_variation,
)
from twoflux.errors import ConfigError, DivergentIntegralError
from twoflux.problems import experiment
from twoflux.stepfn import PiecewiseAffine, StepFunction


class TestL1Distance:
    def test_identical_is_zero(self, rng):
        w = random_staircase(rng)
        assert l1_distance(w, w) == 0.0

    def test_box_difference(self):
        a = StepFunction(np.array([0.0, 2.0]), np.array([0.3, 0.8, 0.3]))
        b = StepFunction.constant(0.3)
        assert l1_distance(a, b) == pytest.approx(0.5 * 2.0)

    def test_symmetry_random(self, rng):
        for _ in range(20):
            a = random_staircase(rng)
            b = StepFunction(a.positions,
                             np.concatenate([[a.values[0]],
                                             rng.uniform(0, 1, a.values.size - 2),
                                             [a.values[-1]]]))
            assert l1_distance(a, b) == pytest.approx(l1_distance(b, a), abs=1e-15)

    def test_triangle_inequality_random(self, rng):
        for _ in range(20):
            base = random_staircase(rng)

            def variant():
                vals = base.values.copy()
                vals[1:-1] = rng.uniform(0, 1, max(vals.size - 2, 0))
                return StepFunction(base.positions, vals)

            a, b, c = variant(), variant(), variant()
            assert l1_distance(a, c) <= l1_distance(a, b) + l1_distance(b, c) + 1e-12

    def test_mismatched_far_fields_rejected(self):
        a = StepFunction.constant(0.3)
        b = StepFunction.constant(0.4)
        with pytest.raises(DivergentIntegralError):
            l1_distance(a, b)

    def test_against_quadrature(self, rng):
        a = random_staircase(rng)
        vals = a.values.copy()
        vals[1:-1] = rng.uniform(0, 1, max(vals.size - 2, 0))
        b = StepFunction(a.positions, vals)
        xs = np.linspace(-1.2, 1.2, 300001)
        approx = np.trapezoid(np.abs(a(xs) - b(xs)), xs)
        assert l1_distance(a, b) == pytest.approx(float(approx), abs=1e-3)


class TestHatDistance:
    def test_identical_zero(self, rng):
        w = random_staircase(rng)
        assert linf_hat_distance(w, w, w.left_value) == 0.0

    def test_triangle_inequality(self, rng):
        for _ in range(20):
            base = random_staircase(rng)

            def variant():
                vals = base.values.copy()
                vals[1:-1] = rng.uniform(0, 1, max(vals.size - 2, 0))
                return StepFunction(base.positions, vals)

            a, b, c = variant(), variant(), variant()
            dab = linf_hat_distance(a, b, base.left_value)
            dbc = linf_hat_distance(b, c, base.left_value)
            dac = linf_hat_distance(a, c, base.left_value)
            assert dac <= dab + dbc + 1e-12

    def test_sup_attained_on_merged_jumps(self):
        a = StepFunction(np.array([0.0]), np.array([0.0, 1.0]))
        b = StepFunction(np.array([0.5]), np.array([0.0, 1.0]))
        # integrals differ by min(x, 0.5) - min(x, 0) ... max gap is 0.5 at x=0.5
        assert linf_hat_distance(a, b, 0.0) == pytest.approx(0.5)


class TestProfileDistance:
    def test_staircase_vs_ramp(self):
        prof = PiecewiseAffine(np.array([-1.0, 1.0]), np.array([1.0, 0.0]), 0.0, 0.0)
        w = StepFunction(np.array([0.0]), np.array([1.0, 0.0]))
        # |step - ramp| integrates to two triangles of area (1/2)*1*(1/2) each
        assert l1_distance_to_profile(w, prof, -2.0, 2.0) == pytest.approx(0.5)

    def test_exact_match_zero(self):
        prof = PiecewiseAffine(np.array([0.0]), np.array([0.4]), 0.0, 0.0)
        w = StepFunction.constant(0.4)
        assert l1_distance_to_profile(w, prof, -3.0, 3.0) == 0.0


class TestTotalVariation:
    def test_examples(self):
        assert total_variation(StepFunction.constant(1.0)) == 0.0
        assert total_variation(StepFunction(np.array([0.0]), np.array([0.0, 0.7]))) \
            == pytest.approx(0.7)


class TestBoundConstants:
    def test_traffic_values(self):
        prob = experiment("traffic-kl-kr")
        c = prob.bound_constants()
        assert c.Y == pytest.approx(1.0 + 2.0 * 0.5 * 2.0)   # X + 2T max(L)
        assert c.C1 == pytest.approx(1.0 + 0.125 * 0.5 * 4.0)
        assert c.K1 == pytest.approx(2.0 * 0.5 * 2.0 * 0.8 + 0.5 * (0.5 + 0.25))
        assert c.K2 == pytest.approx(1.0 + 0.8)
        assert c.K3 is None
        assert c.tv0 == pytest.approx(0.8)

    def test_equal_flux_k3_is_tv(self):
        prob = experiment("classical-equal-flux")
        c = prob.bound_constants()
        assert c.K3 == pytest.approx(1.0)
        assert c.C1 == pytest.approx(1.0 + 0.125 * 0.5 * 2.0)

    def test_monotone_k3_formula(self):
        prob = experiment("monotone-exp")
        c = prob.bound_constants()
        lip = max(prob.g.lipschitz, prob.f.lipschitz)
        expect = (1.0 + lip * 0.8 + prob.g.sup_norm + prob.f.sup_norm) / prob.rho
        assert c.K3 == pytest.approx(expect)

    def test_zero_horizon_degenerates(self):
        prob = experiment("traffic-kl-kr")
        c = analysis.bound_constants(prob.g, prob.f, prob.u0, prob.X, 0.0,
                                     prob.span)
        assert c.C1 == 1.0
        assert c.K1 == 0.0

    def test_missing_bounds_rejected(self):
        prob = experiment("traffic-kl-kr")

        class Bare:
            lipschitz = None
            deriv2_bound = None

        with pytest.raises(ConfigError):
            analysis.bound_constants(Bare(), prob.f, prob.u0, 1.0, 0.5, 1.0)


class TestBoundRhs:
    def test_zero_delta(self):
        c = experiment("traffic-kl-kr").bound_constants()
        assert main_bound_rhs(c, 0.0) == 0.0

    def test_half_order_scaling(self):
        c = experiment("traffic-kl-kr").bound_constants()
        # rhs ~ sqrt(delta) as delta -> 0: quartering delta halves the rhs
        for delta in (1e-6, 1e-8, 1e-10):
            ratio = main_bound_rhs(c, delta) / main_bound_rhs(c, delta / 4.0)
            assert ratio == pytest.approx(2.0, rel=1e-2)

    def test_unrestricted_adds_data_terms(self):
        c = experiment("traffic-kl-kr").bound_constants()
        delta = 0.01
        gap = 0.003
        assert main_bound_rhs(c, delta, restricted=False, u0_l1_gap=gap) \
            == pytest.approx(main_bound_rhs(c, delta) + delta * c.tv0 + gap)

    def test_bv_rhs_linear_in_delta(self):
        c = experiment("classical-equal-flux").bound_constants()
        assert bv_bound_rhs(c, 0.02) == pytest.approx(
            2.0 * math.sqrt(c.Y * c.K3 * c.C1) * 0.02)
        assert bv_bound_rhs(c, 0.01) == pytest.approx(bv_bound_rhs(c, 0.02) / 2)

    def test_bv_rhs_requires_k3(self):
        c = experiment("traffic-kl-kr").bound_constants()
        with pytest.raises(ConfigError):
            bv_bound_rhs(c, 0.01)


class TestFitRate:
    def _records(self, rate, coef=0.3):
        deltas = [2.0 ** -k for k in range(3, 9)]
        return [ErrorRecord(d, coef * d ** rate, 1.0, 0.0, 1) for d in deltas]

    def test_linear_rate(self):
        fit = fit_rate(self._records(1.0))
        assert fit.slope == pytest.approx(1.0, abs=1e-12)
        assert all(p == pytest.approx(1.0, abs=1e-12) for p in fit.pairwise)

    def test_half_rate(self):
        fit = fit_rate(self._records(0.5))
        assert fit.slope == pytest.approx(0.5, abs=1e-12)

    def test_zero_error_excluded(self):
        recs = self._records(1.0)
        recs[2] = ErrorRecord(recs[2].delta, 0.0, 1.0, 0.0, 1)
        fit = fit_rate(recs)
        assert fit.excluded == (recs[2].delta,)
        assert fit.slope == pytest.approx(1.0, abs=1e-12)

    def test_too_few_records_rejected(self):
        with pytest.raises(ConfigError):
            fit_rate(self._records(1.0)[:2])


class TestCsv:
    def test_schema_and_orders(self):
        recs = [ErrorRecord(0.5, 0.1, 1.0, 0.01, 5),
                ErrorRecord(0.25, 0.05, 0.5, 0.02, 9)]
        text = records_to_csv(recs)
        lines = text.strip().splitlines()
        assert lines[0] == "delta,l1_error,bound_rhs,order_pairwise,runtime_s,front_count"
        first = lines[1].split(",")
        assert first[3] == ""          # no pairwise order for the first record
        second = lines[2].split(",")
        assert float(second[3]) == pytest.approx(1.0)
        assert second[5] == "9"
