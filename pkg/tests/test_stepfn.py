import numpy as np
import pytest

from twoflux.errors import DivergentIntegralError, InvalidInputError
from twoflux.stepfn import (
    PiecewiseAffine,
    StepFunction,
    read_staircase,
    write_staircase,
)


class TestStepFunction:
    def test_basic_eval_right_continuous(self):
        w = StepFunction(np.array([0.0, 1.0]), np.array([1.0, 2.0, 3.0]))
        assert w(-0.5) == 1.0
        assert w(0.0) == 2.0   # value at a jump is the right value
        assert w(0.5) == 2.0
        assert w(1.0) == 3.0

    def test_zero_strength_jumps_dropped(self):
        w = StepFunction(np.array([0.0, 1.0]), np.array([1.0, 1.0, 3.0]))
        assert w.jump_count == 1
        assert w.positions[0] == 1.0

    def test_create_with_tolerance(self):
        w = StepFunction.create(np.array([0.0, 1.0]),
                                np.array([1.0, 1.0 + 1e-15, 3.0]), drop_tol=1e-13)
        assert w.jump_count == 1

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            StepFunction(np.array([1.0, 0.0]), np.array([1.0, 2.0, 3.0]))
        with pytest.raises(InvalidInputError):
            StepFunction(np.array([0.0]), np.array([1.0]))

    def test_total_variation(self):
        assert StepFunction.constant(2.0).total_variation() == 0.0
        w = StepFunction(np.array([0.0]), np.array([0.0, 0.75]))
        assert w.total_variation() == 0.75
        w2 = StepFunction(np.array([0.0, 1.0]), np.array([0.0, 1.0, 0.25]))
        assert w2.total_variation() == pytest.approx(1.75)


class TestIndefiniteIntegral:
    def test_constant_is_zero(self):
        w = StepFunction.constant(0.7)
        h = w.indefinite_integral(0.7)
        assert h(123.0) == 0.0

    def test_heaviside_gives_positive_part(self):
        w = StepFunction(np.array([0.0]), np.array([0.3, 1.3]))
        h = w.indefinite_integral(0.3)
        for x in (-2.0, -0.1, 0.0, 0.5, 3.0):
            assert h(x) == pytest.approx(max(x, 0.0), abs=1e-15)

    def test_divergence_guard(self):
        w = StepFunction(np.array([0.0]), np.array([0.3, 1.3]))
        with pytest.raises(DivergentIntegralError):
            w.indefinite_integral(0.2)

    def test_random_against_riemann_sum(self, rng):
        for _ in range(10):
            pos = np.sort(rng.uniform(-1, 1, 5))
            pos += np.arange(5) * 1e-9
            vals = rng.uniform(0, 1, 6)
            w = StepFunction(pos, vals)
            h = w.indefinite_integral(w.left_value)
            xs = np.linspace(-1.5, 1.5, 7)
            for x in xs:
                grid = np.linspace(-2.0, x, 20001)
                approx = np.trapezoid(w(grid) - w.left_value, grid)
                assert h(x) == pytest.approx(float(approx), abs=5e-4)


class TestPiecewiseAffine:
    def test_eval_and_tails(self):
        p = PiecewiseAffine(np.array([0.0, 1.0]), np.array([0.0, 2.0]), -1.0, 0.5)
        assert p(0.5) == pytest.approx(1.0)
        assert p(-1.0) == pytest.approx(1.0)   # 0 + (-1)*(-1)
        assert p(3.0) == pytest.approx(3.0)    # 2 + 0.5*2

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            PiecewiseAffine(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 0.0, 0.0)


class TestStaircaseCsv:
    def test_roundtrip(self, rng):
        pos = np.sort(rng.uniform(-1, 1, 4))
        w = StepFunction(pos, rng.uniform(0, 1, 5))
        again = read_staircase(write_staircase(w))
        assert np.array_equal(again.positions, w.positions)
        assert np.array_equal(again.values, w.values)

    def test_reader_requires_header_row(self):
        with pytest.raises(InvalidInputError):
            read_staircase("0.0,1.0\n1.0,2.0\n")

    def test_reader_skips_comments(self):
        w = read_staircase("# staircase\n-inf,0.5\n0.0,1.5\n")
        assert w.left_value == 0.5
        assert w(1.0) == 1.5
