import math

import numpy as np
import pytest

from twoflux import fluxes, godunov
from twoflux.fluxes import interpolant_for, traffic_flux, uniform_breakpoints
from twoflux.riemann import (
    FanFront,
    gamma_check,
    solve_classic,
    solve_interface,
)
from twoflux.stepfn import StepFunction


def tent(delta=0.5, k=1.0):
    return fluxes.interpolate(traffic_flux(k), uniform_breakpoints(0, 1, delta, (0.5,)))


def check_fan_structure(fan, q, tol=1e-12):
    speeds = [fr.speed for fr in fan]
    assert all(b > a for a, b in zip(speeds, speeds[1:])), "speeds must increase"
    for left, right in zip(fan.fronts, fan.fronts[1:]):
        assert left.right == right.left, "states must chain"
    for fr in fan:
        lhs = fr.speed * (fr.right - fr.left)
        rhs = float(q(fr.right)) - float(q(fr.left))
        assert abs(lhs - rhs) <= tol * max(1.0, abs(lhs), abs(rhs))


class TestSolveClassic:
    def test_equal_states_empty(self, tent_flux):
        assert len(solve_classic(tent_flux, 0.3, 0.3)) == 0

    def test_rising_data_single_zero_speed_front(self, tent_flux):
        fan = solve_classic(tent_flux, 0.0, 1.0)
        assert len(fan) == 1
        assert fan.fronts[0] == FanFront(0.0, 0.0, 1.0)

    def test_falling_data_two_front_fan(self, tent_flux):
        fan = solve_classic(tent_flux, 1.0, 0.0)
        assert [fr.speed for fr in fan] == [-0.5, 0.5]
        assert [fr.left for fr in fan] == [1.0, 0.5]
        assert [fr.right for fr in fan] == [0.5, 0.0]
        check_fan_structure(fan, tent_flux)

    def test_random_fans_satisfy_rh_and_ordering(self, rng):
        q = interpolant_for(fluxes.crossing_cubic_flux(), 0.07)
        for _ in range(100):
            ul, ur = rng.uniform(0, 1, 2)
            fan = solve_classic(q, ul, ur)
            check_fan_structure(fan, q)
            if fan.fronts:
                assert fan.fronts[0].left == ul
                assert fan.fronts[-1].right == ur

    def test_fan_matches_fine_godunov(self, rng):
        # wave structure oracle: the scheme run on the same Riemann data
        q = tent(2.0 ** -4)
        ul, ur = 0.85, 0.15
        fan = solve_classic(q, ul, ur)
        u0 = StepFunction(np.array([0.0]), np.array([ul, ur]))
        grid = godunov.run(q, q, u0, ul, ur, X=0.25, T=0.5, dx=2.0 ** -9)
        prof = godunov.profile(grid)
        t = grid.time
        xs = np.linspace(-0.6, 0.6, 400)
        exact = np.empty_like(xs)
        for i, x in enumerate(xs):
            val = ul
            for fr in fan:
                if x >= fr.speed * t:
                    val = fr.right
            exact[i] = val
        assert np.mean(np.abs(prof(xs) - exact)) < 0.02


class TestGammaCheck:
    def test_degenerate_pair_passes(self, tent_flux):
        res = gamma_check(tent_flux, tent_flux, 0.5, 0.5)
        assert res.passed
        assert res.witness == pytest.approx(0.5)

    def test_traffic_trace_pairs_pass(self):
        g = tent(2.0 ** -6, 1.0)
        f = tent(2.0 ** -6, 2.0)
        # fast road downstream: left trace at the g-vertex
        up = solve_interface(g, f, 0.5, 0.5).trace.u_plus
        assert gamma_check(g, f, 0.5, up).passed
        # slow road downstream: right trace at the f-vertex, queue state on the left
        um = solve_interface(f, g, 0.5, 0.5).trace.u_minus
        assert gamma_check(f, g, um, 0.5).passed

    def test_literal_decreasing_branch_pair_fails(self):
        # (0.5, (1+sqrt(0.5))/2) fails: the flux levels differ at interpolant
        # resolution, so the level-matching requirement already rejects it
        g = tent(2.0 ** -6, 1.0)
        f = tent(2.0 ** -6, 2.0)
        assert not gamma_check(g, f, 0.5, (1 + math.sqrt(0.5)) / 2).passed

    def test_rejects_hump_between_traces(self):
        # level matches exactly, but both fluxes rise far above the common
        # level between the traces, so no intermediate state can connect them
        g = tent(2.0 ** -6, 1.0)
        f = tent(2.0 ** -6, 2.0)
        level = 0.125
        half = 2 ** 5  # index of the vertex breakpoint
        # u_minus on the falling branch of g, u_plus on the rising branch of f
        um = float(np.interp(-level, -g.values[half:], g.breakpoints[half:]))
        up = float(np.interp(level, f.values[: half + 1], f.breakpoints[: half + 1]))
        assert abs(float(g(um)) - float(f(up))) < 1e-12
        assert up < 0.5 < um
        assert not gamma_check(g, f, um, up).passed


class TestSolveInterface:
    def test_equal_fluxes_reduce_to_classic(self, rng):
        q = tent(2.0 ** -5)
        for _ in range(40):
            ul, ur = rng.uniform(0, 1, 2)
            sol = solve_interface(q, q, ul, ur)
            assert abs(float(q(sol.trace.u_minus)) - float(q(sol.trace.u_plus))) < 1e-10
            whole = solve_classic(q, ul, ur)
            left = [fr for fr in whole if fr.speed < -1e-14]
            right = [fr for fr in whole if fr.speed > 1e-14]
            assert [fr.speed for fr in sol.left_fan] == pytest.approx(
                [fr.speed for fr in left])
            assert [fr.speed for fr in sol.right_fan] == pytest.approx(
                [fr.speed for fr in right])

    def test_traffic_acceleration_case(self):
        # capacity doubles across the interface: upstream stays at its vertex,
        # downstream takes the same flux on the rising branch
        delta = 2.0 ** -8
        g = tent(delta, 1.0)
        f = tent(delta, 2.0)
        sol = solve_interface(g, f, 0.5, 0.5)
        assert sol.trace.u_minus == pytest.approx(0.5, abs=1e-12)
        assert sol.trace.flux_level == pytest.approx(0.25, abs=1e-12)
        analytic = (1 - math.sqrt(0.5)) / 2
        assert sol.trace.u_plus == pytest.approx(analytic, abs=5 * delta ** 2)
        assert len(sol.left_fan) == 0
        assert all(fr.speed > 0 for fr in sol.right_fan)

    def test_traffic_bottleneck_case(self):
        # capacity halves: downstream at its vertex, a queue shock runs back
        delta = 2.0 ** -8
        g = tent(delta, 2.0)
        f = tent(delta, 1.0)
        sol = solve_interface(g, f, 0.5, 0.5)
        assert sol.trace.u_plus == pytest.approx(0.5, abs=1e-12)
        assert sol.trace.flux_level == pytest.approx(0.25, abs=1e-12)
        analytic = (1 + math.sqrt(0.5)) / 2
        assert sol.trace.u_minus == pytest.approx(analytic, abs=5 * delta ** 2)
        assert len(sol.left_fan) == 1
        assert sol.left_fan.fronts[0].speed == pytest.approx(-1 / math.sqrt(2), abs=1e-2)

    def test_flux_continuity_and_sides(self, rng):
        combos = [
            (tent(2.0 ** -5, 1.0), tent(2.0 ** -5, 2.0)),
            (interpolant_for(fluxes.monotone_exp_flux(2.0), 2.0 ** -5),
             interpolant_for(fluxes.monotone_exp_flux(1.0), 2.0 ** -5)),
            (interpolant_for(fluxes.crossing_cubic_flux(), 2.0 ** -5),
             tent(2.0 ** -5, 1.0)),
        ]
        for g, f in combos:
            for _ in range(40):
                ul, ur = rng.uniform(0, 1, 2)
                sol = solve_interface(g, f, ul, ur)
                assert abs(float(g(sol.trace.u_minus)) - float(f(sol.trace.u_plus))) < 1e-10
                assert all(fr.speed < 0 for fr in sol.left_fan)
                assert all(fr.speed > 0 for fr in sol.right_fan)
                assert gamma_check(g, f, sol.trace.u_minus, sol.trace.u_plus).passed
                check_fan_structure(sol.left_fan, g)
                check_fan_structure(sol.right_fan, f)
                if sol.left_fan.fronts:
                    assert sol.left_fan.fronts[0].left == ul
                if sol.right_fan.fronts:
                    assert sol.right_fan.fronts[-1].right == ur

    def test_monotone_fluxes_pass_everything_right(self, rng):
        g = interpolant_for(fluxes.monotone_exp_flux(2.0), 2.0 ** -5)
        f = interpolant_for(fluxes.monotone_exp_flux(1.0), 2.0 ** -5)
        for _ in range(30):
            ul, ur = rng.uniform(0, 1, 2)
            sol = solve_interface(g, f, ul, ur)
            assert len(sol.left_fan) == 0
            assert sol.trace.u_minus == pytest.approx(ul)

    def test_traces_match_fine_godunov(self):
        # oracle: cells adjacent to the interface on refining grids
        delta = 2.0 ** -4
        g = tent(delta, 1.0)
        f = tent(delta, 2.0)
        for ul, ur in [(0.5, 0.5), (0.9, 0.1), (0.2, 0.8)]:
            sol = solve_interface(g, f, ul, ur)
            errs = []
            for dx in (2.0 ** -6, 2.0 ** -7, 2.0 ** -8):
                u0 = StepFunction(np.array([0.0]), np.array([ul, ur]))
                grid = godunov.run(g, f, u0, ul, ur, X=0.25, T=0.5, dx=dx)
                j0 = -grid.j_lo
                um_num = grid.cells[j0 - 1]
                up_num = grid.cells[j0 + 1]
                errs.append(abs(um_num - sol.trace.u_minus)
                            + abs(up_num - sol.trace.u_plus))
            if errs[0] > 1e-10:
                assert errs[0] > errs[1] > errs[2], (ul, ur, errs)
            else:
                # traces resolved exactly on every grid; nothing left to decrease
                assert max(errs) < 1e-10
            assert errs[2] < 0.05


class TestZeroSpeedAbsorption:
    def test_flat_segment_folds_into_trace(self):
        # flux with an exactly flat segment: a standing wave joins the trace jump
        bp = np.array([0.0, 0.25, 0.75, 1.0])
        val = np.array([0.0, 0.1875, 0.1875, 0.0])
        q = fluxes.PiecewiseLinearFlux(bp, val)
        sol = solve_interface(q, q, 1.0, 0.0)
        assert all(abs(fr.speed) > 1e-14 for fr in sol.left_fan)
        assert all(abs(fr.speed) > 1e-14 for fr in sol.right_fan)
        assert {sol.trace.u_minus, sol.trace.u_plus} == {0.75, 0.25}
        assert gamma_check(q, q, sol.trace.u_minus, sol.trace.u_plus).passed
