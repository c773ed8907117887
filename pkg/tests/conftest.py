import numpy as np
import pytest

from twoflux import fluxes, problems


@pytest.fixture
def tent_flux():
    """u(1-u) interpolated with breakpoints {0, 0.5, 1}."""
    return fluxes.interpolate(fluxes.traffic_flux(1.0), np.array([0.0, 0.5, 1.0]))


@pytest.fixture
def traffic_problem():
    return problems.experiment("traffic-kl-kr")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_staircase(rng, x_radius=0.9, lo=0.02, hi=0.98, max_jumps=10):
    from twoflux.stepfn import StepFunction

    nj = int(rng.integers(1, max_jumps))
    pos = np.sort(rng.uniform(-x_radius, x_radius, nj))
    pos = pos[np.concatenate([[True], np.diff(pos) > 1e-9])]
    vals = rng.uniform(lo, hi, pos.size + 1)
    return StepFunction(pos, vals)
