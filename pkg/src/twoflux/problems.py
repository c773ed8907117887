"""Problem definitions and the built-in experiment registry."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analysis, discretize, fluxes, godunov, tracker
from .errors import ConfigError, InvalidInputError
from .fluxes import PiecewiseLinearFlux
from .stepfn import PiecewiseAffine, StepFunction


@dataclass(frozen=True)
class TwoFluxProblem:
    """The full problem datum: flux pair, initial data, states and horizon."""

    g: object                  # flux for x < 0
    f: object                  # flux for x > 0
    u0: StepFunction
    X: float
    T: float
    u_min: float = 0.0
    u_max: float = 1.0
    rho: float | None = None   # common lower bound on f', g' when both increase
    exact: object = None       # optional t -> PiecewiseAffine exact profile
    name: str = "custom"

    def __post_init__(self):
        if self.T <= 0 or self.X <= 0:
            raise ConfigError("need positive horizon T and support radius X")
        self.u0.check_range(self.u_min, self.u_max)
        if self.u0.positions.size and (
            self.u0.positions[0] <= -self.X or self.u0.positions[-1] > self.X
        ):
            raise InvalidInputError("initial data must be constant outside [-X, X]")

    @property
    def u_left(self) -> float:
        return self.u0.left_value

    @property
    def u_right(self) -> float:
        return self.u0.right_value

    @property
    def equal_flux(self) -> bool:
        return self.g is self.f

    @property
    def span(self) -> float:
        return self.u_max - self.u_min

    def interpolants(self, delta: float):
        """(g_delta, f_delta) at mesh delta; shared breakpoints for both fluxes."""
        crit = []
        for q in (self.g, self.f):
            crit.extend(getattr(q, "critical_points", ()) or ())
        bp = fluxes.uniform_breakpoints(self.u_min, self.u_max, delta, crit)
        out = []
        for q in (self.g, self.f):
            if isinstance(q, PiecewiseLinearFlux):
                # refining an already piecewise-linear flux reproduces it exactly
                out.append(fluxes.interpolate(q, np.union1d(bp, q.breakpoints)))
            else:
                out.append(fluxes.interpolate(q, bp))
        return out[0], out[1]

    def initial_data(self, delta: float, restricted: bool = True) -> StepFunction:
        """Front tracking initial staircase at mesh delta."""
        if restricted:
            part = discretize.bv_partition(self.u0, self.X, delta)
            return discretize.project_restricted(self.u0, part)
        return self.u0

    def tracker_state(self, delta: float, restricted: bool = True,
                      **kwargs) -> tracker.FrontTrackingState:
        gd, fd = self.interpolants(delta)
        u0d = self.initial_data(delta, restricted)
        return tracker.init(gd, fd, u0d, self.T, **kwargs)

    def cfl_lambda(self) -> float:
        return godunov.cfl_lambda(self.g, self.f)

    def bound_constants(self) -> analysis.BoundConstants:
        return analysis.bound_constants(
            self.g, self.f, self.u0, self.X, self.T, self.span,
            rho=self.rho, equal_flux=self.equal_flux,
        )

    def exact_solution(self, t: float) -> PiecewiseAffine | None:
        """Exact profile by characteristics, when one is known for this datum."""
        if self.exact is None:
            return None
        return self.exact(t)


def riemann_data(u_left: float, u_right: float) -> StepFunction:
    return StepFunction(np.array([0.0]), np.array([float(u_left), float(u_right)]))


def quadratic_rarefaction(k: float):
    """Exact centered rarefaction of u_t + (k u (1-u))_x = 0 with data 1 -> 0.

    Characteristic speeds run from -k (at u = 1) to +k (at u = 0); the profile
    u = (1 - x/(k t)) / 2 is affine in x, so it is returned exactly.
    """

    def profile(t: float) -> PiecewiseAffine:
        if t <= 0:
            raise ConfigError("exact rarefaction profile needs t > 0")
        return PiecewiseAffine(np.array([-k * t, k * t]), np.array([1.0, 0.0]), 0.0, 0.0)

    return profile


def _traffic_kl_kr() -> TwoFluxProblem:
    return TwoFluxProblem(
        g=fluxes.traffic_flux(1.0),
        f=fluxes.traffic_flux(2.0),
        u0=riemann_data(0.9, 0.1),
        X=1.0, T=0.5,
        name="traffic-kl-kr",
    )


def _monotone_exp() -> TwoFluxProblem:
    g = fluxes.monotone_exp_flux(2.0)
    f = fluxes.monotone_exp_flux(1.0)
    return TwoFluxProblem(
        g=g, f=f,
        u0=riemann_data(0.9, 0.1),
        X=1.0, T=0.5,
        rho=min(g.min_slope, f.min_slope),
        name="monotone-exp",
    )


def _classical_equal_flux() -> TwoFluxProblem:
    q = fluxes.traffic_flux(1.0)
    return TwoFluxProblem(
        g=q, f=q,
        u0=riemann_data(1.0, 0.0),
        X=1.0, T=0.5,
        exact=quadratic_rarefaction(1.0),
        name="classical-equal-flux",
    )


def _crossing_demo() -> TwoFluxProblem:
    return TwoFluxProblem(
        g=fluxes.crossing_cubic_flux(),
        f=fluxes.traffic_flux(1.0),
        u0=StepFunction(np.array([-0.5, 0.0, 0.4]), np.array([0.8, 0.55, 0.25, 0.3])),
        X=1.0, T=0.5,
        name="crossing-demo",
    )


EXPERIMENTS = {
    "traffic-kl-kr": _traffic_kl_kr,
    "monotone-exp": _monotone_exp,
    "classical-equal-flux": _classical_equal_flux,
    "crossing-demo": _crossing_demo,
}


def experiment(name: str) -> TwoFluxProblem:
    try:
        factory = EXPERIMENTS[name]
    except KeyError:
        raise ConfigError(
            f"unknown experiment '{name}'; built-ins: {sorted(EXPERIMENTS)}"
        ) from None
    return factory()
