"""Flux functions: smooth fluxes with certified bounds and their piecewise-linear
interpolants, plus the flux-level primitives the solvers are built from
(interval extrema / Godunov numerical flux, convex and concave envelopes,
crossing detection).

All flux objects are immutable and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, InvalidPartitionError, StateDomainError

DENSE_GRID = 16384        # sample count used for sup-norm style estimates
_SEED_GRID = 1024         # seed grid for smooth-flux interval extrema
CROSSING_TOL = 1e-12      # |f - g| tolerance when locating crossings

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SmoothFlux:
    """A C2 flux on [u_min, u_max] with certified Lipschitz and curvature bounds.

    The bounds (`lipschitz`, `deriv2_bound`, `sup_norm`) feed the error-bound
    formulas, so they must be true bounds, not samples.  Built-in fluxes supply
    them in closed form; user fluxes must provide them explicitly.
    """

    fn: Callable
    lipschitz: float
    deriv2_bound: float
    u_min: float = 0.0
    u_max: float = 1.0
    sup_norm: float | None = None
    min_slope: float = 0.0            # positive rho for strictly increasing fluxes
    critical_points: tuple | None = None  # ALL interior critical points, or None if unknown
    label: str = "flux"

    def __post_init__(self):
        if self.u_min >= self.u_max:
            raise ConfigError("flux domain must satisfy u_min < u_max")
        u = np.linspace(self.u_min, self.u_max, DENSE_GRID)
        vals = np.asarray(self.fn(u))
        slopes = np.abs(np.diff(vals) / np.diff(u))
        if slopes.max() > self.lipschitz + 1e-9 * max(1.0, self.lipschitz):
            raise ConfigError(
                f"claimed Lipschitz bound {self.lipschitz} is below sampled "
                f"slope {slopes.max():.6g} for {self.label}"
            )
        if self.sup_norm is None:
            object.__setattr__(self, "sup_norm", float(np.max(np.abs(vals))))

    def __call__(self, u):
        return self.fn(u)

    def check_domain(self, *states):
        for u in states:
            if not (self.u_min - 1e-12 <= u <= self.u_max + 1e-12):
                raise StateDomainError(
                    f"state {u} outside [{self.u_min}, {self.u_max}] for {self.label}"
                )


@dataclass(frozen=True)
class PiecewiseLinearFlux:
    """Continuous piecewise-linear flux given by nodal values at breakpoints."""

    breakpoints: np.ndarray
    values: np.ndarray
    label: str = "pwl"

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        val = np.asarray(self.values, dtype=float)
        if bp.size != val.size or bp.size < 2:
            raise InvalidPartitionError("need matching breakpoints/values, at least two")
        if np.any(np.diff(bp) <= 0):
            raise InvalidPartitionError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", val)
        object.__setattr__(self, "_slopes", np.diff(val) / np.diff(bp))

    @property
    def u_min(self) -> float:
        return float(self.breakpoints[0])

    @property
    def u_max(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def mesh(self) -> float:
        """Maximum breakpoint spacing (the interpolation parameter)."""
        return float(np.max(np.diff(self.breakpoints)))

    @property
    def slopes(self) -> np.ndarray:
        return self._slopes

    @property
    def lipschitz(self) -> float:
        return float(np.max(np.abs(self._slopes)))

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __call__(self, u):
        return np.interp(u, self.breakpoints, self.values)

    def check_domain(self, *states):
        for u in states:
            if not (self.u_min - 1e-12 <= u <= self.u_max + 1e-12):
                raise StateDomainError(
                    f"state {u} outside [{self.u_min}, {self.u_max}] for {self.label}"
                )

    def restricted(self, a: float, b: float, label: str | None = None) -> "PiecewiseLinearFlux":
        """The same flux restricted to [a, b] in its domain."""
        if not (self.u_min - 1e-12 <= a <= b <= self.u_max + 1e-12):
            raise StateDomainError(f"[{a}, {b}] not inside [{self.u_min}, {self.u_max}]")
        if a == b:
            raise InvalidPartitionError("degenerate restriction interval")
        inner = self.breakpoints[(self.breakpoints > a) & (self.breakpoints < b)]
        bp = np.concatenate([[a], inner, [b]])
        return PiecewiseLinearFlux(bp, self(bp), label or self.label)


@dataclass(frozen=True)
class Crossing:
    """A sign-changing zero of f - g.  sign_after is the sign of f - g just right of it."""

    location: float
    sign_after: int


def uniform_breakpoints(
    u_min: float, u_max: float, delta: float, critical: Sequence[float] = ()
) -> np.ndarray:
    """Breakpoints with spacing <= delta: uniform grid plus optional interior critical points."""
    if delta <= 0:
        raise InvalidPartitionError("delta must be positive")
    n = max(1, math.ceil((u_max - u_min) / delta - 1e-12))
    bp = np.linspace(u_min, u_max, n + 1)
    extra = [c for c in critical if u_min < c < u_max]
    if extra:
        bp = np.union1d(bp, np.asarray(extra, dtype=float))
    return bp


def interpolate(q, breakpoints) -> PiecewiseLinearFlux:
    """Piecewise-linear interpolant of q at the given breakpoints."""
    bp = np.asarray(breakpoints, dtype=float)
    if bp.size < 2 or np.any(np.diff(bp) <= 0):
        raise InvalidPartitionError("breakpoints must be strictly increasing, length >= 2")
    if isinstance(q, SmoothFlux):
        if not (abs(bp[0] - q.u_min) < 1e-12 and abs(bp[-1] - q.u_max) < 1e-12):
            raise InvalidPartitionError(
                f"breakpoints must span [{q.u_min}, {q.u_max}], got [{bp[0]}, {bp[-1]}]"
            )
    vals = np.asarray(q(bp), dtype=float)
    out = PiecewiseLinearFlux(bp, vals, label=getattr(q, "label", "pwl"))
    lip = getattr(q, "lipschitz", None)
    if lip is not None and out.lipschitz > lip + 1e-9 * max(1.0, lip):
        raise InvalidPartitionError(
            f"interpolant Lipschitz {out.lipschitz} exceeds smooth bound {lip}"
        )
    return out


def interpolant_for(q: SmoothFlux, delta: float, include_critical: bool = True) -> PiecewiseLinearFlux:
    crit = q.critical_points if include_critical else ()
    return interpolate(q, uniform_breakpoints(q.u_min, q.u_max, delta, crit))


def sup_gap(q, qd, grid: int = DENSE_GRID) -> float:
    """max |q - qd| over a dense sample grid.

    Exact at union breakpoints when both fluxes are piecewise linear.  For a
    smooth flux against an interpolant, breakpoints and segment midpoints are
    added to the grid; midpoints carry the extremum exactly for quadratics.
    """
    if isinstance(q, PiecewiseLinearFlux) and isinstance(qd, PiecewiseLinearFlux):
        u = np.union1d(q.breakpoints, qd.breakpoints)
    else:
        lo = max(getattr(q, "u_min"), getattr(qd, "u_min"))
        hi = min(getattr(q, "u_max"), getattr(qd, "u_max"))
        u = np.linspace(lo, hi, grid)
        for flux in (q, qd):
            if isinstance(flux, PiecewiseLinearFlux):
                bp = flux.breakpoints
                u = np.union1d(np.union1d(u, bp), 0.5 * (bp[:-1] + bp[1:]))
    return float(np.max(np.abs(np.asarray(q(u)) - np.asarray(qd(u)))))


def _golden_extremum(fn, a: float, b: float, sign: float) -> float:
    """Minimum of sign*fn over [a, b]: coarse seed grid plus golden-section refinement."""
    xs = np.linspace(a, b, _SEED_GRID)
    ys = sign * np.asarray(fn(xs))
    i = int(np.argmin(ys))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, _SEED_GRID - 1)]
    best = ys[i]
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1 = sign * fn(x1)
    f2 = sign * fn(x2)
    for _ in range(60):
        if hi - lo < 1e-14 * max(1.0, abs(lo) + abs(hi)):
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = sign * fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = sign * fn(x2)
    return float(sign * min(best, f1, f2))


def interval_min(q, a: float, b: float) -> float:
    """min of q over [a, b]; exact over breakpoints for piecewise-linear fluxes.

    Smooth fluxes with a complete critical-point list are also exact (the
    extremum sits at an endpoint or a critical point); otherwise a seeded
    golden-section search is used.
    """
    if a > b:
        a, b = b, a
    if isinstance(q, PiecewiseLinearFlux):
        lo = float(q(a))
        hi = float(q(b))
        i0 = np.searchsorted(q.breakpoints, a, side="right")
        i1 = np.searchsorted(q.breakpoints, b, side="left")
        inner = q.values[i0:i1]
        m = min(lo, hi)
        return min(m, float(np.min(inner))) if inner.size else m
    if a == b:
        return float(q(a))
    if q.critical_points is not None:
        cand = [a, b] + [c for c in q.critical_points if a < c < b]
        return float(min(q(c) for c in cand))
    return _golden_extremum(q, a, b, +1.0)


def interval_max(q, a: float, b: float) -> float:
    if a > b:
        a, b = b, a
    if isinstance(q, PiecewiseLinearFlux):
        lo = float(q(a))
        hi = float(q(b))
        i0 = np.searchsorted(q.breakpoints, a, side="right")
        i1 = np.searchsorted(q.breakpoints, b, side="left")
        inner = q.values[i0:i1]
        m = max(lo, hi)
        return max(m, float(np.max(inner))) if inner.size else m
    if a == b:
        return float(q(a))
    if q.critical_points is not None:
        cand = [a, b] + [c for c in q.critical_points if a < c < b]
        return float(max(q(c) for c in cand))
    return _golden_extremum(q, a, b, -1.0)


def godunov_flux(q, v, u) -> float:
    """Godunov numerical flux qbar(v, u): min of q on [u, v] if u <= v, else max on [v, u].

    Monotone (nondecreasing in u, nonincreasing in v), consistent, Lipschitz in
    each argument with the flux's own constant.
    """
    q.check_domain(u, v)
    if u <= v:
        return interval_min(q, u, v)
    return interval_max(q, v, u)


def godunov_flux_gap(q, qd, v, u) -> float:
    """|qbar_delta(v,u) - qbar(v,u)|, the quantity bounded by sup_gap(q, qd)."""
    return abs(godunov_flux(qd, v, u) - godunov_flux(q, v, u))


def _lower_hull(xs: np.ndarray, ys: np.ndarray):
    hull_x: list[float] = []
    hull_y: list[float] = []
    for x, y in zip(xs, ys):
        while len(hull_x) >= 2:
            x1, y1 = hull_x[-2], hull_y[-2]
            x2, y2 = hull_x[-1], hull_y[-1]
            # pop the middle point unless the turn is strictly convex
            if (y2 - y1) * (x - x2) >= (y - y2) * (x2 - x1):
                hull_x.pop()
                hull_y.pop()
            else:
                break
        hull_x.append(float(x))
        hull_y.append(float(y))
    return np.array(hull_x), np.array(hull_y)


def lower_convex_envelope(q: PiecewiseLinearFlux, a: float, b: float) -> PiecewiseLinearFlux:
    """Greatest convex function <= q on [a, b]; slopes are strictly increasing."""
    r = q.restricted(a, b)
    hx, hy = _lower_hull(r.breakpoints, r.values)
    if hx.size == 1:
        hx = np.array([a, b])
        hy = np.array([hy[0], hy[0]])
    return PiecewiseLinearFlux(hx, hy, label=f"conv({q.label})")


def upper_concave_envelope(q: PiecewiseLinearFlux, a: float, b: float) -> PiecewiseLinearFlux:
    """Least concave function >= q on [a, b] (lower envelope of -q, negated)."""
    r = q.restricted(a, b)
    hx, hy = _lower_hull(r.breakpoints, -r.values)
    if hx.size == 1:
        hx = np.array([a, b])
        hy = np.array([hy[0], hy[0]])
    return PiecewiseLinearFlux(hx, -hy, label=f"conc({q.label})")


def find_crossings(f: PiecewiseLinearFlux, g: PiecewiseLinearFlux, tol: float = CROSSING_TOL):
    """Sign-changing interior zeros of f - g.

    Returns a list of Crossing.  Intervals where f - g vanishes identically are
    a degenerate overlap, not a crossing; retrieve them with flux_overlaps.
    """
    u = np.union1d(f.breakpoints, g.breakpoints)
    d = np.asarray(f(u)) - np.asarray(g(u))
    zero = np.abs(d) <= tol
    crossings: list[Crossing] = []
    prev_sign = 0
    prev_zero_start = None
    for k in range(u.size):
        if zero[k]:
            if prev_zero_start is None:
                prev_zero_start = k
            continue
        sign = 1 if d[k] > 0 else -1
        if prev_zero_start is not None:
            # run of exact zeros ended; a single zero node with a sign change is a crossing
            if prev_sign != 0 and sign != prev_sign and prev_zero_start == k - 1:
                crossings.append(Crossing(float(u[k - 1]), sign))
            prev_zero_start = None
        elif prev_sign != 0 and sign != prev_sign:
            # affine segment with a strict sign change: closed-form root
            z = u[k - 1] + d[k - 1] * (u[k] - u[k - 1]) / (d[k - 1] - d[k])
            crossings.append(Crossing(float(z), sign))
        prev_sign = sign
    return crossings


def flux_overlaps(f: PiecewiseLinearFlux, g: PiecewiseLinearFlux, tol: float = CROSSING_TOL):
    """Maximal intervals where f - g vanishes identically (degenerate-overlap diagnostic)."""
    u = np.union1d(f.breakpoints, g.breakpoints)
    d = np.abs(np.asarray(f(u)) - np.asarray(g(u))) <= tol
    out = []
    start = None
    for k in range(u.size):
        if d[k]:
            if start is None:
                start = k
        else:
            if start is not None and k - start >= 2:
                out.append((float(u[start]), float(u[k - 1])))
            start = None
    if start is not None and u.size - start >= 2:
        out.append((float(u[start]), float(u[-1])))
    return out


# ---------------------------------------------------------------------------
# built-in flux catalog
# ---------------------------------------------------------------------------


def traffic_flux(k: float = 1.0) -> SmoothFlux:
    """k * u * (1 - u) on [0, 1]: the concave road-capacity flux."""
    k = float(k)
    return SmoothFlux(
        fn=lambda u, k=k: k * np.asarray(u) * (1.0 - np.asarray(u)),
        lipschitz=k,
        deriv2_bound=2.0 * k,
        sup_norm=k / 4.0,
        critical_points=(0.5,),
        label=f"traffic(k={k:g})",
    )


def concave_burgers_flux(c: float = 1.0) -> SmoothFlux:
    """c * (2u - u^2) on [0, 1]: increasing concave quadratic."""
    c = float(c)
    return SmoothFlux(
        fn=lambda u, c=c: c * np.asarray(u) * (2.0 - np.asarray(u)),
        lipschitz=2.0 * c,
        deriv2_bound=2.0 * c,
        sup_norm=c,
        critical_points=(),
        label=f"concave-burgers(c={c:g})",
    )


def monotone_exp_flux(a: float = 1.0) -> SmoothFlux:
    """(e^{a u} - 1) / (e^a - 1) on [0, 1]: strictly increasing, slope >= a/(e^a - 1)."""
    a = float(a)
    den = math.expm1(a)
    return SmoothFlux(
        fn=lambda u, a=a, den=den: np.expm1(a * np.asarray(u)) / den,
        lipschitz=a * math.exp(a) / den,
        deriv2_bound=a * a * math.exp(a) / den,
        sup_norm=1.0,
        min_slope=a / den,
        critical_points=(),
        label=f"monotone-exp(a={a:g})",
    )


def crossing_cubic_flux() -> SmoothFlux:
    """u(1-u)(0.5+u) on [0, 1]: crosses u(1-u) once, at u = 0.5."""
    # q' = 0.5 + u - 3u^2, zero at (1+sqrt(7))/6; q'' = 1 - 6u, max |q''| at u = 1
    root = (1.0 + math.sqrt(7.0)) / 6.0
    peak = root * (1.0 - root) * (0.5 + root)
    return SmoothFlux(
        fn=lambda u: np.asarray(u) * (1.0 - np.asarray(u)) * (0.5 + np.asarray(u)),
        lipschitz=1.5,
        deriv2_bound=5.0,
        sup_norm=peak,
        critical_points=(root,),
        label="crossing-cubic",
    )


_BUILTINS = {
    "traffic": (traffic_flux, {"k": 1.0}),
    "concave-burgers": (concave_burgers_flux, {"c": 1.0}),
    "monotone-exp": (monotone_exp_flux, {"a": 1.0}),
    "crossing-cubic": (crossing_cubic_flux, {}),
}


def builtin_flux(name: str, **params) -> SmoothFlux:
    try:
        factory, defaults = _BUILTINS[name]
    except KeyError:
        raise ConfigError(
            f"unknown flux '{name}'; built-ins: {sorted(_BUILTINS)}"
        ) from None
    kwargs = dict(defaults)
    for key, value in params.items():
        if key not in defaults:
            raise ConfigError(f"flux '{name}' takes no parameter '{key}'")
        kwargs[key] = value
    return factory(**kwargs)


def parse_flux_spec(spec: str):
    """Parse a one-line flux description.

    Formats:
      'traffic k=2'                      -> named built-in with parameters
      'table 0,0 0.5,0.25 1,0'           -> literal breakpoint table
    """
    parts = spec.strip().split()
    if not parts:
        raise ConfigError("empty flux spec")
    if parts[0] == "table":
        try:
            pairs = [tuple(float(t) for t in item.split(",")) for item in parts[1:]]
            bp = np.array([p[0] for p in pairs])
            val = np.array([p[1] for p in pairs])
        except (ValueError, IndexError):
            raise ConfigError(f"malformed flux table: {spec!r}") from None
        return PiecewiseLinearFlux(bp, val, label="table")
    params = {}
    for item in parts[1:]:
        if "=" not in item:
            raise ConfigError(f"malformed flux parameter {item!r} in {spec!r}")
        key, value = item.split("=", 1)
        params[key] = float(value)
    return builtin_flux(parts[0], **params)
