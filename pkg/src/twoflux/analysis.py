"""Error measurement and the explicit bound constants.

Distances between staircases are integrated exactly over merged partitions.
The bound constants reproduce the closed-form coefficients of the half-order
and first-order error estimates from certified flux bounds, so every
convergence study can check measured errors against the guaranteed right-hand
sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DivergentIntegralError
from .stepfn import PiecewiseAffine, StepFunction


def total_variation(w: StepFunction) -> float:
    """Sum of jump strengths."""
    return w.total_variation()


def l1_distance(a: StepFunction, b: StepFunction) -> float:
    """Exact integral of |a - b|; far fields must agree on both sides."""
    if a.left_value != b.left_value or a.right_value != b.right_value:
        raise DivergentIntegralError(
            f"far fields differ: ({a.left_value}, {a.right_value}) vs "
            f"({b.left_value}, {b.right_value})"
        )
    xs = np.union1d(a.positions, b.positions)
    if xs.size < 2:
        return 0.0
    # value on each finite merged cell [xs[k], xs[k+1]); outer cells contribute 0
    va = a(xs[:-1])
    vb = b(xs[:-1])
    return float(np.sum(np.abs(va - vb) * np.diff(xs)))


def linf_hat_distance(a: StepFunction, b: StepFunction, u_left: float) -> float:
    """Sup-norm distance of the indefinite integrals of a and b.

    Both integrands are piecewise constant, so the difference of integrals is
    piecewise affine and the sup is attained at a merged jump position.
    """
    ha = a.indefinite_integral(u_left)
    hb = b.indefinite_integral(u_left)
    if a.right_value != b.right_value:
        raise DivergentIntegralError("right far fields differ; sup distance diverges")
    xs = np.union1d(ha.knots, hb.knots)
    return float(np.max(np.abs(ha(xs) - hb(xs))))


def l1_distance_to_profile(w: StepFunction, prof: PiecewiseAffine,
                           x_lo: float, x_hi: float) -> float:
    """Exact integral of |w - prof| over [x_lo, x_hi] for piecewise-affine prof."""
    xs = np.union1d(np.union1d(w.positions, prof.knots), [x_lo, x_hi])
    xs = xs[(xs >= x_lo) & (xs <= x_hi)]
    total = 0.0
    for x0, x1 in zip(xs[:-1], xs[1:]):
        c = float(w(0.5 * (x0 + x1)))
        d0 = c - float(prof(x0))
        d1 = c - float(prof(x1))
        wdt = x1 - x0
        if d0 * d1 >= 0.0:
            total += 0.5 * abs(d0 + d1) * wdt
        else:
            total += 0.5 * wdt * (d0 * d0 + d1 * d1) / (abs(d0) + abs(d1))
    return float(total)


@dataclass(frozen=True)
class BoundConstants:
    """Closed-form coefficients of the error estimates."""

    Y: float            # support radius after finite-speed spreading
    C1: float           # curvature amplification of the integrated distance
    K1: float           # space-time variation budget of the scheme
    K2: float           # state range plus initial variation
    K3: float | None    # spatial variation bound, when one is available
    span: float         # u_max - u_min
    tv0: float          # total variation of the initial data


def bound_constants(g_flux, f_flux, u0: StepFunction, X: float, T: float,
                    span: float, rho: float | None = None,
                    equal_flux: bool = False) -> BoundConstants:
    """Constants entering the error bounds, from certified flux data."""
    for q in (g_flux, f_flux):
        if getattr(q, "deriv2_bound", None) is None or getattr(q, "lipschitz", None) is None:
            raise ConfigError(f"flux {getattr(q, 'label', q)} lacks derivative bounds")
    lip = max(g_flux.lipschitz, f_flux.lipschitz)
    tv0 = u0.total_variation()
    sup_f = f_flux.sup_norm
    sup_g = g_flux.sup_norm
    Y = X + 2.0 * T * lip
    C1 = 1.0 + 0.125 * T * max(f_flux.deriv2_bound, g_flux.deriv2_bound)
    K1 = 2.0 * T * lip * tv0 + T * (sup_f + sup_g)
    K2 = span + tv0
    if equal_flux:
        K3 = tv0
    elif rho is not None and rho > 0:
        K3 = (span + lip * tv0 + sup_f + sup_g) / rho
    else:
        K3 = None
    return BoundConstants(Y, C1, K1, K2, K3, span, tv0)


def main_bound_rhs(c: BoundConstants, delta: float, restricted: bool = True,
                   u0_l1_gap: float = 0.0) -> float:
    """Guaranteed bound on the L1 front tracking error at mesh delta.

    The two data terms (delta * TV(u0) and the measured L1 projection gap)
    only apply when the initial data is not the restricted construction.
    """
    if delta == 0:
        return 0.0 if restricted else u0_l1_gap
    rhs = math.sqrt(2.0 * c.Y * c.C1 * (c.K2 * delta ** 2 + 4.0 * c.K1 * delta))
    rhs += 2.0 * c.span * delta
    if not restricted:
        rhs += delta * c.tv0 + u0_l1_gap
    return rhs


def bv_bound_rhs(c: BoundConstants, delta: float, restricted: bool = True,
                 u0_l1_gap: float = 0.0) -> float:
    """First-order bound available when a spatial variation bound K3 holds."""
    if c.K3 is None:
        raise ConfigError("no variation bound K3 available for this problem")
    rhs = 2.0 * math.sqrt(c.Y * c.K3 * c.C1) * delta
    if not restricted:
        rhs += delta * c.tv0 + u0_l1_gap
    return rhs


@dataclass(frozen=True)
class ErrorRecord:
    delta: float
    l1_error: float
    bound_rhs: float
    runtime: float
    front_count: int


@dataclass(frozen=True)
class RateFit:
    slope: float
    pairwise: tuple
    excluded: tuple = ()


def fit_rate(records) -> RateFit:
    """Least-squares slope of log error against log delta, plus pairwise orders."""
    usable = [r for r in records if r.l1_error > 0.0]
    excluded = tuple(r.delta for r in records if r.l1_error == 0.0)
    if len(usable) < 3:
        raise ConfigError("need at least three records with nonzero error")
    ld = np.log(np.array([r.delta for r in usable]))
    le = np.log(np.array([r.l1_error for r in usable]))
    slope = float(np.polyfit(ld, le, 1)[0])
    pairwise = tuple(
        float((le[i] - le[i + 1]) / (ld[i] - ld[i + 1])) for i in range(len(usable) - 1)
    )
    return RateFit(slope, pairwise, excluded)


def records_to_csv(records) -> str:
    """CSV schema: delta, l1_error, bound_rhs, order_pairwise, runtime_s, front_count."""
    lines = ["delta,l1_error,bound_rhs,order_pairwise,runtime_s,front_count"]
    prev = None
    for r in records:
        if prev is not None and r.l1_error > 0 and prev.l1_error > 0:
            order = math.log(prev.l1_error / r.l1_error) / math.log(prev.delta / r.delta)
            order_s = repr(order)
        else:
            order_s = ""
        lines.append(
            f"{r.delta!r},{r.l1_error!r},{r.bound_rhs!r},{order_s},"
            f"{r.runtime!r},{r.front_count}"
        )
        prev = r
    return "\n".join(lines) + "\n"


def records_to_gnuplot(records) -> str:
    """Plot-ready columns: log10(delta), log10(error), log10(bound)."""
    lines = ["# log10_delta log10_error log10_bound"]
    for r in records:
        le = math.log10(r.l1_error) if r.l1_error > 0 else float("nan")
        lines.append(f"{math.log10(r.delta)!r} {le!r} {math.log10(r.bound_rhs)!r}")
    return "\n".join(lines) + "\n"
