"""Exact Riemann solvers for piecewise-linear fluxes.

Two problems are solved here.  The classical single-flux problem is resolved
through convex/concave envelopes.  The interface problem (flux g left of
x = 0, flux f right of it) is resolved by enumerating candidate trace pairs
(u_minus, u_plus) with a common flux level, filtering them through the
wave-direction constraints and the admissibility condition on the interface
jump, and returning the pair of minimal jump size.

Candidate enumeration is exact for piecewise-linear fluxes: attainable traces
on each side form finitely many affine pieces of the level -> state map, so
the jump-size minimum is attained at a piece endpoint or at a zero of the
piecewise-affine difference.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleInterfaceError
from .fluxes import PiecewiseLinearFlux, lower_convex_envelope, upper_concave_envelope

logger = logging.getLogger(__name__)

FLUX_LEVEL_TOL = 1e-10    # absolute tolerance on g(u_minus) = f(u_plus)
GAMMA_SLACK = 1e-11       # slack on the admissibility sign conditions
ZERO_SPEED_TOL = 1e-14    # fronts slower than this are treated as stationary


@dataclass(frozen=True)
class FanFront:
    """One discontinuity of a Riemann fan, moving at its Rankine-Hugoniot speed."""

    speed: float
    left: float
    right: float

    @property
    def strength(self) -> float:
        return abs(self.right - self.left)


@dataclass(frozen=True)
class WaveFan:
    """Ordered fronts with strictly increasing speeds; states chain across fronts."""

    fronts: tuple
    origin: tuple = (0.0, 0.0)

    def __len__(self):
        return len(self.fronts)

    def __iter__(self):
        return iter(self.fronts)

    @property
    def min_speed(self) -> float:
        return self.fronts[0].speed if self.fronts else np.inf

    @property
    def max_speed(self) -> float:
        return self.fronts[-1].speed if self.fronts else -np.inf


@dataclass(frozen=True)
class TracePair:
    """States adjacent to the interface, coupled by a common flux level."""

    u_minus: float
    u_plus: float
    flux_level: float


@dataclass(frozen=True)
class GammaResult:
    passed: bool
    witness: float | None = None


@dataclass(frozen=True)
class InterfaceSolution:
    left_fan: WaveFan       # speeds < 0, emanating into x < 0
    trace: TracePair
    right_fan: WaveFan      # speeds > 0, emanating into x > 0
    tie_count: int = 0


def solve_classic(q: PiecewiseLinearFlux, ul: float, ur: float,
                  origin=(0.0, 0.0)) -> WaveFan:
    """Riemann fan for a single flux: envelope segments become fronts.

    Rising data uses the lower convex envelope on [ul, ur], falling data the
    upper concave envelope on [ur, ul].  Segments of equal slope are already
    merged by the hull construction.
    """
    q.check_domain(ul, ur)
    if ul == ur:
        return WaveFan((), origin)
    if ul < ur:
        env = lower_convex_envelope(q, ul, ur)
        bp, val = env.breakpoints, env.values
        fronts = tuple(
            FanFront((val[k + 1] - val[k]) / (bp[k + 1] - bp[k]), bp[k], bp[k + 1])
            for k in range(bp.size - 1)
        )
    else:
        env = upper_concave_envelope(q, ur, ul)
        bp, val = env.breakpoints, env.values
        fronts = tuple(
            FanFront((val[k + 1] - val[k]) / (bp[k + 1] - bp[k]), bp[k + 1], bp[k])
            for k in range(bp.size - 2, -1, -1)
        )
    return WaveFan(fronts, origin)


def _z_nodes(q, a: float, b: float) -> np.ndarray:
    lo, hi = (a, b) if a <= b else (b, a)
    if isinstance(q, PiecewiseLinearFlux):
        inner = q.breakpoints[(q.breakpoints > lo) & (q.breakpoints < hi)]
        return np.concatenate([[lo], inner, [hi]])
    return np.linspace(lo, hi, 512)


def gamma_check(g, f, u_minus: float, u_plus: float,
                flux_tol: float = FLUX_LEVEL_TOL,
                slack: float = GAMMA_SLACK) -> GammaResult:
    """Admissibility of an interface jump (u_minus, u_plus).

    Requires g(u_minus) = f(u_plus) and an intermediate state w between the
    traces such that f stays on the correct side of the common level between
    w and u_plus, and g does between u_minus and w.  For piecewise-linear
    fluxes the quantifiers are checked exactly at breakpoints.
    """
    gl = float(g(u_minus))
    fl = float(f(u_plus))
    if abs(gl - fl) > flux_tol:
        return GammaResult(False)
    scale = slack * max(1.0, getattr(g, "sup_norm", 1.0) + getattr(f, "sup_norm", 1.0))

    candidates = [u_minus, u_plus]
    lo, hi = min(u_minus, u_plus), max(u_minus, u_plus)
    for q in (g, f):
        if isinstance(q, PiecewiseLinearFlux):
            candidates.extend(q.breakpoints[(q.breakpoints > lo) & (q.breakpoints < hi)])
    for w in candidates:
        zf = _z_nodes(f, u_plus, w)
        ok_f = np.all((u_plus - w) * (np.asarray(f(zf)) - fl) >= -scale)
        if not ok_f:
            continue
        zg = _z_nodes(g, u_minus, w)
        ok_g = np.all((w - u_minus) * (np.asarray(g(zg)) - gl) >= -scale)
        if ok_g:
            return GammaResult(True, float(w))
    return GammaResult(False)


# ---------------------------------------------------------------------------
# attainable-trace branches
# ---------------------------------------------------------------------------
#
# A state w is an admissible left trace (all g-waves from ul to w have speed
# <= 0) iff g(w) is the running min of g on [ul, w] for w >= ul, or the
# running max on [w, ul] for w <= ul.  Mirrored conditions with f hold on the
# right side.  Each condition yields finitely many affine (level -> state)
# pieces, computed below from a single running-min primitive.


def _runmin_pieces(xs: np.ndarray, qs: np.ndarray):
    """Pieces (w_a, w_b, v_a, v_b) of the admissible set along outward nodes."""
    pieces = [(float(xs[0]), float(xs[0]), float(qs[0]), float(qs[0]))]
    r = float(qs[0])
    for k in range(xs.size - 1):
        xa, xb = float(xs[k]), float(xs[k + 1])
        qa, qb = float(qs[k]), float(qs[k + 1])
        if qb < r:
            if qa > r:
                t = (qa - r) / (qa - qb)
                wa = xa + t * (xb - xa)
            else:
                wa = xa
            pieces.append((wa, xb, r, qb))
            r = qb
        elif qb == r:
            if qa == r:
                pieces.append((xa, xb, r, r))
            else:
                pieces.append((xb, xb, r, r))
    return pieces


class _Branch:
    """Admissible (level v -> trace w) pieces for one side and direction."""

    def __init__(self, pieces):
        if not pieces:
            raise ValueError("empty branch")
        # normalize each piece to v_a >= v_b, then order pieces by descending v
        norm = []
        for wa, wb, va, vb in pieces:
            if va < vb:
                wa, wb, va, vb = wb, wa, vb, va
            norm.append((wa, wb, va, vb))
        if len(norm) > 1 and norm[0][3] < norm[-1][2]:
            norm.reverse()
        self.wa = np.array([p[0] for p in norm])
        self.wb = np.array([p[1] for p in norm])
        self.va = np.array([p[2] for p in norm])
        self.vb = np.array([p[3] for p in norm])

    @property
    def v_max(self) -> float:
        return float(self.va[0])

    @property
    def v_min(self) -> float:
        return float(self.vb[-1])

    def knot_levels(self) -> np.ndarray:
        return np.concatenate([self.va, self.vb])

    def flat_pieces(self):
        flat = self.va == self.vb
        return [
            (min(a, b), max(a, b), v)
            for a, b, v in zip(self.wa[flat], self.wb[flat], self.va[flat])
            if a != b
        ]

    def _index_window(self, v: float):
        # pieces i with vb[i] <= v <= va[i]; both arrays are nonincreasing
        i_hi = np.searchsorted(-self.va, -v, side="right") - 1
        i_lo = np.searchsorted(-self.vb, -v, side="left")
        return int(i_lo), int(i_hi)

    def solutions(self, v: float):
        """All admissible trace intervals at level v (degenerate unless flat)."""
        i_lo, i_hi = self._index_window(v)
        out = []
        for i in range(i_lo, i_hi + 1):
            va, vb = self.va[i], self.vb[i]
            if va == vb:
                a, b = self.wa[i], self.wb[i]
                out.append((min(a, b), max(a, b)))
            else:
                t = (va - v) / (va - vb)
                w = self.wa[i] + t * (self.wb[i] - self.wa[i])
                out.append((w, w))
        return out

    def affine_at(self, v: float):
        """(w(v0), dw/dv) of the unique non-flat piece containing v, or None."""
        i_lo, i_hi = self._index_window(v)
        for i in range(i_lo, i_hi + 1):
            va, vb = self.va[i], self.vb[i]
            if va == vb:
                continue
            t = (va - v) / (va - vb)
            w = self.wa[i] + t * (self.wb[i] - self.wa[i])
            return w, (self.wb[i] - self.wa[i]) / (vb - va)
        return None


def _side_branches(q: PiecewiseLinearFlux, anchor: float, side: str):
    bp, val = q.breakpoints, q.values
    qa = float(q(anchor))
    right_mask = bp > anchor
    left_mask = bp < anchor
    right_x = np.concatenate([[anchor], bp[right_mask]])
    right_q = np.concatenate([[qa], val[right_mask]])
    left_x = np.concatenate([[anchor], bp[left_mask][::-1]])
    left_q = np.concatenate([[qa], val[left_mask][::-1]])

    def runmin(xs, qs):
        return _Branch(_runmin_pieces(xs, qs))

    def runmax(xs, qs):
        pieces = _runmin_pieces(xs, -qs)
        return _Branch([(wa, wb, -va, -vb) for wa, wb, va, vb in pieces])

    if side == "left":
        return [runmin(right_x, right_q), runmax(left_x, left_q)]
    return [runmax(right_x, right_q), runmin(left_x, left_q)]


def _resolve(pair_l, pair_r):
    """Closest representatives of two trace intervals (degenerate or flat)."""
    la, lb = pair_l
    ra, rb = pair_r
    if la == lb and ra == rb:
        return la, ra
    if la == lb:
        return la, min(max(la, ra), rb)
    if ra == rb:
        return min(max(ra, la), lb), ra
    if lb < ra:
        return lb, ra
    if rb < la:
        return la, rb
    w = max(la, ra)
    return w, w


def _candidate_pairs(g, f, ul, ur):
    left_branches = _side_branches(g, ul, "left")
    right_branches = _side_branches(f, ur, "right")

    cands = []
    for lb in left_branches:
        for rb in right_branches:
            v_lo = max(lb.v_min, rb.v_min)
            v_hi = min(lb.v_max, rb.v_max)
            if v_lo > v_hi:
                continue
            vs = np.concatenate([lb.knot_levels(), rb.knot_levels()])
            # flat intervals on one side add kinks at the partner flux's values there
            for a, b, _ in lb.flat_pieces():
                vs = np.append(vs, [float(f(a)), float(f(b))])
            for a, b, _ in rb.flat_pieces():
                vs = np.append(vs, [float(g(a)), float(g(b))])
            vs = np.unique(np.clip(vs, v_lo, v_hi))
            resolved = []
            for v in vs:
                best_here = None
                for sl in lb.solutions(v):
                    for sr in rb.solutions(v):
                        um, up = _resolve(sl, sr)
                        cands.append((float(v), float(um), float(up)))
                        if best_here is None or abs(up - um) < abs(best_here[1] - best_here[0]):
                            best_here = (um, up)
                resolved.append(best_here)
            # a zero of the (piecewise affine) jump size between consecutive knots
            for k in range(len(vs) - 1):
                if resolved[k] is None or resolved[k + 1] is None:
                    continue
                d1 = resolved[k][1] - resolved[k][0]
                d2 = resolved[k + 1][1] - resolved[k + 1][0]
                if d1 == 0.0 or d2 == 0.0 or (d1 > 0) == (d2 > 0):
                    continue
                vm = 0.5 * (vs[k] + vs[k + 1])
                al = lb.affine_at(vm)
                ar = rb.affine_at(vm)
                if al is None or ar is None:
                    continue
                (w_l, dw_l), (w_r, dw_r) = al, ar
                denom = dw_r - dw_l
                if denom == 0.0:
                    continue
                v_root = vm - (w_r - w_l) / denom
                if vs[k] < v_root < vs[k + 1]:
                    sl = lb.solutions(v_root)
                    sr = rb.solutions(v_root)
                    if sl and sr:
                        um, up = _resolve(sl[0], sr[0])
                        cands.append((float(v_root), float(um), float(up)))
    # dedupe
    seen = set()
    out = []
    for v, um, up in cands:
        key = (round(v, 14), round(um, 14), round(up, 14))
        if key not in seen:
            seen.add(key)
            out.append((v, um, up))
    out.sort(key=lambda c: (abs(c[2] - c[1]), c[1], c[2]))
    return out


def solve_interface(g: PiecewiseLinearFlux, f: PiecewiseLinearFlux,
                    ul: float, ur: float, origin_t: float = 0.0) -> InterfaceSolution:
    """Interface Riemann problem: left fan, trace pair, right fan.

    Among trace pairs that are reachable by nonpositive-speed g-waves on the
    left and nonnegative-speed f-waves on the right and that pass the
    admissibility check, the pair of minimal |u_plus - u_minus| is selected.
    Stationary fronts adjacent to the interface are folded into the trace
    jump, so the returned fans carry strictly moving fronts only.
    """
    g.check_domain(ul)
    f.check_domain(ur)
    candidates = _candidate_pairs(g, f, ul, ur)
    winner = None
    tie_count = 0
    for v, um, up in candidates:
        if winner is not None and abs(up - um) > abs(winner[2] - winner[1]) + 1e-13:
            break
        if gamma_check(g, f, um, up).passed:
            if winner is None:
                winner = (v, um, up)
            else:
                tie_count += 1
    if winner is None:
        raise InfeasibleInterfaceError(
            f"no admissible interface pair for ul={ul}, ur={ur}", candidates
        )
    if tie_count:
        logger.debug(
            "interface tie: %d equal-jump admissible pairs at ul=%s ur=%s; kept %s",
            tie_count + 1, ul, ur, winner,
        )
    v, um, up = winner
    left_fan = solve_classic(g, ul, um, origin=(0.0, origin_t))
    right_fan = solve_classic(f, up, ur, origin=(0.0, origin_t))

    speed_scale = ZERO_SPEED_TOL * max(1.0, g.lipschitz, f.lipschitz)
    lf = list(left_fan.fronts)
    rf = list(right_fan.fronts)
    while lf and abs(lf[-1].speed) <= speed_scale:
        um = lf.pop().left
    while rf and abs(rf[0].speed) <= speed_scale:
        up = rf.pop(0).right
    if lf and lf[-1].speed > 0:
        raise InfeasibleInterfaceError(
            f"left fan leaks rightward for ul={ul}, ur={ur}", candidates
        )
    if rf and rf[0].speed < 0:
        raise InfeasibleInterfaceError(
            f"right fan leaks leftward for ul={ul}, ur={ur}", candidates
        )
    trace = TracePair(um, up, float(v))
    return InterfaceSolution(
        WaveFan(tuple(lf), (0.0, origin_t)), trace, WaveFan(tuple(rf), (0.0, origin_t)),
        tie_count,
    )
