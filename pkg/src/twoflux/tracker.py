"""The front tracking engine.

Evolves a piecewise-constant profile exactly in time under a piecewise-linear
flux pair (g left of x = 0, f right of it).  Fronts move at Rankine-Hugoniot
speeds; collisions and interface interactions are resolved with the exact
Riemann solvers.  Between events the solution is known in closed form.

A state owns its front list and is mutated in place by advance(); distinct
states are independent.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CollisionCapError, FrontCapError, StaleSampleError
from .fluxes import PiecewiseLinearFlux
from .riemann import solve_classic, solve_interface
from .stepfn import StepFunction

DEFAULT_FRONT_CAP = 10 ** 6
DEFAULT_COLLISION_CAP = 10 ** 7
INTERFACE_SNAP = 1e-13      # fronts this close to x = 0 interact with the interface
EVENT_TIME_MERGE = 1e-13    # events closer than this fraction of T merge


@dataclass(frozen=True)
class Front:
    """Immutable snapshot of one front."""

    position: float
    speed: float
    left_state: float
    right_state: float
    kind: str  # "moving" | "interface"


@dataclass
class CollisionRecord:
    time: float
    location: float
    incoming: list
    outgoing: list


class _Node:
    __slots__ = ("uid", "x_ref", "t_ref", "speed", "left", "right",
                 "kind", "alive", "prev", "next")

    def __init__(self, uid, x_ref, t_ref, speed, left, right, kind="moving"):
        self.uid = uid
        self.x_ref = x_ref
        self.t_ref = t_ref
        self.speed = speed
        self.left = left
        self.right = right
        self.kind = kind
        self.alive = True
        self.prev = None
        self.next = None

    def position(self, t: float) -> float:
        return self.x_ref + self.speed * (t - self.t_ref)


class FrontTrackingState:
    """Live solver state: linked list of fronts plus a pending-event heap."""

    def __init__(self, g: PiecewiseLinearFlux, f: PiecewiseLinearFlux,
                 u0d: StepFunction, T: float,
                 front_cap: int = DEFAULT_FRONT_CAP,
                 collision_cap: int = DEFAULT_COLLISION_CAP,
                 record_events: bool = False):
        self.g = g
        self.f = f
        self.T = float(T)
        self.time = 0.0
        self.front_cap = front_cap
        self.collision_cap = collision_cap
        self.collision_count = 0
        self.peak_front_count = 0
        self._uid = itertools.count()
        self._seq = itertools.count()
        self._heap: list = []
        self._head: _Node | None = None
        self._live = 0
        self.events: list[CollisionRecord] | None = [] if record_events else None
        self.trace_history: list[tuple] = []
        self._last_event_time = 0.0
        reach = (abs(u0d.positions).max() if u0d.jump_count else 1.0) \
            + self.T * max(g.lipschitz, f.lipschitz)
        self._pos_tol = 1e-12 * max(1.0, reach)
        self._build(u0d)

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------

    def _new_node(self, x, t, speed, left, right, kind="moving"):
        node = _Node(next(self._uid), x, t, speed, left, right, kind)
        self._live += 1
        self.peak_front_count = max(self.peak_front_count, self._live)
        if self._live > self.front_cap:
            raise FrontCapError("front cap exceeded", self.stats())
        return node

    def _link(self, nodes):
        prev = None
        for node in nodes:
            node.prev = prev
            if prev is not None:
                prev.next = node
            else:
                self._head = node
            prev = node
        if prev is not None:
            prev.next = None

    def _fan_nodes(self, fan, x, t):
        return [self._new_node(x, t, fr.speed, fr.left, fr.right) for fr in fan]

    def _build(self, u0d: StepFunction):
        # data jumps within snap distance of x = 0 are resolved with the
        # interface; the adjacent states are read across the whole snapped band
        left_idx = int(np.searchsorted(u0d.positions, -INTERFACE_SNAP, side="left"))
        right_idx = int(np.searchsorted(u0d.positions, INTERFACE_SNAP, side="right"))
        u_at_interface_l = float(u0d.values[left_idx])
        u_at_interface_r = float(u0d.values[right_idx])

        nodes: list[_Node] = []
        for p, a, b in zip(u0d.positions, u0d.values[:-1], u0d.values[1:]):
            if abs(p) <= INTERFACE_SNAP or p > 0:
                continue
            fan = solve_classic(self.g, float(a), float(b))
            nodes.extend(self._fan_nodes(fan, float(p), 0.0))

        sol = solve_interface(self.g, self.f, u_at_interface_l, u_at_interface_r)
        nodes.extend(self._fan_nodes(sol.left_fan, 0.0, 0.0))
        interface = self._new_node(0.0, 0.0, 0.0, sol.trace.u_minus, sol.trace.u_plus,
                                   kind="interface")
        nodes.append(interface)
        self.trace_history.append((0.0, sol.trace.u_minus, sol.trace.u_plus))
        nodes.extend(self._fan_nodes(sol.right_fan, 0.0, 0.0))

        for p, a, b in zip(u0d.positions, u0d.values[:-1], u0d.values[1:]):
            if abs(p) <= INTERFACE_SNAP or p < 0:
                continue
            fan = solve_classic(self.f, float(a), float(b))
            nodes.extend(self._fan_nodes(fan, float(p), 0.0))

        self._link(nodes)
        node = self._head
        while node is not None and node.next is not None:
            self._schedule(node, node.next, 0.0)
            node = node.next

    # ------------------------------------------------------------------
    # events
    # ------------------------------------------------------------------

    def _schedule(self, a: _Node, b: _Node, now: float):
        if a.speed <= b.speed:
            return
        xa = a.position(now)
        xb = b.position(now)
        tau = now + (xb - xa) / (a.speed - b.speed)
        if tau < now:
            tau = now
        if tau > self.T:
            return
        heapq.heappush(self._heap, (tau, next(self._seq), a, b))

    def _pop_event(self, t_max: float):
        # nodes never change kinematics while alive, so an event entry is valid
        # exactly when both fronts are alive and still adjacent
        while self._heap:
            tau, _, a, b = self._heap[0]
            if tau > t_max:
                return None
            heapq.heappop(self._heap)
            if a.alive and b.alive and a.next is b:
                return tau, a, b
        return None

    def next_event_time(self) -> float:
        while self._heap:
            tau, _, a, b = self._heap[0]
            if a.alive and b.alive and a.next is b:
                return tau
            heapq.heappop(self._heap)
        return np.inf

    def _gather(self, a: _Node, b: _Node, t: float):
        """All fronts meeting a-b at time t at (numerically) one location."""
        x_c = 0.5 * (a.position(t) + b.position(t))
        tol = self._pos_tol + EVENT_TIME_MERGE * self.T * (abs(a.speed) + abs(b.speed))
        first, last = a, b
        while first.prev is not None and abs(first.prev.position(t) - x_c) <= tol:
            first = first.prev
        while last.next is not None and abs(last.next.position(t) - x_c) <= tol:
            last = last.next
        return first, last, x_c

    def _unlink_span(self, first: _Node, last: _Node):
        before = first.prev
        after = last.next
        node = first
        while True:
            node.alive = False
            self._live -= 1
            nxt = node.next
            node.prev = node.next = None
            if node is last:
                break
            node = nxt
        return before, after

    def _insert_span(self, before, nodes, after):
        chain = ([before] if before else []) + nodes + ([after] if after else [])
        if not chain:
            self._head = None
            return
        if before is None:
            self._head = chain[0]
            chain[0].prev = None
        if after is None:
            chain[-1].next = None
        for left, right in zip(chain, chain[1:]):
            left.next = right
            right.prev = left

    def _process(self, t: float, a: _Node, b: _Node):
        first, last, x_c = self._gather(a, b, t)
        span = []
        node = first
        while True:
            span.append(node)
            if node is last:
                break
            node = node.next
        ul = first.left
        ur = last.right
        at_interface = any(n.kind == "interface" for n in span) or abs(x_c) <= INTERFACE_SNAP
        incoming = [Front(n.position(t), n.speed, n.left, n.right, n.kind) for n in span]

        before, after = self._unlink_span(first, last)
        new_nodes: list[_Node] = []
        if at_interface:
            sol = solve_interface(self.g, self.f, ul, ur, origin_t=t)
            new_nodes.extend(self._fan_nodes(sol.left_fan, 0.0, t))
            interface = self._new_node(0.0, t, 0.0, sol.trace.u_minus,
                                       sol.trace.u_plus, kind="interface")
            new_nodes.append(interface)
            new_nodes.extend(self._fan_nodes(sol.right_fan, 0.0, t))
            self.trace_history.append((t, sol.trace.u_minus, sol.trace.u_plus))
        else:
            q = self.g if x_c < 0 else self.f
            fan = solve_classic(q, ul, ur, origin=(x_c, t))
            new_nodes.extend(self._fan_nodes(fan, x_c, t))

        self._insert_span(before, new_nodes, after)

        if new_nodes:
            if before is not None:
                self._schedule(before, new_nodes[0], t)
            for left, right in zip(new_nodes, new_nodes[1:]):
                self._schedule(left, right, t)
            if after is not None:
                self._schedule(new_nodes[-1], after, t)
        elif before is not None and after is not None:
            self._schedule(before, after, t)

        self.collision_count += 1
        self._last_event_time = t
        if self.collision_count > self.collision_cap:
            raise CollisionCapError("collision cap exceeded", self.stats())
        if self.events is not None:
            outgoing = [Front(n.position(t), n.speed, n.left, n.right, n.kind)
                        for n in new_nodes]
            self.events.append(CollisionRecord(t, x_c, incoming, outgoing))

    # ------------------------------------------------------------------
    # public API
    # ------------------------------------------------------------------

    def advance(self, t_target: float) -> "FrontTrackingState":
        """Process all events up to t_target and move the clock there."""
        if t_target < self.time:
            raise ValueError(f"cannot advance backwards to {t_target}")
        if t_target > self.T + 1e-12:
            raise ValueError(f"t_target {t_target} beyond horizon {self.T}")
        while True:
            ev = self._pop_event(t_target)
            if ev is None:
                break
            tau, a, b = ev
            self._process(tau, a, b)
        self.time = float(t_target)
        return self

    def sample(self, t: float | None = None) -> StepFunction:
        """Closed-form snapshot at time t.

        Valid inside the event-free span containing the current time: from
        the last processed collision up to (but not through) the next one.
        """
        if t is None:
            t = self.time
        if t < self._last_event_time:
            raise StaleSampleError(
                f"sample time {t} precedes the last collision at "
                f"t={self._last_event_time}"
            )
        nxt = self.next_event_time()
        if self.time < nxt <= t:
            raise StaleSampleError(
                f"collision at t={nxt} lies inside ({self.time}, {t}]"
            )
        if self._head is None:
            raise StaleSampleError("state has no fronts and no interface")
        xs: list[float] = []
        vs: list[float] = [self._head.left]
        node = self._head
        while node is not None:
            p = node.position(t)
            if xs and p <= xs[-1]:
                vs[-1] = node.right
            else:
                xs.append(p)
                vs.append(node.right)
            node = node.next
        return StepFunction.create(np.array(xs), np.array(vs))

    def interface_traces(self) -> list[tuple]:
        """(time, u_minus, u_plus) records, one entry per interface resolution."""
        return list(self.trace_history)

    def fronts(self, t: float | None = None) -> list[Front]:
        if t is None:
            t = self.time
        out = []
        node = self._head
        while node is not None:
            out.append(Front(node.position(t), node.speed, node.left, node.right,
                             node.kind))
            node = node.next
        return out

    def front_count(self) -> int:
        return self._live

    def stats(self) -> dict:
        return {
            "front_count": self._live,
            "peak_front_count": self.peak_front_count,
            "collision_count": self.collision_count,
            "time": self.time,
        }


def init(g: PiecewiseLinearFlux, f: PiecewiseLinearFlux, u0d: StepFunction,
         T: float, **kwargs) -> FrontTrackingState:
    """Build the initial state: every data jump is replaced by its Riemann fan."""
    return FrontTrackingState(g, f, u0d, T, **kwargs)


def advance(state: FrontTrackingState, t_target: float) -> FrontTrackingState:
    return state.advance(t_target)


def sample(state: FrontTrackingState, t: float | None = None) -> StepFunction:
    return state.sample(t)


def interface_traces(state: FrontTrackingState) -> list[tuple]:
    return state.interface_traces()
