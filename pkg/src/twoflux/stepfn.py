"""Piecewise-constant functions of x and their indefinite integrals.

A StepFunction is the common currency of the package: initial data, front
tracking snapshots and finite volume profiles all end up here.  It is stored
as strictly increasing jump positions plus one value per interval, with the
leftmost value extending to -inf and the rightmost to +inf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergentIntegralError, InvalidInputError


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous staircase: values[i] on [positions[i-1], positions[i])."""

    positions: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pos = np.atleast_1d(np.asarray(self.positions, dtype=float))
        val = np.atleast_1d(np.asarray(self.values, dtype=float))
        if pos.size + 1 != val.size:
            raise InvalidInputError(
                f"need len(values) == len(positions) + 1, got {val.size} and {pos.size}"
            )
        if pos.size and np.any(np.diff(pos) <= 0):
            raise InvalidInputError("jump positions must be strictly increasing")
        # drop zero-strength jumps so adjacent values always differ
        if pos.size:
            keep = np.diff(val) != 0.0
            pos = pos[keep]
            val = np.concatenate([val[:1], val[1:][keep]])
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "values", val)

    @classmethod
    def constant(cls, value: float) -> "StepFunction":
        return cls(np.empty(0), np.array([float(value)]))

    @classmethod
    def create(cls, positions, values, drop_tol: float = 0.0) -> "StepFunction":
        """Build a staircase, dropping jumps of strength <= drop_tol first."""
        pos = np.atleast_1d(np.asarray(positions, dtype=float))
        val = np.atleast_1d(np.asarray(values, dtype=float))
        if drop_tol > 0.0 and pos.size:
            out_pos, out_val = [], [val[0]]
            for p, v in zip(pos, val[1:]):
                if abs(v - out_val[-1]) <= drop_tol:
                    continue
                out_pos.append(p)
                out_val.append(v)
            pos = np.array(out_pos)
            val = np.array(out_val)
        return cls(pos, val)

    @property
    def left_value(self) -> float:
        return float(self.values[0])

    @property
    def right_value(self) -> float:
        return float(self.values[-1])

    @property
    def jump_count(self) -> int:
        return int(self.positions.size)

    def __call__(self, x):
        idx = np.searchsorted(self.positions, x, side="right")
        return self.values[idx]

    def total_variation(self) -> float:
        return float(np.sum(np.abs(np.diff(self.values)))) if self.values.size > 1 else 0.0

    def translate(self, dx: float) -> "StepFunction":
        return StepFunction(self.positions + dx, self.values.copy())

    def check_range(self, lo: float, hi: float, atol: float = 0.0) -> None:
        """Raise if any value leaves [lo, hi] by more than atol."""
        if np.any(self.values < lo - atol) or np.any(self.values > hi + atol):
            raise InvalidInputError(f"staircase values leave [{lo}, {hi}]")

    def indefinite_integral(self, base_value: float) -> "PiecewiseAffine":
        """x -> integral_{-inf}^x (w(y) - base_value) dy; requires w == base_value far left."""
        if self.left_value != base_value:
            raise DivergentIntegralError(
                f"left far-field value {self.left_value} differs from base {base_value}"
            )
        if self.positions.size == 0:
            return PiecewiseAffine(np.array([0.0]), np.array([0.0]), 0.0, 0.0)
        widths = np.diff(self.positions)
        # integral accumulated up to each jump position
        acc = np.concatenate([[0.0], np.cumsum((self.values[1:-1] - base_value) * widths)])
        return PiecewiseAffine(
            self.positions.copy(), acc, 0.0, self.right_value - base_value
        )


@dataclass(frozen=True)
class PiecewiseAffine:
    """Continuous piecewise-affine function given by knots, knot values and tail slopes."""

    knots: np.ndarray
    knot_values: np.ndarray
    slope_left: float
    slope_right: float

    def __post_init__(self):
        kn = np.atleast_1d(np.asarray(self.knots, dtype=float))
        kv = np.atleast_1d(np.asarray(self.knot_values, dtype=float))
        if kn.size != kv.size or kn.size == 0:
            raise InvalidInputError("knots and knot_values must have equal nonzero length")
        if kn.size > 1 and np.any(np.diff(kn) <= 0):
            raise InvalidInputError("knots must be strictly increasing")
        object.__setattr__(self, "knots", kn)
        object.__setattr__(self, "knot_values", kv)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        y = np.interp(x, self.knots, self.knot_values)
        left = x < self.knots[0]
        right = x > self.knots[-1]
        y[left] = self.knot_values[0] + self.slope_left * (x[left] - self.knots[0])
        y[right] = self.knot_values[-1] + self.slope_right * (x[right] - self.knots[-1])
        return float(y[0]) if scalar else y


def merge_positions(a: StepFunction, b: StepFunction) -> np.ndarray:
    return np.union1d(a.positions, b.positions)


def read_staircase(lines) -> StepFunction:
    """Parse staircase CSV rows 'position,value'; first row must be '-inf,<value>'."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    rows = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        p, v = line.split(",")
        rows.append((float(p), float(v)))
    if not rows or not np.isneginf(rows[0][0]):
        raise InvalidInputError("staircase CSV must start with a '-inf,<value>' row")
    positions = np.array([p for p, _ in rows[1:]])
    values = np.array([v for _, v in rows])
    return StepFunction(positions, values)


def write_staircase(w: StepFunction) -> str:
    rows = [f"-inf,{float(w.values[0])!r}"]
    rows += [f"{float(p)!r},{float(v)!r}" for p, v in zip(w.positions, w.values[1:])]
    return "\n".join(rows) + "\n"
