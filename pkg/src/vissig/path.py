"""Streams and piecewise-linear paths."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

#: Absolute per-coordinate tolerance for matching endpoints in :func:`concat`.
ENDPOINT_TOL = 1e-9


class InputError(ValueError):
    pass


class EndpointMismatch(ValueError):
    def __init__(self, deviation: float):
        super().__init__(
            f"tail of first path does not meet head of second (max deviation {deviation:.3g})"
        )
        self.deviation = deviation


def as_stream(points) -> np.ndarray:
    """Validate an ``n x d`` array of observations and return a float copy."""
    try:
        arr = np.array(points, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InputError(f"stream is not a rectangular numeric array: {exc}") from None
    if arr.ndim == 1 and arr.size:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InputError(f"stream must be a non-empty n x d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("stream contains non-finite values")
    return arr


@dataclass(frozen=True, eq=False)
class PiecewiseLinearPath:
    """Linear interpolation between knots at strictly increasing times."""

    times: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64).reshape(-1)
        positions = np.array(self.positions, dtype=np.float64)
        if positions.ndim == 1:
            positions = positions.reshape(-1, 1)
        if positions.ndim != 2 or positions.shape[0] == 0:
            raise InputError("a path needs at least one knot")
        if times.size != positions.shape[0]:
            raise InputError(f"{times.size} times for {positions.shape[0]} knots")
        if np.any(np.diff(times) <= 0):
            raise InputError("knot times must be strictly increasing")
        times.flags.writeable = False
        positions.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "positions", positions)

    @classmethod
    def from_points(cls, points, start: float = 1.0) -> PiecewiseLinearPath:
        """Knots at consecutive times ``start, start + 1, ...``."""
        pts = as_stream(points)
        return cls(start + np.arange(pts.shape[0], dtype=np.float64), pts)

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    @property
    def n_knots(self) -> int:
        return self.positions.shape[0]

    @property
    def initial(self) -> np.ndarray:
        return self.positions[0]

    @property
    def tail(self) -> np.ndarray:
        return self.positions[-1]

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.positions, axis=0)

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if np.any(t < self.times[0]) or np.any(t > self.times[-1]):
            raise ValueError(f"t outside [{self.times[0]}, {self.times[-1]}]")
        cols = [np.interp(t, self.times, self.positions[:, j]) for j in range(self.dim)]
        return np.stack(cols, axis=-1)

    def __repr__(self) -> str:
        return f"PiecewiseLinearPath(n_knots={self.n_knots}, dim={self.dim})"


def path_from_stream(stream) -> PiecewiseLinearPath:
    """Knot ``i`` sits at time ``i`` (1-based) with position ``x_i``."""
    return PiecewiseLinearPath.from_points(stream, start=1.0)


def concat(x: PiecewiseLinearPath, y: PiecewiseLinearPath) -> PiecewiseLinearPath:
    if x.dim != y.dim:
        raise InputError(f"dimension mismatch: {x.dim} vs {y.dim}")
    deviation = float(np.max(np.abs(x.tail - y.initial)))
    if deviation > ENDPOINT_TOL:
        raise EndpointMismatch(deviation)
    shift = x.times[-1] - y.times[0]
    times = np.concatenate([x.times, y.times[1:] + shift])
    positions = np.vstack([x.positions, y.positions[1:]])
    return PiecewiseLinearPath(times, positions)


def concat_all(paths: Sequence[PiecewiseLinearPath]) -> PiecewiseLinearPath:
    out = paths[0]
    for p in paths[1:]:
        out = concat(out, p)
    return out


def reverse(x: PiecewiseLinearPath) -> PiecewiseLinearPath:
    times = x.times[0] + x.times[-1] - x.times[::-1]
    return PiecewiseLinearPath(times, x.positions[::-1])


def translate(x: PiecewiseLinearPath, offset) -> PiecewiseLinearPath:
    c = np.asarray(offset, dtype=np.float64).reshape(-1)
    if c.size != x.dim:
        raise InputError(f"offset of length {c.size} for a {x.dim}-dimensional path")
    return PiecewiseLinearPath(x.times, x.positions + c)


def refine(x: PiecewiseLinearPath, m: int) -> PiecewiseLinearPath:
    """Split every segment into ``m`` collinear pieces."""
    if m < 1:
        raise ValueError(f"refine needs m >= 1, got {m}")
    if m == 1 or x.n_knots == 1:
        return x
    frac = np.arange(m) / m
    t0, t1 = x.times[:-1], x.times[1:]
    p0, p1 = x.positions[:-1], x.positions[1:]
    times = (t0[:, None] + frac[None, :] * (t1 - t0)[:, None]).reshape(-1)
    pos = (p0[:, None, :] + frac[None, :, None] * (p1 - p0)[:, None, :]).reshape(-1, x.dim)
    return PiecewiseLinearPath(
        np.append(times, x.times[-1]), np.vstack([pos, x.positions[-1:]])
    )


def constant_path(position, time: float = 0.0) -> PiecewiseLinearPath:
    pos = np.asarray(position, dtype=np.float64).reshape(1, -1)
    return PiecewiseLinearPath(np.array([time]), pos)
