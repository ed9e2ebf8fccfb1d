"""Signatures and log-signatures of piecewise-linear paths.

Each linear segment contributes the tensor exponential of its increment,
and the pieces are multiplied left to right. The oracle at the bottom of
the module computes a single coefficient by direct numerical quadrature
and shares no code with that route.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .path import PiecewiseLinearPath
from .tensor import TensorSeries, _mul_levels, exp_of_letters, tensor_log


def segment_signature(increment: Sequence[float], depth: int) -> TensorSeries:
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    return exp_of_letters(increment, depth)


def signature(x: PiecewiseLinearPath, depth: int) -> TensorSeries:
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    d = x.dim
    increments = x.increments
    if increments.shape[0] == 0:
        return TensorSeries.unit(d, depth)
    levels = list(segment_signature(increments[0], depth).levels)
    for inc in increments[1:]:
        levels = _mul_levels(levels, segment_signature(inc, depth).levels, depth)
    return TensorSeries(d, depth, levels)


def log_signature(x: PiecewiseLinearPath, depth: int) -> TensorSeries:
    return tensor_log(signature(x, depth))


def iterated_integral_oracle(x: PiecewiseLinearPath, word: Sequence[int], steps: int) -> float:
    """Iterated integral over ``word`` by repeated trapezoidal accumulation.

    Every segment is sampled at ``steps`` uniform sub-intervals and the
    recursion ``S_k(t) = int_0^t S_{k-1} dX^{i_k}`` is integrated with the
    trapezoid rule. Exact for words of length <= 2 on linear pieces,
    second order in ``1/steps`` beyond that.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    word = tuple(word)
    for letter in word:
        if not 1 <= letter <= x.dim:
            raise IndexError(f"letter {letter} outside 1..{x.dim}")
    if x.n_knots == 1:
        return 1.0 if not word else 0.0

    frac = np.arange(steps) / steps
    p0, p1 = x.positions[:-1], x.positions[1:]
    grid = p0[:, None, :] + frac[None, :, None] * (p1 - p0)[:, None, :]
    grid = np.vstack([grid.reshape(-1, x.dim), x.positions[-1:]])

    running = np.ones(grid.shape[0])
    for letter in word:
        dx = np.diff(grid[:, letter - 1])
        area = 0.5 * (running[:-1] + running[1:]) * dx
        running = np.concatenate([[0.0], np.cumsum(area)])
    return float(running[-1])
