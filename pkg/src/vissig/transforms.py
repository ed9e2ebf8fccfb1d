"""Stream transforms applied before signature extraction.

The visibility transforms append one coordinate, placed last, that flags
whether the pen is down (1) or up (0). The I-variant walks from the origin
to the first observation on the invisible plane and then lifts; the
T-variant runs the lifted stream first and then drops and returns home.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .path import InputError, PiecewiseLinearPath, as_stream

KINDS = ("time", "leadlag", "vis_i", "vis_t", "basepoint", "scale")
VISIBILITY = ("vis_i", "vis_t")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class TransformSpec:
    kind: str
    factor: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown transform {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind == "scale" and self.factor is None:
            raise ConfigError("scale needs a factor, e.g. scale:0.5")
        if self.kind != "scale" and self.factor is not None:
            raise ConfigError(f"{self.kind} takes no argument")

    def __str__(self) -> str:
        return f"scale:{self.factor!r}" if self.kind == "scale" else self.kind


def parse_chain(text: str) -> list[TransformSpec]:
    """Parse ``"time,leadlag,vis_i"``; ``scale:0.5`` carries its factor."""
    chain = []
    for item in (part.strip() for part in text.split(",")):
        if not item:
            continue
        kind, sep, arg = item.partition(":")
        if not sep:
            chain.append(TransformSpec(kind))
            continue
        try:
            factor = float(arg)
        except ValueError:
            raise ConfigError(f"bad argument in {item!r}") from None
        chain.append(TransformSpec(kind, factor))
    validate_chain(chain)
    return chain


def format_chain(chain: Sequence[TransformSpec]) -> str:
    return ",".join(str(t) for t in chain)


def validate_chain(chain: Sequence[TransformSpec]) -> None:
    vis = [i for i, t in enumerate(chain) if t.kind in VISIBILITY]
    if len(vis) > 1:
        raise ConfigError("at most one visibility transform per chain")
    if vis and vis[0] != len(chain) - 1:
        raise ConfigError("the visibility transform must be the last step of the chain")


def visibility_i_discrete(stream) -> np.ndarray:
    s = as_stream(stream)
    n, d = s.shape
    out = np.zeros((n + 2, d + 1))
    out[1, :d] = s[0]
    out[2:, :d] = s
    out[2:, d] = 1.0
    return out


def visibility_t_discrete(stream) -> np.ndarray:
    s = as_stream(stream)
    n, d = s.shape
    out = np.zeros((n + 2, d + 1))
    out[:n, :d] = s
    out[:n, d] = 1.0
    out[n, :d] = s[-1]
    return out


def visibility_prefix_path(x0) -> PiecewiseLinearPath:
    """Origin -> ``(x0, 0)`` -> ``(x0, 1)`` on ``[0, 1]``, kinks at ``t = 1/2``."""
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    zero = np.zeros(x0.size)
    knots = np.array([np.append(zero, 0.0), np.append(x0, 0.0), np.append(x0, 1.0)])
    return PiecewiseLinearPath(np.array([0.0, 0.5, 1.0]), knots)


def visibility_suffix_path(x1) -> PiecewiseLinearPath:
    """``(x1, 1)`` -> ``(x1, 0)`` -> origin; the reversal of the prefix."""
    x1 = np.asarray(x1, dtype=np.float64).reshape(-1)
    zero = np.zeros(x1.size)
    knots = np.array([np.append(x1, 1.0), np.append(x1, 0.0), np.append(zero, 0.0)])
    return PiecewiseLinearPath(np.array([0.0, 0.5, 1.0]), knots)


def lift_visible(x: PiecewiseLinearPath) -> PiecewiseLinearPath:
    ones = np.ones((x.n_knots, 1))
    return PiecewiseLinearPath(x.times, np.hstack([x.positions, ones]))


def time_augment(stream) -> np.ndarray:
    """Prepend a time channel running uniformly from 0 to 1."""
    s = as_stream(stream)
    n = s.shape[0]
    t = np.zeros(1) if n == 1 else np.arange(n) / (n - 1)
    return np.hstack([t[:, None], s])


def lead_lag(stream) -> np.ndarray:
    """Hopscotch lead-lag embedding, ``(2n - 1) x 2d``: lead columns first."""
    s = as_stream(stream)
    n, d = s.shape
    if n < 2:
        raise InputError("lead-lag needs at least two observations")
    out = np.empty((2 * n - 1, 2 * d))
    out[0::2, :d] = s
    out[0::2, d:] = s
    out[1::2, :d] = s[1:]
    out[1::2, d:] = s[:-1]
    return out


def basepoint(stream) -> np.ndarray:
    """Prepend an observation at the origin."""
    s = as_stream(stream)
    return np.vstack([np.zeros((1, s.shape[1])), s])


def scale(stream, factor: float) -> np.ndarray:
    return as_stream(stream) * factor


_DISPATCH = {
    "time": time_augment,
    "leadlag": lead_lag,
    "vis_i": visibility_i_discrete,
    "vis_t": visibility_t_discrete,
    "basepoint": basepoint,
}


def apply_chain(stream, chain: Sequence[TransformSpec]) -> np.ndarray:
    validate_chain(chain)
    s = as_stream(stream)
    for spec in chain:
        s = scale(s, spec.factor) if spec.kind == "scale" else _DISPATCH[spec.kind](s)
    return s


def output_dim(d: int, chain: Sequence[TransformSpec]) -> int:
    for spec in chain:
        if spec.kind == "time" or spec.kind in VISIBILITY:
            d += 1
        elif spec.kind == "leadlag":
            d *= 2
    return d
