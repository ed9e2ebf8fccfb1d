"""Numerical checks of the algebraic facts behind the visibility transforms.

Every check compares two independently assembled sides coefficient by
coefficient and reports the largest absolute deviation. Tolerances are
absolute because many of the true coefficients are exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, prod
from typing import Callable, Iterator

import numpy as np

from .path import PiecewiseLinearPath, concat, refine, reverse
from .signature import signature
from .tensor import TensorSeries, tensor_mul, word_index, words
from .transforms import lift_visible, visibility_prefix_path, visibility_suffix_path

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class CheckReport:
    name: str
    max_abs_error: float
    num_coefficients: int
    tolerance: float
    details: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "max_abs_error", float(self.max_abs_error))
        object.__setattr__(self, "details", {k: float(v) for k, v in self.details.items()})
        if self.num_coefficients <= 0:
            raise ValueError("a check must compare at least one coefficient")

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_error <= self.tolerance)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "max_abs_error": self.max_abs_error,
            "num_coefficients": self.num_coefficients,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.details:
            out["details"] = dict(self.details)
        return out


def _deviation(a: TensorSeries, b: TensorSeries) -> tuple[float, int]:
    diffs = [np.max(np.abs(x - y)) for x, y in zip(a.levels, b.levels)]
    return float(max(diffs)), sum(x.size for x in a.levels)


def _c(x: TensorSeries, word) -> float:
    return float(x.levels[len(word)][word_index(word, x.alphabet)])


def visibility_i_path(x: PiecewiseLinearPath) -> PiecewiseLinearPath:
    return concat(visibility_prefix_path(x.initial), lift_visible(x))


def visibility_t_path(x: PiecewiseLinearPath) -> PiecewiseLinearPath:
    return concat(lift_visible(x), visibility_suffix_path(x.tail))


def check_chen(
    x: PiecewiseLinearPath, y: PiecewiseLinearPath, depth: int, tol: float = DEFAULT_TOL
) -> CheckReport:
    joined = signature(concat(x, y), depth)
    product = tensor_mul(signature(x, depth), signature(y, depth))
    err, n = _deviation(joined, product)
    return CheckReport("chen", err, n, tol)


def check_cancellation(x: PiecewiseLinearPath, depth: int, tol: float = DEFAULT_TOL) -> CheckReport:
    there_and_back = signature(concat(x, reverse(x)), depth)
    err, n = _deviation(there_and_back, TensorSeries.unit(x.dim, depth))
    return CheckReport("cancellation", err, n, tol)


def check_repeated_letters(
    x: PiecewiseLinearPath, depth: int, tol: float = DEFAULT_TOL
) -> CheckReport:
    """Coefficient on ``(l, ..., l)`` (k times) is ``(increment_l)^k / k!``."""
    sig = signature(x, depth)
    total = x.tail - x.initial
    err, n = 0.0, 0
    for letter in range(1, x.dim + 1):
        for k in range(1, depth + 1):
            expected = total[letter - 1] ** k / factorial(k)
            err = max(err, abs(_c(sig, (letter,) * k) - expected))
            n += 1
    return CheckReport("repeated_letters", err, n, tol)


def check_general2(
    x: PiecewiseLinearPath, variant: str, depth: int, tol: float = DEFAULT_TOL
) -> CheckReport:
    """Lifted signature against the split-sum over ``J = (J1 | J2)``.

    The right side is assembled from the signature of ``x`` and of the
    three-knot prefix (I) or suffix (T) path alone; the concatenated lifted
    path is only formed for the left side.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    d = x.dim
    flag = d + 1
    sig_x = signature(x, depth)
    if variant == "I":
        lhs = signature(visibility_i_path(x), depth)
        head = signature(visibility_prefix_path(x.initial), depth)
    elif variant == "T":
        lhs = signature(visibility_t_path(x), depth)
        tail = signature(visibility_suffix_path(x.tail), depth)
    else:
        raise ValueError(f"variant must be 'I' or 'T', got {variant!r}")

    err, n = 0.0, 0
    for word in words(flag, depth, include_empty=True):
        rhs = 0.0
        for k in range(len(word) + 1):
            left, right = word[:k], word[k:]
            if variant == "I" and flag not in right:
                rhs += _c(head, left) * _c(sig_x, right)
            elif variant == "T" and flag not in left:
                rhs += _c(sig_x, left) * _c(tail, right)
        err = max(err, abs(_c(lhs, word) - rhs))
        n += 1
    return CheckReport(f"general2_{variant}", err, n, tol)


def check_general1(x: PiecewiseLinearPath, depth: int, tol: float = DEFAULT_TOL) -> CheckReport:
    """The four closed forms for words with the flag letter at one end.

    For ``J`` over ``1..d`` with ``|J| <= depth - 1`` and ``f = d + 1``:

    * a: ``S(I-lift)^(f|J) = S_X^J``
    * b: ``S(I-lift)^(J|f) = prod_{j in J} X_0^j / |J|!``
    * c: ``S(T-lift)^(J|f) = S_X^J``
    * d: ``S(T-lift)^(f|J) = (-1)^(|J|+1) prod_{j in J} X_1^j / |J|!``

    Identity c is evaluated in exactly this printed form. The T-lift drops
    the flag coordinate by one after ``X`` ends, so the true coefficient is
    ``-S_X^J`` (see :func:`check_tail_flag_suffix`) and ``c`` fails by
    ``2 |S_X^J|``; ``details`` keeps the per-identity errors apart.
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    d = x.dim
    flag = d + 1
    sig_x = signature(x, depth)
    sig_i = signature(visibility_i_path(x), depth)
    sig_t = signature(visibility_t_path(x), depth)
    x0, x1 = x.initial, x.tail

    errs = {"a": 0.0, "b": 0.0, "c": 0.0, "d": 0.0}
    n = 0
    for word in words(d, depth - 1, include_empty=True):
        k = len(word)
        s_x = _c(sig_x, word)
        head_prod = prod(x0[j - 1] for j in word) / factorial(k)
        tail_prod = (-1) ** (k + 1) * prod(x1[j - 1] for j in word) / factorial(k)
        errs["a"] = max(errs["a"], abs(_c(sig_i, (flag,) + word) - s_x))
        errs["b"] = max(errs["b"], abs(_c(sig_i, word + (flag,)) - head_prod))
        errs["c"] = max(errs["c"], abs(_c(sig_t, word + (flag,)) - s_x))
        errs["d"] = max(errs["d"], abs(_c(sig_t, (flag,) + word) - tail_prod))
        n += 4
    return CheckReport("general1", max(errs.values()), n, tol, errs)


def check_tail_flag_suffix(
    x: PiecewiseLinearPath, depth: int, tol: float = DEFAULT_TOL
) -> CheckReport:
    """``S(T-lift)^(J|f) = -S_X^J``: the flag falls from 1 to 0 after ``X``."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    flag = x.dim + 1
    sig_x = signature(x, depth)
    sig_t = signature(visibility_t_path(x), depth)
    err, n = 0.0, 0
    for word in words(x.dim, depth - 1, include_empty=True):
        err = max(err, abs(_c(sig_t, word + (flag,)) + _c(sig_x, word)))
        n += 1
    return CheckReport("tail_flag_suffix", err, n, tol)


def check_corollary(x: PiecewiseLinearPath, tol: float = 1e-12) -> CheckReport:
    """Level one of the lifts: ``X_1`` for the I-lift, ``-X_0`` for the T-lift."""
    d = x.dim
    lvl_i = signature(visibility_i_path(x), 1).level(1)[:d]
    lvl_t = signature(visibility_t_path(x), 1).level(1)[:d]
    err_i = float(np.max(np.abs(lvl_i - x.tail)))
    err_t = float(np.max(np.abs(lvl_t + x.initial)))
    return CheckReport("corollary", max(err_i, err_t), 2 * d, tol, {"I": err_i, "T": err_t})


def append_spur(x: PiecewiseLinearPath, step) -> PiecewiseLinearPath:
    """Append an out-and-back excursion ``step`` then ``-step`` at the tail."""
    step = np.asarray(step, dtype=np.float64).reshape(-1)
    t = x.times[-1]
    spur = PiecewiseLinearPath(
        np.array([t, t + 1.0, t + 2.0]), np.array([x.tail, x.tail + step, x.tail])
    )
    return concat(x, spur)


def check_preservation(
    x: PiecewiseLinearPath,
    depth: int,
    tol: float = DEFAULT_TOL,
    partner: PiecewiseLinearPath | None = None,
) -> CheckReport:
    """Both lifts of ``x`` and a tree-like equivalent partner share signatures.

    The partner defaults to ``refine(x, 3)``.
    """
    y = refine(x, 3) if partner is None else partner
    err_i, n = _deviation(
        signature(visibility_i_path(x), depth), signature(visibility_i_path(y), depth)
    )
    err_t, _ = _deviation(
        signature(visibility_t_path(x), depth), signature(visibility_t_path(y), depth)
    )
    return CheckReport("preservation", max(err_i, err_t), 2 * n, tol, {"I": err_i, "T": err_t})


# -- random suite ------------------------------------------------------------


def random_path(
    rng: np.random.Generator, dim: int, n_knots: int, low: float = -2.0, high: float = 2.0
) -> PiecewiseLinearPath:
    return PiecewiseLinearPath.from_points(rng.uniform(low, high, size=(n_knots, dim)))


def random_matched_pair(
    rng: np.random.Generator, dim: int, n_knots: tuple[int, int], low=-2.0, high=2.0
) -> tuple[PiecewiseLinearPath, PiecewiseLinearPath]:
    x = random_path(rng, dim, n_knots[0], low, high)
    pts = rng.uniform(low, high, size=(n_knots[1], dim))
    pts[0] = x.tail
    return x, PiecewiseLinearPath.from_points(pts)


def _configs(rng: np.random.Generator, trials: int) -> Iterator[tuple[int, int, int]]:
    for _ in range(trials):
        yield int(rng.integers(1, 4)), int(rng.integers(2, 9)), int(rng.integers(2, 6))


def _aggregate(name: str, reports: list[CheckReport]) -> CheckReport:
    worst = max(reports, key=lambda r: r.max_abs_error)
    details: dict[str, float] = {}
    for r in reports:
        for key, val in r.details.items():
            details[key] = max(details.get(key, 0.0), val)
    return CheckReport(
        name,
        worst.max_abs_error,
        sum(r.num_coefficients for r in reports),
        worst.tolerance,
        details,
    )


SUITE: dict[str, Callable[[np.random.Generator, PiecewiseLinearPath, int], CheckReport]] = {
    "chen": lambda rng, x, p: check_chen(
        *random_matched_pair(rng, x.dim, (x.n_knots, int(rng.integers(2, 9)))), p
    ),
    "cancellation": lambda rng, x, p: check_cancellation(x, p),
    "repeated_letters": lambda rng, x, p: check_repeated_letters(x, p),
    "general2_I": lambda rng, x, p: check_general2(x, "I", p),
    "general2_T": lambda rng, x, p: check_general2(x, "T", p),
    "general1": lambda rng, x, p: check_general1(x, p),
    "tail_flag_suffix": lambda rng, x, p: check_tail_flag_suffix(x, p),
    "corollary": lambda rng, x, p: check_corollary(x),
    "preservation": lambda rng, x, p: check_preservation(x, p),
}


def run_suite(trials: int = 200, seed: int = 0, checks: list[str] | None = None) -> list[CheckReport]:
    """Run every check on ``trials`` random paths and keep the worst case of each.

    Each trial draws dimension in 1..3, 2..8 knots and depth in 2..5, with
    coordinates uniform on [-2, 2].
    """
    names = list(SUITE) if checks is None else checks
    rng = np.random.default_rng(seed)
    collected: dict[str, list[CheckReport]] = {name: [] for name in names}
    for d, knots, p in _configs(rng, trials):
        x = random_path(rng, d, knots)
        for name in names:
            collected[name].append(SUITE[name](rng, x, p))
    return [_aggregate(name, reports) for name, reports in collected.items()]
