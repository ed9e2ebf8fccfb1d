"""Truncated tensor algebra over an alphabet of ``d`` letters.

Elements are stored densely, one flat block per level. Level ``k`` holds
``d**k`` coefficients in lexicographic order of the words, so the flat
index of a word ``(i1, ..., ik)`` (letters 1-based) is its base-``d``
value with digits ``i - 1``. That is exactly the layout produced by
``np.multiply.outer(...).ravel()``, which the product relies on.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence

import numpy as np

Word = tuple[int, ...]


class ShapeError(ValueError):
    """Operands live in different truncated tensor algebras."""


def word_count(d: int, p: int) -> int:
    """Number of non-empty words of length at most ``p`` over ``d`` letters."""
    if d < 1 or p < 0:
        raise ValueError(f"need d >= 1 and p >= 0, got d={d}, p={p}")
    if d == 1:
        return p
    return d * (d**p - 1) // (d - 1)


def words(d: int, p: int, include_empty: bool = False) -> Iterator[Word]:
    """Canonical order: by length, then lexicographically by letter value."""
    start = 0 if include_empty else 1
    for k in range(start, p + 1):
        yield from product(range(1, d + 1), repeat=k)


def word_index(word: Sequence[int], d: int) -> int:
    idx = 0
    for letter in word:
        idx = idx * d + (letter - 1)
    return idx


class TensorSeries:
    """Immutable truncated series ``sum_w c_w e_w`` with ``|w| <= depth``."""

    __slots__ = ("_alphabet", "_depth", "_levels")

    def __init__(self, alphabet: int, depth: int, levels: Sequence[np.ndarray]):
        if alphabet < 1 or depth < 0:
            raise ValueError(f"invalid alphabet={alphabet} or depth={depth}")
        if len(levels) != depth + 1:
            raise ShapeError(f"expected {depth + 1} levels, got {len(levels)}")
        frozen = []
        for k, block in enumerate(levels):
            arr = np.array(block, dtype=np.float64).reshape(-1)
            if arr.size != alphabet**k:
                raise ShapeError(f"level {k} has {arr.size} entries, expected {alphabet**k}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite coefficient at level {k}")
            arr.flags.writeable = False
            frozen.append(arr)
        self._alphabet = alphabet
        self._depth = depth
        self._levels = tuple(frozen)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, alphabet: int, depth: int) -> TensorSeries:
        return cls(alphabet, depth, [np.zeros(alphabet**k) for k in range(depth + 1)])

    @classmethod
    def unit(cls, alphabet: int, depth: int) -> TensorSeries:
        levels = [np.zeros(alphabet**k) for k in range(depth + 1)]
        levels[0][0] = 1.0
        return cls(alphabet, depth, levels)

    @classmethod
    def from_letters(
        cls, vector: Sequence[float], depth: int, constant: float = 0.0
    ) -> TensorSeries:
        """``constant + sum_i vector[i] e_(i+1)``."""
        v = np.asarray(vector, dtype=np.float64).reshape(-1)
        levels = [np.array([constant])] + [np.zeros(v.size**k) for k in range(1, depth + 1)]
        if depth >= 1:
            levels[1] = v.copy()
        return cls(v.size, depth, levels)

    @classmethod
    def from_dict(
        cls, alphabet: int, depth: int, coeffs: dict[Word, float]
    ) -> TensorSeries:
        levels = [np.zeros(alphabet**k) for k in range(depth + 1)]
        for w, c in coeffs.items():
            _check_word(w, alphabet, depth)
            levels[len(w)][word_index(w, alphabet)] = c
        return cls(alphabet, depth, levels)

    # -- accessors --------------------------------------------------------

    @property
    def alphabet(self) -> int:
        return self._alphabet

    @property
    def depth(self) -> int:
        return self._depth

    @property
    def levels(self) -> tuple[np.ndarray, ...]:
        return self._levels

    def level(self, k: int) -> np.ndarray:
        return self._levels[k]

    @property
    def constant(self) -> float:
        return float(self._levels[0][0])

    def __getitem__(self, word: Sequence[int]) -> float:
        return coeff(self, word)

    def __repr__(self) -> str:
        return f"TensorSeries(alphabet={self._alphabet}, depth={self._depth})"

    # -- arithmetic -------------------------------------------------------

    def _binary(self, other: TensorSeries, op) -> TensorSeries:
        _check_same_space(self, other)
        return TensorSeries(
            self._alphabet, self._depth, [op(a, b) for a, b in zip(self._levels, other._levels)]
        )

    def __add__(self, other: TensorSeries) -> TensorSeries:
        return self._binary(other, np.add)

    def __sub__(self, other: TensorSeries) -> TensorSeries:
        return self._binary(other, np.subtract)

    def __neg__(self) -> TensorSeries:
        return self.scale(-1.0)

    def scale(self, factor: float) -> TensorSeries:
        return TensorSeries(self._alphabet, self._depth, [factor * a for a in self._levels])

    def __mul__(self, factor: float) -> TensorSeries:
        return self.scale(factor)

    __rmul__ = __mul__

    def __matmul__(self, other: TensorSeries) -> TensorSeries:
        return tensor_mul(self, other)

    def truncate(self, depth: int) -> TensorSeries:
        if depth > self._depth:
            raise ShapeError(f"cannot raise depth {self._depth} to {depth}")
        return TensorSeries(self._alphabet, depth, self._levels[: depth + 1])

    def flatten(self, include_constant: bool = False) -> np.ndarray:
        return flatten(self, include_constant)


def _check_same_space(a: TensorSeries, b: TensorSeries) -> None:
    if a.alphabet != b.alphabet or a.depth != b.depth:
        raise ShapeError(
            f"mismatched tensor spaces: (d={a.alphabet}, p={a.depth}) vs (d={b.alphabet}, p={b.depth})"
        )


def _check_word(word: Sequence[int], d: int, p: int) -> None:
    if len(word) > p:
        raise IndexError(f"word {tuple(word)} longer than depth {p}")
    for letter in word:
        if not 1 <= letter <= d:
            raise IndexError(f"letter {letter} outside 1..{d} in word {tuple(word)}")


def _mul_levels(a: Sequence[np.ndarray], b: Sequence[np.ndarray], depth: int) -> list[np.ndarray]:
    out = []
    for n in range(depth + 1):
        acc = np.zeros(a[n].size)
        for i in range(n + 1):
            acc += np.multiply.outer(a[i], b[n - i]).ravel()
        out.append(acc)
    return out


def tensor_mul(a: TensorSeries, b: TensorSeries) -> TensorSeries:
    """Truncated concatenation product: ``(a b)_w = sum_{w = uv} a_u b_v``."""
    _check_same_space(a, b)
    return TensorSeries(a.alphabet, a.depth, _mul_levels(a.levels, b.levels, a.depth))


def tensor_exp(x: TensorSeries) -> TensorSeries:
    if x.constant != 0.0:
        raise ValueError(f"tensor_exp needs a zero constant term, got {x.constant!r}")
    # Horner: 1 + x/1 (1 + x/2 (1 + ... (1 + x/p)))
    d, p = x.alphabet, x.depth
    one = TensorSeries.unit(d, p).levels
    acc = list(one)
    for k in range(p, 0, -1):
        acc = _mul_levels([lvl / k for lvl in x.levels], acc, p)
        acc[0] = acc[0] + 1.0
    return TensorSeries(d, p, acc)


def tensor_log(x: TensorSeries) -> TensorSeries:
    if x.constant != 1.0:
        raise ValueError(f"tensor_log needs a unit constant term, got {x.constant!r}")
    d, p = x.alphabet, x.depth
    y = list(x.levels)
    y[0] = np.zeros(1)
    # Horner on sum_{k>=1} (-1)^{k+1} y^k / k = y (1 - y (1/2 - y (1/3 - ...)))
    acc = [np.zeros(d**k) for k in range(p + 1)]
    for k in range(p, 0, -1):
        acc = _mul_levels(y, acc, p)
        acc = [-lvl for lvl in acc]
        acc[0] = acc[0] + 1.0 / k
    acc = _mul_levels(y, acc, p)
    return TensorSeries(d, p, acc)


def coeff(x: TensorSeries, word: Sequence[int]) -> float:
    word = tuple(word)
    _check_word(word, x.alphabet, x.depth)
    return float(x.levels[len(word)][word_index(word, x.alphabet)])


def flatten(x: TensorSeries, include_constant: bool = False) -> np.ndarray:
    """Coefficients in canonical order (see :func:`words`)."""
    start = 0 if include_constant else 1
    return np.concatenate(x.levels[start:])


def unflatten(
    vector: Sequence[float], alphabet: int, depth: int, include_constant: bool = False
) -> TensorSeries:
    v = np.asarray(vector, dtype=np.float64).reshape(-1)
    expected = word_count(alphabet, depth) + (1 if include_constant else 0)
    if v.size != expected:
        raise ShapeError(f"vector of length {v.size}, expected {expected}")
    levels = [] if include_constant else [np.zeros(1)]
    pos = 0
    for k in range(0 if include_constant else 1, depth + 1):
        levels.append(v[pos : pos + alphabet**k])
        pos += alphabet**k
    return TensorSeries(alphabet, depth, levels)


def exp_of_letters(vector: Sequence[float], depth: int) -> TensorSeries:
    """Closed-form ``exp(sum_i v_i e_i)``: level ``k`` is ``v^{(x)k} / k!``."""
    v = np.asarray(vector, dtype=np.float64).reshape(-1)
    levels = [np.ones(1)]
    for k in range(1, depth + 1):
        levels.append(np.multiply.outer(levels[-1], v).ravel() / k)
    return TensorSeries(v.size, depth, levels)
