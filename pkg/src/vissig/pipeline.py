"""Batch feature extraction: JSONL streams in, CSV feature table out."""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .path import InputError, as_stream, path_from_stream
from .signature import log_signature, signature
from .tensor import flatten, word_count, words
from .transforms import TransformSpec, apply_chain, format_chain, output_dim, validate_chain

log = logging.getLogger(__name__)

FEATURE_KINDS = ("signature", "logsignature")
_KIND_ALIASES = {"sig": "signature", "logsig": "logsignature"}


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ExtractionError(ValueError):
    def __init__(self, stream_id: str, cause: Exception):
        super().__init__(f"stream {stream_id!r}: {cause}")
        self.stream_id = stream_id


@dataclass(frozen=True)
class FeatureRecord:
    id: str
    label: str | None
    features: np.ndarray


@dataclass(frozen=True)
class RunConfig:
    depth: int
    chain: tuple[TransformSpec, ...] = ()
    kind: str = "signature"
    include_constant: bool = False
    seed: int = 0
    workers: int = 1
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind, self.kind)
        if kind not in FEATURE_KINDS:
            raise ValueError(f"feature kind must be sig or logsig, got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "chain", tuple(self.chain))
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        validate_chain(self.chain)

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "transforms": format_chain(self.chain),
            "feature": self.kind,
            "include_constant": self.include_constant,
            "seed": self.seed,
            # time channel runs over [0, 1], not over raw indices
            "time_channel": "normalized_0_1",
        }


def read_streams(source: IO[str]) -> list[tuple[str, str | None, np.ndarray]]:
    out = []
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"malformed JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise ParseError(lineno, "expected a JSON object")
        sid = obj.get("id")
        if not isinstance(sid, str):
            raise ParseError(lineno, "missing string field 'id'")
        label = obj.get("label")
        if label is not None and not isinstance(label, str):
            label = str(label)
        points = obj.get("points")
        if not isinstance(points, list) or not points:
            raise ParseError(lineno, "'points' must be a non-empty array of rows")
        if not all(isinstance(row, list) for row in points):
            raise ParseError(lineno, "every entry of 'points' must be an array")
        widths = {len(row) for row in points}
        if len(widths) != 1:
            raise ParseError(lineno, f"ragged rows (widths {sorted(widths)})")
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for row in points for v in row):
            raise ParseError(lineno, "'points' must contain only numbers")
        try:
            stream = as_stream(points)
        except InputError as exc:
            raise ParseError(lineno, str(exc)) from None
        out.append((sid, label, stream))
    return out


def feature_length(d_in: int, config: RunConfig) -> int:
    d_out = output_dim(d_in, config.chain)
    return word_count(d_out, config.depth) + (1 if config.include_constant else 0)


def _features(stream: np.ndarray, config: RunConfig) -> np.ndarray:
    transformed = apply_chain(stream, config.chain)
    path = path_from_stream(transformed)
    series = signature(path, config.depth) if config.kind == "signature" else log_signature(
        path, config.depth
    )
    return flatten(series, config.include_constant)


def extract(
    streams: Sequence[tuple[str, str | None, np.ndarray]], config: RunConfig
) -> list[FeatureRecord]:
    """Features for each stream, in input order."""

    def one(item):
        sid, label, stream = item
        try:
            return FeatureRecord(sid, label, _features(stream, config))
        except (InputError, ValueError) as exc:
            raise ExtractionError(sid, exc) from exc

    if config.workers > 1 and len(streams) > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            records = list(pool.map(one, streams))
    else:
        records = [one(item) for item in streams]

    dims = {r.features.size for r in records}
    if len(dims) > 1:
        raise ExtractionError(
            records[0].id, ValueError(f"streams give different feature lengths {sorted(dims)}")
        )
    return records


def word_name(word: Sequence[int], alphabet: int) -> str:
    sep = "" if alphabet <= 9 else "-"
    return "s_" + sep.join(str(letter) for letter in word)


def feature_names(alphabet: int, depth: int, include_constant: bool = False) -> list[str]:
    return [word_name(w, alphabet) for w in words(alphabet, depth, include_empty=include_constant)]


def _alphabet_for(length: int, depth: int, include_constant: bool) -> int:
    target = length - (1 if include_constant else 0)
    for d in range(1, target + 1):
        if word_count(d, depth) == target:
            return d
    raise ValueError(f"no alphabet gives {target} features at depth {depth}")


def write_features(
    records: Iterable[FeatureRecord],
    sink: IO[str],
    alphabet: int | None = None,
    depth: int = 1,
    include_constant: bool = False,
) -> None:
    """CSV with header ``id,label,s_<word>...`` and 17 significant digits.

    ``alphabet`` is inferred from the feature length when omitted; with no
    records and no alphabet only ``id,label`` is written.
    """
    records = list(records)
    lengths = {r.features.size for r in records}
    if len(lengths) > 1:
        raise RuntimeError(f"records have inconsistent feature lengths {sorted(lengths)}")
    if alphabet is None and records:
        alphabet = _alphabet_for(lengths.pop(), depth, include_constant)
    names = feature_names(alphabet, depth, include_constant) if alphabet else []
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["id", "label", *names])
    for r in records:
        writer.writerow([r.id, r.label or "", *(format(v, ".17g") for v in r.features)])


def features_to_csv(records, **kwargs) -> str:
    buf = io.StringIO()
    write_features(records, buf, **kwargs)
    return buf.getvalue()
