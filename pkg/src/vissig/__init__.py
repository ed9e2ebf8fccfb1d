"""Signature features of piecewise-linear paths with visibility transforms."""

from .path import (
    PiecewiseLinearPath,
    concat,
    path_from_stream,
    refine,
    reverse,
    translate,
)
from .signature import iterated_integral_oracle, log_signature, segment_signature, signature
from .tensor import (
    TensorSeries,
    coeff,
    flatten,
    tensor_exp,
    tensor_log,
    tensor_mul,
    unflatten,
    word_count,
    words,
)
from .transforms import (
    TransformSpec,
    apply_chain,
    lead_lag,
    lift_visible,
    parse_chain,
    time_augment,
    visibility_i_discrete,
    visibility_prefix_path,
    visibility_suffix_path,
    visibility_t_discrete,
)

__version__ = "0.1.0"
