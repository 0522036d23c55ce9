"""Exact dyadic pore analysis, distance-weight means and pore-length statistics.

Rationals are exchanged as :class:`fractions.Fraction`; ints and ``"p/q"`` strings
are accepted wherever a rational is expected.
"""

from ._core import *  # noqa: F401,F403
from ._core import (
    SCHEMA,
    ContractionSequence,
    Cube,
    InsufficientDepthError,
    PoreMetricsError,
    PreconditionError,
    SetOracle,
    UnsupportedError,
)

__version__ = "0.1.0"
