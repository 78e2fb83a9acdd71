"""Exact window computations for the Pascal-adic map, odometers, the
Hajian-Kakutani tower and two-sided group random walks."""

__version__ = "0.1.0"

from .dyadic_core import (
    UNDETERMINED,
    DigitWord,
    MeasureSpec,
    add_natural,
    cylinder_measure,
    odometer_step,
    sample_word,
    value,
)
from .hk_tower import TowerPoint, first_return_to_base, hk_inverse, hk_step, level_measure
from .limit_stats import rank, takagi, truncated_jump_expectation, unrank
from .pascal import composition, jump, pascal_inverse, pascal_step

__all__ = [
    "UNDETERMINED",
    "DigitWord",
    "MeasureSpec",
    "TowerPoint",
    "add_natural",
    "composition",
    "cylinder_measure",
    "first_return_to_base",
    "hk_inverse",
    "hk_step",
    "jump",
    "level_measure",
    "odometer_step",
    "pascal_inverse",
    "pascal_step",
    "rank",
    "sample_word",
    "takagi",
    "truncated_jump_expectation",
    "unrank",
    "value",
]
