"""The Pascal automorphism on dyadic windows.

The forward map finds the first ``10`` in the word, which forces the prefix
to be ``0^m 1^k 1 0``, and rewrites that prefix to ``1^k 0^m 0 1``.  The tail
after the matched prefix is copied untouched.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dyadic_core import UNDETERMINED, DigitWord, StepResult


@dataclass(frozen=True)
class PatternStats:
    m: int
    k: int

    def to_dict(self) -> dict:
        return {"m": self.m, "k": self.k}


def _require_dyadic(w: DigitWord) -> None:
    if not w.is_dyadic:
        raise ValueError("the Pascal map acts on dyadic words only")


def parse_pattern(w: DigitWord) -> PatternStats | None:
    """Return ``(m, k)`` for a window starting ``0^m 1^k 1 0``, else None."""
    _require_dyadic(w)
    d = w.digits
    for i in range(len(d) - 1):
        if d[i] == 1 and d[i + 1] == 0:
            m = 0
            while d[m] == 0:
                m += 1
            return PatternStats(m=m, k=i - m)
    return None


def pascal_step(w: DigitWord) -> tuple[StepResult, PatternStats | None]:
    stats = parse_pattern(w)
    if stats is None:
        return UNDETERMINED, None
    m, k = stats.m, stats.k
    head = (1,) * k + (0,) * m + (0, 1)
    return w.replace_digits(head + w.digits[m + k + 2 :]), stats


def pascal_map(w: DigitWord) -> StepResult:
    """:func:`pascal_step` without the pattern statistics."""
    return pascal_step(w)[0]


def pascal_inverse(w: DigitWord) -> StepResult:
    _require_dyadic(w)
    d = w.digits
    for i in range(len(d) - 1):
        if d[i] == 0 and d[i + 1] == 1:
            k = 0
            while d[k] == 1:
                k += 1
            m = i - k
            head = (0,) * m + (1,) * k + (1, 0)
            return w.replace_digits(head + d[i + 2 :])
    return UNDETERMINED


def jump_from_stats(stats: PatternStats) -> int:
    return 2**stats.m + 2**stats.k - 1


def jump(w: DigitWord):
    """``n(w) = 2^m + 2^k - 1``, or UNDETERMINED when the window has no ``10``."""
    stats = parse_pattern(w)
    if stats is None:
        return UNDETERMINED
    return jump_from_stats(stats)


def composition(w: DigitWord) -> tuple[int, int]:
    """(zeros, ones) in the window."""
    _require_dyadic(w)
    ones = sum(w.digits)
    return len(w) - ones, ones


def chain(start: DigitWord, max_steps: int | None = None) -> list[DigitWord]:
    """Iterate the Pascal map from ``start`` until it becomes undetermined."""
    out = [start]
    w = start
    while max_steps is None or len(out) <= max_steps:
        nxt = pascal_map(w)
        if nxt is UNDETERMINED:
            break
        out.append(nxt)
        w = nxt
    return out
