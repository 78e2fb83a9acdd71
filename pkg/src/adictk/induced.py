"""Window maps built from other window maps: powers by a ceiling, first returns,
and the check that one map moves forward along the orbits of another."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .dyadic_core import (
    UNDETERMINED,
    DigitWord,
    MeasureSpec,
    StepResult,
    all_words,
    capacity,
    cyclic_odometer_step,
    cylinder_measure,
    odometer_step,
)
from .pascal import jump, pascal_inverse, pascal_map


@dataclass(frozen=True)
class TransformationSpec:
    name: str
    step: Callable[[DigitWord], StepResult]
    radix: int | None = None  # required radix for every digit, None for any

    def __call__(self, w: DigitWord) -> StepResult:
        if self.radix is not None and any(r != self.radix for r in w.radices):
            raise ValueError(f"{self.name} needs radix-{self.radix} words")
        return self.step(w)

    def power(self, w: DigitWord, n: int) -> StepResult:
        for _ in range(n):
            w = self(w)
            if w is UNDETERMINED:
                return UNDETERMINED
        return w


ODOMETER = TransformationSpec("odometer", odometer_step)
CYCLIC_ODOMETER = TransformationSpec("cyclic-odometer", cyclic_odometer_step)
PASCAL = TransformationSpec("pascal", pascal_map, radix=2)
PASCAL_INVERSE = TransformationSpec("pascal-inverse", pascal_inverse, radix=2)
IDENTITY = TransformationSpec("identity", lambda w: w)


def generalized_induced(
    base: TransformationSpec,
    ceiling: Callable[[DigitWord], object],
    name: str | None = None,
) -> TransformationSpec:
    """The map ``w -> base^{ceiling(w)}(w)``."""

    def step(w):
        n = ceiling(w)
        if n is UNDETERMINED:
            return UNDETERMINED
        if n < 0:
            raise ValueError(f"ceiling is negative ({n}) at {w}")
        return base.power(w, n)

    return TransformationSpec(name or f"{base.name}^ceiling", step, base.radix)


PASCAL_VIA_ODOMETER = generalized_induced(ODOMETER, jump, "odometer^jump")


def _as_prefixes(A: Iterable, radices: Sequence[int]) -> list[tuple[int, ...]]:
    out = []
    for a in A:
        if isinstance(a, str):
            a = DigitWord.from_string(a, radices[: len(a.split(",")) if "," in a else len(a)])
        out.append(tuple(a.digits))
    return out


def _in_set(w: DigitWord, prefixes: list[tuple[int, ...]]) -> bool:
    return any(w.digits[: len(a)] == a for a in prefixes)


def classical_induced(
    base: TransformationSpec,
    A: Iterable,
    length: int,
    radices: Sequence[int] | None = None,
) -> dict[DigitWord, object]:
    """First-return map of ``base`` to the union of cylinders ``A``.

    Every length-``length`` word in ``A`` maps to ``(return_word, time)``, or to
    UNDETERMINED when the orbit leaves the window before coming back.
    """
    radices = tuple(radices) if radices is not None else (2,) * length
    prefixes = _as_prefixes(A, radices)
    if not prefixes:
        raise ValueError("A must contain at least one cylinder")
    limit = capacity(radices)
    out = {}
    for w in all_words(radices):
        if not _in_set(w, prefixes):
            continue
        cur, time = w, 0
        result = UNDETERMINED
        while time < limit:
            cur = base(cur)
            time += 1
            if cur is UNDETERMINED:
                break
            if _in_set(cur, prefixes):
                result = (cur, time)
                break
        out[w] = result
    return out


def return_time_integral(returns: dict, spec: MeasureSpec | None = None) -> Fraction:
    """Sum of return time times cylinder measure over the determined returns."""
    spec = spec or MeasureSpec.haar()
    total = Fraction(0)
    for w, r in returns.items():
        if r is not UNDETERMINED:
            total += r[1] * cylinder_measure(w, spec)
    return total


@dataclass
class RefinementReport:
    passed: bool
    checked: int
    undetermined: int
    failures: int = 0
    j_histogram: dict[int, int] = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "checked": self.checked,
            "undetermined": self.undetermined,
            "failures": self.failures,
            "j_histogram": {str(k): v for k, v in sorted(self.j_histogram.items())},
            "counterexamples": self.counterexamples,
        }


def forward_offset(P: TransformationSpec, T: TransformationSpec, w: DigitWord, bound: int):
    """Least ``j >= 0`` with ``T^j(w) == P(w)``; None if not reached within ``bound``.

    Returns UNDETERMINED when ``P(w)`` itself is undetermined.
    """
    target = P(w)
    if target is UNDETERMINED:
        return UNDETERMINED
    cur = w
    for j in range(bound + 1):
        if cur == target:
            return j
        cur = T(cur)
        if cur is UNDETERMINED or cur == w:
            return None
    return None


def check_orbit_refinement(
    P: TransformationSpec,
    T: TransformationSpec,
    length: int,
    radices: Sequence[int] | None = None,
    max_counterexamples: int = 20,
) -> RefinementReport:
    """Does every determined ``P``-step land forward on the ``T``-orbit?"""
    radices = tuple(radices) if radices is not None else (2,) * length
    bound = capacity(radices)
    hist = Counter()
    bad = []
    checked = undetermined = failures = 0
    for w in all_words(radices):
        j = forward_offset(P, T, w, bound)
        if j is UNDETERMINED:
            undetermined += 1
            continue
        checked += 1
        if j is None:
            failures += 1
            if len(bad) < max_counterexamples:
                bad.append({"word": str(w), "image": str(P(w))})
            continue
        hist[j] += 1
    return RefinementReport(
        passed=failures == 0,
        checked=checked,
        undetermined=undetermined,
        failures=failures,
        j_histogram=dict(hist),
        counterexamples=bad,
    )
