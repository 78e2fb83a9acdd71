"""Digit words over mixed-radix products, the odometer, and cylinder measures.

A :class:`DigitWord` is a finite window ``x_0 x_1 ... x_{L-1}`` of a point in
``prod_k Z/p_k``; index 0 is the least significant digit, i.e. the one the
odometer increments.  Maps that need digits beyond the window return
:data:`UNDETERMINED`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

import numpy as np


class Undetermined:
    """Marker for results not decided by the digits inside the window."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDETERMINED"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (Undetermined, ())


UNDETERMINED = Undetermined()


def is_undetermined(obj) -> bool:
    return obj is UNDETERMINED


@dataclass(frozen=True)
class DigitWord:
    digits: tuple[int, ...]
    radices: tuple[int, ...]

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        radices = tuple(int(r) for r in self.radices)
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "radices", radices)
        if len(digits) == 0:
            raise ValueError("a digit word needs at least one digit")
        if len(digits) != len(radices):
            raise ValueError("digits and radices differ in length")
        for i, (d, r) in enumerate(zip(digits, radices)):
            if r < 2:
                raise ValueError(f"radix at position {i} is {r}, must be >= 2")
            if not 0 <= d < r:
                raise ValueError(f"digit {d} at position {i} out of range for radix {r}")

    @classmethod
    def _trusted(cls, digits: tuple, radices: tuple) -> "DigitWord":
        # caller guarantees validity; skips the checks in __post_init__
        obj = object.__new__(cls)
        object.__setattr__(obj, "digits", digits)
        object.__setattr__(obj, "radices", radices)
        return obj

    @classmethod
    def dyadic(cls, digits: Sequence[int]) -> "DigitWord":
        digits = tuple(digits)
        return cls(digits, (2,) * len(digits))

    @classmethod
    def from_string(cls, text: str, radices: Sequence[int] | None = None) -> "DigitWord":
        """Parse ``"0110"`` (one character per digit) or ``"3,0,2"``.

        Without explicit radices, a plain string is dyadic and a comma list
        takes radix ``max(digit) + 1`` clamped below at 2 -- pass radices for
        anything else.
        """
        text = text.strip()
        if "," in text:
            digits = tuple(int(t) for t in text.split(","))
        else:
            digits = tuple(int(c) for c in text)
        if radices is None:
            radix = 2 if "," not in text else max(2, max(digits) + 1)
            radices = (radix,) * len(digits)
        return cls(digits, tuple(radices))

    @classmethod
    def from_value(cls, value: int, radices: Sequence[int]) -> "DigitWord":
        radices = tuple(radices)
        if not 0 <= value < capacity(radices):
            raise ValueError(f"{value} does not fit in radices {radices}")
        digits = []
        for r in radices:
            value, d = divmod(value, r)
            digits.append(d)
        return cls._trusted(tuple(digits), radices)

    def __len__(self):
        return len(self.digits)

    def __str__(self):
        if all(r <= 10 for r in self.radices):
            return "".join(str(d) for d in self.digits)
        return ",".join(str(d) for d in self.digits)

    @property
    def is_dyadic(self) -> bool:
        return all(r == 2 for r in self.radices)

    def replace_digits(self, digits: Sequence[int]) -> "DigitWord":
        digits = tuple(digits)
        if len(digits) != len(self.radices) or not all(0 <= d < r for d, r in zip(digits, self.radices)):
            raise ValueError(f"digits {digits} do not fit radices {self.radices}")
        return DigitWord._trusted(digits, self.radices)


StepResult = Union[DigitWord, Undetermined]


def capacity(radices: Sequence[int]) -> int:
    out = 1
    for r in radices:
        out *= r
    return out


def value(w: DigitWord) -> int:
    """Mixed-radix positional value ``sum d_i * prod_{j<i} r_j``."""
    total = 0
    place = 1
    for d, r in zip(w.digits, w.radices):
        total += d * place
        place *= r
    return total


def odometer_step(w: DigitWord) -> StepResult:
    digits = list(w.digits)
    for i, r in enumerate(w.radices):
        if digits[i] + 1 < r:
            digits[i] += 1
            return w.replace_digits(digits)
        digits[i] = 0
    return UNDETERMINED


def cyclic_odometer_step(w: DigitWord) -> DigitWord:
    """Odometer with the all-maximal window wrapping to zero (``+1 mod capacity``)."""
    out = odometer_step(w)
    if out is UNDETERMINED:
        return w.replace_digits([0] * len(w))
    return out


def add_natural(w: DigitWord, j: int) -> StepResult:
    if j < 0:
        raise ValueError("j must be a natural number")
    total = value(w) + j
    if total >= capacity(w.radices):
        return UNDETERMINED
    return DigitWord.from_value(total, w.radices)


def all_words(radices: Sequence[int]) -> Iterator[DigitWord]:
    """Every word with the given radices, in increasing value."""
    radices = tuple(radices)
    for v in range(capacity(radices)):
        yield DigitWord.from_value(v, radices)


def dyadic_words(length: int) -> Iterator[DigitWord]:
    if length < 1:
        raise ValueError("length must be >= 1")
    radices = (2,) * length
    shifts = range(length)
    for v in range(1 << length):
        yield DigitWord._trusted(tuple((v >> i) & 1 for i in shifts), radices)


@dataclass(frozen=True)
class MeasureSpec:
    """Product measure on digit words: ``"haar"`` or dyadic ``"bernoulli"``.

    ``p`` is the probability of digit 1 and must lie strictly inside (0, 1).
    """

    kind: str = "haar"
    p: Fraction = Fraction(1, 2)

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "p", Fraction(self.p))
        if kind not in ("haar", "bernoulli"):
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if kind == "bernoulli" and not 0 < self.p < 1:
            raise ValueError("Bernoulli parameter must lie strictly between 0 and 1")

    @classmethod
    def haar(cls) -> "MeasureSpec":
        return cls("haar")

    @classmethod
    def bernoulli(cls, p) -> "MeasureSpec":
        return cls("bernoulli", Fraction(p))

    def check_radices(self, radices: Sequence[int]) -> None:
        if self.kind == "bernoulli" and any(r != 2 for r in radices):
            raise ValueError("Bernoulli measures are defined on dyadic words only")


def cylinder_measure(w: DigitWord, spec: MeasureSpec) -> Fraction:
    spec.check_radices(w.radices)
    if spec.kind == "haar":
        return Fraction(1, capacity(w.radices))
    ones = sum(w.digits)
    zeros = len(w) - ones
    return spec.p**ones * (1 - spec.p) ** zeros


def sample_word(
    spec: MeasureSpec,
    length: int,
    rng: np.random.Generator | int | None = None,
    radices: Sequence[int] | None = None,
) -> DigitWord:
    if length < 1:
        raise ValueError("length must be >= 1")
    radices = tuple(radices) if radices is not None else (2,) * length
    if len(radices) != length:
        raise ValueError("radices length must equal word length")
    spec.check_radices(radices)
    rng = np.random.default_rng(rng)
    if spec.kind == "haar":
        digits = [int(rng.integers(r)) for r in radices]
    else:
        digits = (rng.random(length) < float(spec.p)).astype(int).tolist()
    return DigitWord(tuple(digits), radices)


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())
