"""Skyscraper over the Pascal map with ceiling ``n(x) = 2^m + 2^k - 1``.

The fiber over a base word ``x`` is the set of levels ``0..n(x)``; the map
climbs one level at a time and applies the Pascal map from the top level,
landing on level 0.  The base carries Haar measure and each fiber carries
counting measure, so the total mass is infinite.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .dyadic_core import UNDETERMINED, DigitWord, dyadic_words, format_fraction
from .pascal import jump, pascal_inverse, pascal_map


@dataclass(frozen=True)
class TowerPoint:
    base: DigitWord
    level: int

    def __post_init__(self):
        if not self.base.is_dyadic:
            raise ValueError("tower bases are dyadic words")
        if self.level < 0:
            raise ValueError("tower level must be >= 0")

    def __str__(self):
        return f"({self.base},{self.level})"

    def to_dict(self) -> dict:
        return {"base": str(self.base), "level": self.level}


def _height(base: DigitWord):
    return jump(base)


def hk_step(pt: TowerPoint):
    n = _height(pt.base)
    if n is UNDETERMINED:
        return UNDETERMINED
    if pt.level > n:
        raise ValueError(f"level {pt.level} is above the fiber top {n} over {pt.base}")
    if pt.level < n:
        return TowerPoint(pt.base, pt.level + 1)
    return TowerPoint(pascal_map(pt.base), 0)


def level_map(x: DigitWord, y: int):
    """Fiber coordinate of the product form: ``y+1`` below the top, 0 at the top."""
    n = _height(x)
    if n is UNDETERMINED:
        return UNDETERMINED
    return y + 1 if y < n else 0


def base_map(x: DigitWord, y: int):
    """Base coordinate of the product form: fixed below the top, Pascal at the top."""
    n = _height(x)
    if n is UNDETERMINED:
        return UNDETERMINED
    return x if y < n else pascal_map(x)


def hk_step_biskew(pt: TowerPoint):
    """Same map as :func:`hk_step`, assembled from the two coordinate maps."""
    x = base_map(pt.base, pt.level)
    y = level_map(pt.base, pt.level)
    if x is UNDETERMINED or y is UNDETERMINED:
        return UNDETERMINED
    return TowerPoint(x, y)


def hk_inverse(pt: TowerPoint):
    if pt.level >= 1:
        return TowerPoint(pt.base, pt.level - 1)
    prev = pascal_inverse(pt.base)
    if prev is UNDETERMINED:
        return UNDETERMINED
    return TowerPoint(prev, jump(prev))


@dataclass
class Orbit:
    points: list[TowerPoint]
    undetermined: bool  # True when the orbit stopped because a step was undetermined

    def to_dict(self) -> dict:
        return {
            "points": [p.to_dict() for p in self.points],
            "undetermined": self.undetermined,
        }


def hk_orbit(pt: TowerPoint, steps: int) -> Orbit:
    points = [pt]
    for _ in range(steps):
        nxt = hk_step(points[-1])
        if nxt is UNDETERMINED:
            return Orbit(points, True)
        points.append(nxt)
    return Orbit(points, False)


def first_return_to_base(pt: TowerPoint, budget: int | None = None):
    """Iterate from level 0 until level 0 is hit again; returns ``(point, steps)``."""
    if pt.level != 0:
        raise ValueError("first return is measured from level 0")
    cur, steps = pt, 0
    while budget is None or steps < budget:
        cur = hk_step(cur)
        steps += 1
        if cur is UNDETERMINED:
            return UNDETERMINED
        if cur.level == 0:
            return cur, steps
    return UNDETERMINED


def _determined_patterns(length: int) -> Iterator[tuple[int, int, int]]:
    """``(m, k, prefix_length)`` for every determined prefix ``0^m 1^k 1 0`` that fits."""
    for size in range(2, length + 1):
        for m in range(size - 1):
            yield m, size - 2 - m, size


def level_measure(y: int, length: int) -> Fraction:
    """Haar measure of the length-``length`` words with determined jump >= y."""
    total = Fraction(0)
    for m, k, size in _determined_patterns(length):
        if 2**m + 2**k - 1 >= y:
            total += Fraction(1, 2**size)
    return total


def jump_distribution(length: int) -> dict[int, Fraction]:
    """Haar mass of each determined jump value at the given window length."""
    out: dict[int, Fraction] = {}
    for m, k, size in _determined_patterns(length):
        n = 2**m + 2**k - 1
        out[n] = out.get(n, Fraction(0)) + Fraction(1, 2**size)
    return dict(sorted(out.items()))


@dataclass
class SigmaFiniteReport:
    window: int
    level_measures: list[Fraction] = field(default_factory=list)
    cumulative: list[Fraction] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "window": self.window,
            "levels": [
                {"level": y, "measure": format_fraction(a), "cumulative": format_fraction(c)}
                for y, (a, c) in enumerate(zip(self.level_measures, self.cumulative))
            ],
        }


def tower_report(length: int, max_level: int) -> SigmaFiniteReport:
    dist = jump_distribution(length)
    report = SigmaFiniteReport(window=length)
    running = Fraction(0)
    for y in range(max_level + 1):
        mass = sum((w for n, w in dist.items() if n >= y), Fraction(0))
        running += mass
        report.level_measures.append(mass)
        report.cumulative.append(running)
    return report


def tower_mass(length: int) -> Fraction:
    """Measure of the whole truncated tower: every level up to the largest jump."""
    return sum(((n + 1) * w for n, w in jump_distribution(length).items()), Fraction(0))


@dataclass
class BijectivityReport:
    passed: bool
    bases: int
    points: int
    images: int
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "bases": self.bases,
            "points": self.points,
            "images": self.images,
            "failures": self.failures,
        }


def tower_points(length: int) -> Iterator[TowerPoint]:
    for base in dyadic_words(length):
        n = jump(base)
        if n is UNDETERMINED:
            continue
        for y in range(n + 1):
            yield TowerPoint(base, y)


def truncated_bijectivity_check(length: int) -> BijectivityReport:
    points = list(tower_points(length))
    domain = set(points)
    images = set()
    failures = []
    for pt in points:
        img = hk_step(pt)
        if img in images:
            failures.append(f"collision at {img}")
        images.add(img)
        if hk_inverse(img) != pt:
            failures.append(f"inverse fails at {pt}")
        pre = hk_inverse(pt)
        if pre is not UNDETERMINED and pre in domain and hk_step(pre) != pt:
            failures.append(f"step does not undo inverse at {pt}")
    return BijectivityReport(
        passed=not failures,
        bases=len({p.base for p in points}),
        points=len(points),
        images=len(images),
        failures=failures[:20],
    )
