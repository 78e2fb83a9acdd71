"""Rank of a binary prefix inside its composition class, and sampling tools
for looking at the distribution of that rank.

The rank ``t`` of a word with ``m`` zeros is its 0-based position in the Pascal
chain through its composition class.  Because the Pascal map strictly
increases positional value, this equals the number of words with the same
composition and smaller value, which the combinatorial number system gives
directly.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

from .dyadic_core import DigitWord, MeasureSpec, format_fraction


def _rank_bits(bits: Sequence[int]) -> int:
    t = 0
    ones = 0
    for i, b in enumerate(bits):
        if b:
            ones += 1
            t += comb(i, ones)
    return t


def rank(w: DigitWord) -> int:
    if not w.is_dyadic:
        raise ValueError("rank is defined for dyadic words")
    # digit i set with r ones in positions <= i contributes C(i, r)
    return _rank_bits(w.digits)


def unrank(n: int, m: int, t: int) -> DigitWord:
    """Word of length ``n`` with ``m`` zeros and rank ``t``."""
    if not 0 <= m <= n:
        raise ValueError(f"zero count {m} out of range for length {n}")
    size = comb(n, m)
    if not 0 <= t < size:
        raise ValueError(f"rank {t} out of range [0, {size})")
    ones = n - m
    digits = [0] * n
    for i in range(n - 1, -1, -1):
        if ones and t >= comb(i, ones):
            digits[i] = 1
            t -= comb(i, ones)
            ones -= 1
    return DigitWord.dyadic(digits)


@dataclass(frozen=True)
class RankRecord:
    n: int
    m: int
    t: int
    u: Fraction

    @classmethod
    def from_word(cls, w: DigitWord) -> "RankRecord":
        ones = sum(w.digits)
        m = len(w) - ones
        t = rank(w)
        return cls(len(w), m, t, Fraction(t, comb(len(w), m)))


@dataclass(frozen=True)
class NormalizationLadder:
    """Centering ``a(n, m)`` and scale ``b(n, m) > 0`` for ``(t - a) / b``.

    The default divides by the class size ``C(n, m)``, giving ``u`` in [0, 1).
    """

    center: Callable[[int, int], Fraction] = lambda n, m: Fraction(0)
    scale: Callable[[int, int], Fraction] = lambda n, m: Fraction(comb(n, m))
    description: str = "a=0, b=C(n,m) (default, not from theory)"
    is_default: bool = True

    def apply(self, n: int, m: int, t: int) -> Fraction:
        b = Fraction(self.scale(n, m))
        if b <= 0:
            raise ValueError(f"scale b({n},{m}) = {b} is not positive")
        return (t - Fraction(self.center(n, m))) / b

    @classmethod
    def from_expressions(cls, center: str, scale: str) -> "NormalizationLadder":
        """Build from expressions in ``n`` and ``m`` such as ``"n/2"`` and ``"sqrt(n)"``.

        Irrational results are rounded to a 1e-12-accurate fraction.
        """
        import sympy

        n_sym, m_sym = sympy.symbols("n m")
        names = {"n": n_sym, "m": m_sym, "C": sympy.binomial, "comb": sympy.binomial}
        a_expr = sympy.sympify(center, locals=names)
        b_expr = sympy.sympify(scale, locals=names)

        def _eval(expr):
            def f(n, m):
                val = sympy.nsimplify(expr.subs({n_sym: n, m_sym: m}))
                if val.is_Rational:
                    return Fraction(int(val.p), int(val.q))
                return Fraction(str(sympy.N(val, 30))).limit_denominator(10**12)

            return f

        return cls(_eval(a_expr), _eval(b_expr), f"a={center}, b={scale}", False)


@dataclass
class EmpiricalCDF:
    """Right-continuous step function of weighted sample values."""

    values: list = field(default_factory=list)
    weights: list[int] = field(default_factory=list)

    @classmethod
    def from_samples(cls, samples: Iterable) -> "EmpiricalCDF":
        counts: dict = {}
        for s in samples:
            counts[s] = counts.get(s, 0) + 1
        keys = sorted(counts)
        return cls(keys, [counts[k] for k in keys])

    @property
    def total(self) -> int:
        return sum(self.weights)

    def __call__(self, x) -> Fraction:
        if not self.values:
            return Fraction(0)
        idx = bisect_right(self.values, x)
        return Fraction(sum(self.weights[:idx]), self.total)

    def quantile(self, q) -> object:
        """Smallest sample value v with CDF(v) >= q."""
        if not self.values:
            raise ValueError("empty CDF")
        need = Fraction(q) * self.total
        run = 0
        for v, w in zip(self.values, self.weights):
            run += w
            if run >= need:
                return v
        return self.values[-1]

    def merge(self, other: "EmpiricalCDF") -> "EmpiricalCDF":
        counts = dict(zip(self.values, self.weights))
        for v, w in zip(other.values, other.weights):
            counts[v] = counts.get(v, 0) + w
        keys = sorted(counts)
        return EmpiricalCDF(keys, [counts[k] for k in keys])


QUANTILES = (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(9, 10))


@dataclass
class RankSample:
    n: int
    records: list[RankRecord]
    normalized: list[Fraction]
    cdf: EmpiricalCDF
    by_m: dict[int, EmpiricalCDF]


@dataclass
class MonteCarloResult:
    seed: int | None
    measure: MeasureSpec
    normalization: NormalizationLadder
    samples: dict[int, RankSample]

    def summary(self) -> dict:
        out = {
            "seed": self.seed,
            "measure": {"kind": self.measure.kind, "p": format_fraction(self.measure.p)},
            "normalization": self.normalization.description,
            "normalization_is_default": self.normalization.is_default,
            "n": {},
        }
        for n, s in sorted(self.samples.items()):
            out["n"][str(n)] = {
                "samples": len(s.records),
                "quantiles": {str(float(q)): format_fraction(s.cdf.quantile(q)) for q in QUANTILES},
                "by_m": {
                    str(m): {
                        "samples": cdf.total,
                        "median": format_fraction(cdf.quantile(Fraction(1, 2))),
                    }
                    for m, cdf in sorted(s.by_m.items())
                },
            }
        return out


def _draw_bits(spec: MeasureSpec, n: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    if spec.kind == "haar":
        return rng.integers(0, 2, size=(samples, n), dtype=np.int8)
    return (rng.random((samples, n)) < float(spec.p)).astype(np.int8)


def monte_carlo_cdf(
    spec: MeasureSpec,
    n_ladder: Sequence[int],
    samples: int,
    norm: NormalizationLadder | None = None,
    seed: int | None = 0,
) -> MonteCarloResult:
    """Sample ranks at each word length and tabulate normalized values.

    Each length draws from its own child of ``SeedSequence(seed)``, so adding
    or reordering lengths does not change the others' samples.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if any(n < 1 for n in n_ladder):
        raise ValueError("every n must be >= 1")
    norm = norm or NormalizationLadder()
    children = np.random.SeedSequence(seed).spawn(max(n_ladder) + 1)
    out = {}
    for n in n_ladder:
        rng = np.random.default_rng(children[n])
        bits = _draw_bits(spec, n, samples, rng)
        records = []
        normalized = []
        for row in bits.tolist():
            ones = sum(row)
            m = n - ones
            t = _rank_bits(row)
            records.append(RankRecord(n, m, t, Fraction(t, comb(n, m))))
            normalized.append(norm.apply(n, m, t))
        by_m_values: dict[int, list] = {}
        for r, v in zip(records, normalized):
            by_m_values.setdefault(r.m, []).append(v)
        out[n] = RankSample(
            n=n,
            records=records,
            normalized=normalized,
            cdf=EmpiricalCDF.from_samples(normalized),
            by_m={m: EmpiricalCDF.from_samples(vals) for m, vals in by_m_values.items()},
        )
    return MonteCarloResult(seed, spec, norm, out)


def takagi(t, terms: int) -> tuple[Fraction, Fraction]:
    """Partial sum ``sum_{j<terms} 2^-j dist(2^j t, Z)`` and a bound on the tail."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    if terms < 1:
        raise ValueError("need at least one term")
    total = Fraction(0)
    x = t
    for j in range(terms):
        frac = x - (x.numerator // x.denominator)
        total += min(frac, 1 - frac) / 2**j
        x *= 2
    return total, Fraction(2, 2**terms)


def truncated_jump_expectation(length: int) -> Fraction:
    """Haar expectation of the jump over the words whose jump a window fixes."""
    if length < 2:
        raise ValueError("window length must be >= 2")
    total = Fraction(0)
    for size in range(2, length + 1):
        for m in range(size - 1):
            k = size - 2 - m
            total += Fraction(2**m + 2**k - 1, 2**size)
    return total
