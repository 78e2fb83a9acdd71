"""Two-sided random-walk trajectories on finitely generated groups.

A trajectory window ``y_{n0}, ..., y_{n1}`` factors as its increments
``s_n = y_n^{-1} y_{n+1}`` plus the anchor point ``y_{n0}``.  The invariant
measure on trajectories is the product of the i.i.d. increment law with
counting measure on the group, so cylinder masses are exact rationals that
may exceed 1.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

Element = Hashable


class Group:
    """Minimal group backend: elements are hashable, sortable values."""

    name = "group"

    def identity(self):
        raise NotImplementedError

    def multiply(self, a, b):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def standard_generators(self) -> list:
        """A symmetric generating set."""
        raise NotImplementedError

    def parse(self, token: str):
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def sort_key(self, a):
        return a

    def __eq__(self, other):
        return type(self) is type(other) and vars(self) == vars(other)

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(vars(self).items()))))


class IntegerLattice(Group):
    """``Z^d`` with elements as integer tuples.

    Tokens are ``a;b;...`` points; for ``d > 1`` the tokens ``+i``/``-i`` are
    the unit vectors, while in ``Z`` a signed token is just an integer.
    """

    def __init__(self, dim: int = 1):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        self.name = f"z:{dim}"

    def identity(self):
        return (0,) * self.dim

    def multiply(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, a):
        return tuple(-x for x in a)

    def unit(self, i: int, sign: int = 1):
        v = [0] * self.dim
        v[i] = sign
        return tuple(v)

    def standard_generators(self):
        gens = []
        for i in range(self.dim):
            gens += [self.unit(i, 1), self.unit(i, -1)]
        return gens

    def parse(self, token: str):
        token = token.strip()
        if self.dim == 1 or ";" in token or token[:1] not in ("+", "-"):
            vals = tuple(int(t) for t in token.split(";"))
            if len(vals) != self.dim:
                raise ValueError(f"{token!r} is not a point of Z^{self.dim}")
            return vals
        i = int(token[1:]) - 1
        if not 0 <= i < self.dim:
            raise ValueError(f"coordinate {i + 1} out of range")
        return self.unit(i, 1 if token[0] == "+" else -1)

    def format(self, a):
        return ";".join(str(x) for x in a)


class CyclicGroup(Group):
    """``Z/q`` with integer residues."""

    def __init__(self, q: int):
        if q < 1:
            raise ValueError("q must be >= 1")
        self.q = q
        self.name = f"cyclic:{q}"

    def identity(self):
        return 0

    def multiply(self, a, b):
        return (a + b) % self.q

    def inverse(self, a):
        return (-a) % self.q

    def standard_generators(self):
        return sorted({1 % self.q, (-1) % self.q})

    def parse(self, token: str):
        return int(token.strip()) % self.q


class FreeGroup(Group):
    """Free group on ``k`` letters; elements are reduced tuples of ``+-1..+-k``.

    Letters print as ``a, b, c, ...`` and their inverses as ``A, B, C, ...``;
    the identity prints as ``e``.
    """

    def __init__(self, k: int = 2):
        if not 1 <= k <= 26:
            raise ValueError("k must be between 1 and 26")
        self.k = k
        self.name = f"free:{k}"

    def identity(self):
        return ()

    def multiply(self, a, b):
        out = list(a)
        for x in b:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def inverse(self, a):
        return tuple(-x for x in reversed(a))

    def standard_generators(self):
        gens = []
        for i in range(1, self.k + 1):
            gens += [(i,), (-i,)]
        return gens

    def parse(self, token: str):
        token = token.strip()
        if token in ("", "e"):
            return ()
        word = []
        for c in token:
            i = ord(c.lower()) - ord("a") + 1
            if not 1 <= i <= self.k:
                raise ValueError(f"letter {c!r} not in the free group on {self.k} letters")
            word.append(i if c.islower() else -i)
        return self.multiply((), tuple(word))

    def format(self, a):
        if not a:
            return "e"
        return "".join(chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in a)

    def sort_key(self, a):
        return (len(a), a)


def parse_group(text: str) -> Group:
    """``z:d``, ``free:k`` or ``cyclic:q``."""
    kind, _, arg = text.partition(":")
    arg = int(arg) if arg else None
    if kind == "z":
        return IntegerLattice(arg or 1)
    if kind == "free":
        return FreeGroup(arg or 2)
    if kind == "cyclic":
        if arg is None:
            raise ValueError("cyclic group needs an order, e.g. cyclic:7")
        return CyclicGroup(arg)
    raise ValueError(f"unknown group {text!r}")


def check_group_axioms(group: Group, elements: Sequence) -> bool:
    e = group.identity()
    for a in elements:
        if group.multiply(a, e) != a or group.multiply(e, a) != a:
            return False
        if group.multiply(a, group.inverse(a)) != e or group.multiply(group.inverse(a), a) != e:
            return False
    for a in elements:
        for b in elements[:8]:
            for c in elements[:8]:
                if group.multiply(group.multiply(a, b), c) != group.multiply(a, group.multiply(b, c)):
                    return False
    return True


@dataclass(frozen=True)
class WalkSpec:
    group: Group
    nu: Mapping[Element, Fraction]

    def __post_init__(self):
        nu = {s: Fraction(p) for s, p in self.nu.items()}
        if not nu:
            raise ValueError("the step law needs a nonempty support")
        if any(p <= 0 for p in nu.values()):
            raise ValueError("step probabilities must be positive")
        if sum(nu.values()) != 1:
            raise ValueError(f"step probabilities sum to {sum(nu.values())}, not 1")
        ordered = {s: nu[s] for s in sorted(nu, key=self.group.sort_key)}
        object.__setattr__(self, "nu", ordered)

    @property
    def support(self) -> list:
        return list(self.nu)

    def mass(self, allowed: Iterable) -> Fraction:
        return sum((self.nu.get(s, Fraction(0)) for s in set(allowed)), Fraction(0))

    def is_symmetric(self) -> bool:
        return all(self.nu.get(self.group.inverse(s)) == p for s, p in self.nu.items())

    @classmethod
    def simple(cls, group: Group) -> "WalkSpec":
        gens = group.standard_generators()
        return cls(group, {g: Fraction(1, len(gens)) for g in gens})

    @classmethod
    def parse(cls, group: Group, text: str | None) -> "WalkSpec":
        """``"+1=2/3,-1=1/3"`` style step law; None gives the simple walk."""
        if not text:
            return cls.simple(group)
        nu = {}
        for item in text.split(","):
            token, _, prob = item.partition("=")
            s = group.parse(token)
            nu[s] = nu.get(s, Fraction(0)) + Fraction(prob.strip())
        return cls(group, nu)


def reverse_measure(spec: WalkSpec) -> WalkSpec:
    """The law of ``s^{-1}``: ``nu_bar(s^{-1}) = nu(s)``."""
    return WalkSpec(spec.group, {spec.group.inverse(s): p for s, p in spec.nu.items()})


@dataclass(frozen=True)
class Trajectory:
    """Window ``y_start .. y_{start+len-1}`` of a two-sided path."""

    spec: WalkSpec
    start: int
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("a trajectory needs at least one point")
        g = self.spec.group
        for n, (a, b) in enumerate(zip(self.points, self.points[1:])):
            s = g.multiply(g.inverse(a), b)
            if s not in self.spec.nu:
                raise ValueError(f"increment {g.format(s)} at index {self.start + n} is not in the support")

    @property
    def stop(self) -> int:
        return self.start + len(self.points) - 1

    def __getitem__(self, n: int):
        if not self.start <= n <= self.stop:
            raise IndexError(f"index {n} outside window [{self.start}, {self.stop}]")
        return self.points[n - self.start]


@dataclass(frozen=True)
class Factorization:
    start: int
    increments: tuple
    anchor: Element  # the point at index ``start``


def simulate_trajectory(
    spec: WalkSpec,
    y0,
    length: int,
    rng: np.random.Generator | int | None = None,
    start: int = 0,
) -> Trajectory:
    """``length`` points with i.i.d. increments, ``y_start = y0``."""
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = np.random.default_rng(rng)
    support = spec.support
    probs = np.array([float(spec.nu[s]) for s in support])
    probs /= probs.sum()
    picks = rng.choice(len(support), size=length - 1, p=probs) if length > 1 else []
    points = [y0]
    for i in picks:
        points.append(spec.group.multiply(points[-1], support[int(i)]))
    return Trajectory(spec, start, tuple(points))


def increments_factorization(t: Trajectory) -> Factorization:
    g = t.spec.group
    incs = tuple(g.multiply(g.inverse(a), b) for a, b in zip(t.points, t.points[1:]))
    return Factorization(t.start, incs, t.points[0])


def reconstruct(spec: WalkSpec, f: Factorization) -> Trajectory:
    points = [f.anchor]
    for s in f.increments:
        points.append(spec.group.multiply(points[-1], s))
    return Trajectory(spec, f.start, tuple(points))


def shift_trajectory(t: Trajectory) -> Trajectory:
    """``(T y)_n = y_{n-1}``: same points, indices moved up by one."""
    return Trajectory(t.spec, t.start + 1, t.points)


@dataclass(frozen=True)
class Cylinder:
    """``{s_n in steps[n] for each n} and y_0 in anchors``."""

    steps: Mapping[int, frozenset]
    anchors: frozenset

    def __post_init__(self):
        object.__setattr__(self, "steps", {int(n): frozenset(v) for n, v in self.steps.items()})
        if self.anchors is None:
            raise ValueError("the anchor set must be finite")
        object.__setattr__(self, "anchors", frozenset(self.anchors))


def cylinder_measure(spec: WalkSpec, c: Cylinder) -> Fraction:
    mass = Fraction(len(c.anchors))
    for allowed in c.steps.values():
        mass *= spec.mass(allowed)
    return mass


def shift_preimage(spec: WalkSpec, c: Cylinder) -> list[Cylinder]:
    """Disjoint cylinders whose union is ``T^{-1} c``.

    ``T^{-1} c`` constrains ``s_{n-1}`` where ``c`` constrains ``s_n`` and asks
    ``y_{-1} = y_0 s_{-1}^{-1}`` to be an anchor; splitting on ``s_{-1} = a``
    turns the anchor condition into ``y_0 in anchors * a``.
    """
    g = spec.group
    moved = {n - 1: v for n, v in c.steps.items() if n != 0}
    first = c.steps.get(0)
    pieces = []
    for a in spec.support:
        if first is not None and a not in first:
            continue
        steps = dict(moved)
        steps[-1] = frozenset([a])
        pieces.append(Cylinder(steps, frozenset(g.multiply(y, a) for y in c.anchors)))
    return pieces


@dataclass
class ShiftInvarianceReport:
    passed: bool
    measure: Fraction
    preimage_measure: Fraction
    pieces: int

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "measure": f"{self.measure.numerator}/{self.measure.denominator}",
            "preimage_measure": f"{self.preimage_measure.numerator}/{self.preimage_measure.denominator}",
            "pieces": self.pieces,
        }


def cylinder_shift_invariance_check(spec: WalkSpec, c: Cylinder) -> ShiftInvarianceReport:
    pieces = shift_preimage(spec, c)
    before = cylinder_measure(spec, c)
    after = sum((cylinder_measure(spec, p) for p in pieces), Fraction(0))
    return ShiftInvarianceReport(before == after, before, after, len(pieces))


def laplace_apply(spec: WalkSpec, f: Mapping, direction: str = "forward") -> dict:
    """``(L f)(g) = sum_s nu(s) f(g s)``; ``backward`` uses the reversed law."""
    if direction == "backward":
        spec = reverse_measure(spec)
    elif direction != "forward":
        raise ValueError("direction must be 'forward' or 'backward'")
    g = spec.group
    out: dict = {}
    for h, val in f.items():
        if val == 0:
            continue
        for s, p in spec.nu.items():
            x = g.multiply(h, g.inverse(s))  # x s = h
            out[x] = out.get(x, Fraction(0)) + p * val
    return {x: v for x, v in out.items() if v != 0}


def pairing(f: Mapping, h: Mapping) -> Fraction:
    if len(h) < len(f):
        f, h = h, f
    return sum((v * h.get(x, 0) for x, v in f.items()), Fraction(0))


def adjointness_check(spec: WalkSpec, f: Mapping, h: Mapping) -> bool:
    """``<L f, h> == <f, L_bar h>`` in exact arithmetic."""
    lhs = pairing(laplace_apply(spec, f, "forward"), h)
    rhs = pairing(f, laplace_apply(spec, h, "backward"))
    return lhs == rhs


def ball(spec: WalkSpec, radius: int, cap: int | None = None) -> list:
    """Elements within ``radius`` steps of the identity, steps from the support and its inverses."""
    g = spec.group
    gens = list(spec.support)
    for s in spec.support:
        if g.inverse(s) not in spec.nu:
            gens.append(g.inverse(s))
    start = g.identity()
    dist = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if dist[x] == radius:
            continue
        for s in gens:
            y = g.multiply(x, s)
            if y not in dist:
                dist[y] = dist[x] + 1
                order.append(y)
                queue.append(y)
                if cap is not None and len(order) > cap:
                    raise ValueError(f"ball of radius {radius} exceeds the cap of {cap} elements")
    return order


def truncated_operator(spec: WalkSpec, elements: Sequence) -> sparse.csr_matrix:
    """Matrix of ``L_nu`` on functions supported in ``elements`` (zero outside)."""
    g = spec.group
    index = {x: i for i, x in enumerate(elements)}
    rows, cols, vals = [], [], []
    for i, x in enumerate(elements):
        for s, p in spec.nu.items():
            j = index.get(g.multiply(x, s))
            if j is not None:
                rows.append(i)
                cols.append(j)
                vals.append(float(p))
    n = len(elements)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


@dataclass
class SpectralEstimate:
    value: float
    ball_size: int
    iterations: int
    converged: bool
    trace: list[float] = field(default_factory=list)
    truncation: str = "dirichlet"

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "ball_size": self.ball_size,
            "iterations": self.iterations,
            "converged": self.converged,
            "truncation": self.truncation,
            "note": "operator restricted to the ball with zero boundary values; biased low",
            "trace": self.trace,
        }


def spectral_radius_estimate(
    spec: WalkSpec,
    ball_radius: int,
    iterations: int = 100_000,
    tol: float = 1e-15,
    cap: int = 200_000,
    keep_trace: int | None = None,
) -> SpectralEstimate:
    """Top singular value of the ball-truncated operator by power iteration on ``A^T A``.

    ``trace`` holds the per-iteration estimates ``sqrt(x^T A^T A x)``;
    iteration stops once successive estimates differ by less than ``tol``.
    """
    elements = ball(spec, ball_radius, cap)
    A = truncated_operator(spec, elements)
    At = A.T.tocsr()
    x = np.ones(len(elements))
    x /= np.linalg.norm(x)
    trace = []
    est = 0.0
    converged = False
    it = 0
    for it in range(1, iterations + 1):
        y = At @ (A @ x)
        rq = float(x @ y)
        new = float(np.sqrt(max(rq, 0.0)))
        norm = np.linalg.norm(y)
        if keep_trace is None or len(trace) < keep_trace:
            trace.append(new)
        if norm == 0:
            est = 0.0
            converged = True
            break
        x = y / norm
        if abs(new - est) < tol:
            est = new
            converged = True
            break
        est = new
    return SpectralEstimate(est, len(elements), it, converged, trace)
