"""Ordered graded graphs, paths, and the adic successor.

Paths are encoded as digit words by recording, at every level, the position of
the chosen edge among the edges leaving its source (in the order the edges are
listed).  With out-degree at most ``p`` this places the path space inside the
``p``-adic integers, which is how the odometer comparison is carried out.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Sequence

import numpy as np

from .dyadic_core import DigitWord, add_natural, value


class MaximalPath:
    """Returned by :func:`adic_successor` for the last path into a vertex."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MAXIMAL_PATH"

    def __bool__(self):
        return False


MAXIMAL_PATH = MaximalPath()


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    order: int


@dataclass(frozen=True)
class GradedGraph:
    """``vertices[n]`` are the labels at level n; ``edges[n]`` go from level n to n+1.

    ``Edge.order`` is the edge's rank among the edges entering its target.
    Level 0 must contain exactly one vertex (the root).
    """

    vertices: tuple[tuple[Hashable, ...], ...]
    edges: tuple[tuple[Edge, ...], ...]
    _incoming: tuple = field(init=False, repr=False, compare=False)
    _out_index: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = tuple(tuple(level) for level in self.vertices)
        edges = tuple(tuple(Edge(*e) if not isinstance(e, Edge) else e for e in lvl) for lvl in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if len(vertices) != len(edges) + 1:
            raise ValueError("need one more vertex level than edge levels")
        if len(vertices[0]) != 1:
            raise ValueError("level 0 must hold a single root vertex")
        incoming = []
        out_index = []
        for n, lvl in enumerate(edges):
            into = [[] for _ in vertices[n + 1]]
            seen_out = Counter()
            outs = []
            for idx, e in enumerate(lvl):
                if not 0 <= e.source < len(vertices[n]) or not 0 <= e.target < len(vertices[n + 1]):
                    raise ValueError(f"edge {e} at level {n} references a missing vertex")
                into[e.target].append(idx)
                outs.append(seen_out[e.source])
                seen_out[e.source] += 1
            for t, lst in enumerate(into):
                if not lst:
                    raise ValueError(f"vertex {vertices[n + 1][t]!r} at level {n + 1} has no incoming edge")
                lst.sort(key=lambda i: lvl[i].order)
                if [lvl[i].order for i in lst] != list(range(len(lst))):
                    raise ValueError(f"edge orders into vertex {vertices[n + 1][t]!r} are not 0..d-1")
            incoming.append(tuple(tuple(lst) for lst in into))
            out_index.append(tuple(outs))
        object.__setattr__(self, "_incoming", tuple(incoming))
        object.__setattr__(self, "_out_index", tuple(out_index))

    @property
    def levels(self) -> int:
        return len(self.edges)

    def incoming(self, level: int, target: int) -> tuple[int, ...]:
        """Edge indices at ``level`` entering ``target``, in local order."""
        return self._incoming[level][target]

    def out_index(self, level: int, edge: int) -> int:
        return self._out_index[level][edge]

    def out_degree(self, level: int, vertex: int) -> int:
        return sum(1 for e in self.edges[level] if e.source == vertex)

    def max_out_degree(self, upto: int | None = None) -> int:
        upto = self.levels if upto is None else upto
        best = 0
        for n in range(upto):
            counts = Counter(e.source for e in self.edges[n])
            if counts:
                best = max(best, max(counts.values()))
        return best

    def to_dict(self) -> dict:
        return {
            "levels": self.levels,
            "vertices": [[_jsonable(v) for v in lvl] for lvl in self.vertices],
            "edges": [[[e.source, e.target, e.order] for e in lvl] for lvl in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GradedGraph":
        vertices = [[tuple(v) if isinstance(v, list) else v for v in lvl] for lvl in data["vertices"]]
        edges = [[Edge(*e) for e in lvl] for lvl in data["edges"]]
        graph = cls(vertices, edges)
        if "levels" in data and data["levels"] != graph.levels:
            raise ValueError("declared level count disagrees with the edge lists")
        return graph

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GradedGraph":
        return cls.from_dict(json.loads(text))


def _jsonable(v):
    return list(v) if isinstance(v, tuple) else v


PathPrefix = tuple  # edge index per level, levels 0..n-1


def pascal_graph(n: int) -> GradedGraph:
    """Pascal triangle with ``n`` edge levels; vertices are ``(zeros, ones)``.

    Each vertex lists its "append 0" edge before its "append 1" edge, so a
    path's out-index encoding is the binary word itself.  Into a target the
    edge from the source with more ones comes first; with this order the adic
    successor is the Pascal map.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    vertices = [[(z, level - z) for z in range(level, -1, -1)] for level in range(n + 1)]
    index = [{v: i for i, v in enumerate(lvl)} for lvl in vertices]
    edges = []
    for level in range(n):
        lvl = []
        for (z, o) in vertices[level]:
            src = index[level][(z, o)]
            for digit, tgt in ((0, (z + 1, o)), (1, (z, o + 1))):
                tz, to = tgt
                # into (tz, to): digit-0 edge comes from (tz-1, to), which has more ones
                has_other = (tz > 0 and to > 0)
                order = 0 if digit == 0 or not has_other else 1
                lvl.append(Edge(src, index[level + 1][tgt], order))
        edges.append(lvl)
    return GradedGraph(vertices, edges)


def chain_graph(n: int) -> GradedGraph:
    """One vertex per level and one edge between consecutive levels."""
    return GradedGraph([[i] for i in range(n + 1)], [[Edge(0, 0, 0)] for _ in range(n)])


def random_graded_graph(
    levels: int,
    p: int,
    max_width: int = 6,
    rng: np.random.Generator | int | None = None,
    order: str = "random",
) -> GradedGraph:
    """Random ordered graph with out-degree <= p and every vertex reachable.

    ``order="random"`` shuffles the edge order into each target.
    ``order="digit"`` makes edges into a target carry distinct out-indices and
    orders them by out-index; such graphs always pass
    :func:`verify_induced_over_odometer`.
    """
    rng = np.random.default_rng(rng)
    if order == "digit":
        return _digit_ordered_graph(levels, p, max_width, rng)
    if order != "random":
        raise ValueError(f"unknown order mode {order!r}")
    widths = [1]
    edges = []
    for _ in range(levels):
        width = widths[-1]
        new_width = int(rng.integers(1, min(max_width, p * width) + 1))
        capacity = [p] * width
        pairs = []
        for t in range(new_width):
            open_sources = [s for s in range(width) if capacity[s] > 0]
            s = int(rng.choice(open_sources))
            capacity[s] -= 1
            pairs.append((s, t))
        for s in range(width):
            extra = int(rng.integers(0, capacity[s] + 1))
            for _ in range(extra):
                pairs.append((s, int(rng.integers(new_width))))
        order_of = {}
        for t in range(new_width):
            into = [i for i, (_, tt) in enumerate(pairs) if tt == t]
            for rank, i in enumerate(rng.permutation(into).tolist()):
                order_of[i] = rank
        listing = rng.permutation(len(pairs)).tolist()
        edges.append([Edge(pairs[i][0], pairs[i][1], order_of[i]) for i in listing])
        widths.append(new_width)
    vertices = [list(range(w)) for w in widths]
    return GradedGraph(vertices, edges)


def _digit_ordered_graph(levels, p, max_width, rng):
    widths = [1]
    edges = []
    for _ in range(levels):
        width = widths[-1]
        degree = rng.integers(1, p + 1, size=width).tolist()
        per_digit = [sum(1 for d in degree if d > digit) for digit in range(p)]
        lo, hi = per_digit[0], min(sum(per_digit), max(max_width, per_digit[0]))
        new_width = int(rng.integers(lo, hi + 1))
        while True:
            # slots sharing a digit go to distinct targets
            target_of = {}
            for digit in range(p):
                sources = [s for s in range(width) if degree[s] > digit]
                picks = rng.choice(new_width, size=len(sources), replace=False).tolist()
                for s, t in zip(sources, picks):
                    target_of[(s, digit)] = t
            if len(set(target_of.values())) == new_width:
                break
        lvl = []
        for s in range(width):
            for digit in range(degree[s]):
                t = target_of[(s, digit)]
                rank = sum(1 for (s2, d2), t2 in target_of.items() if t2 == t and d2 < digit)
                lvl.append(Edge(s, t, rank))
        edges.append(lvl)
        widths.append(new_width)
    return GradedGraph([list(range(w)) for w in widths], edges)


def iter_paths(g: GradedGraph, height: int | None = None) -> Iterator[PathPrefix]:
    height = g.levels if height is None else height

    def walk(level, vertex, prefix):
        if level == height:
            yield tuple(prefix)
            return
        for idx, e in enumerate(g.edges[level]):
            if e.source == vertex:
                prefix.append(idx)
                yield from walk(level + 1, e.target, prefix)
                prefix.pop()

    yield from walk(0, 0, [])


def terminal_vertex(g: GradedGraph, path: PathPrefix) -> int:
    vertex = 0
    for level, idx in enumerate(path):
        e = g.edges[level][idx]
        if e.source != vertex:
            raise ValueError(f"path breaks at level {level}")
        vertex = e.target
    return vertex


def minimal_path(g: GradedGraph, level: int, vertex: int) -> PathPrefix:
    """The first path (in adic order) from the root to ``vertex`` at ``level``."""
    out = []
    for n in range(level - 1, -1, -1):
        idx = g.incoming(n, vertex)[0]
        out.append(idx)
        vertex = g.edges[n][idx].source
    return tuple(reversed(out))


def maximal_path(g: GradedGraph, level: int, vertex: int) -> PathPrefix:
    out = []
    for n in range(level - 1, -1, -1):
        idx = g.incoming(n, vertex)[-1]
        out.append(idx)
        vertex = g.edges[n][idx].source
    return tuple(reversed(out))


def adic_successor(g: GradedGraph, path: PathPrefix):
    """Next path into the same terminal vertex, or :data:`MAXIMAL_PATH`.

    Paths are compared at the highest level where they differ, using the
    local edge order there.
    """
    path = tuple(path)
    terminal_vertex(g, path)
    for level, idx in enumerate(path):
        e = g.edges[level][idx]
        into = g.incoming(level, e.target)
        if e.order + 1 < len(into):
            nxt = into[e.order + 1]
            below = minimal_path(g, level, g.edges[level][nxt].source)
            return below + (nxt,) + path[level + 1 :]
    return MAXIMAL_PATH


def encode_path(g: GradedGraph, path: PathPrefix, p: int) -> DigitWord:
    digits = [g.out_index(level, idx) for level, idx in enumerate(path)]
    return DigitWord(tuple(digits), (p,) * len(digits))


def decode_word(g: GradedGraph, w: DigitWord) -> PathPrefix:
    """Inverse of :func:`encode_path`: follow out-edge ``w[n]`` at each level."""
    vertex = 0
    out = []
    for level, d in enumerate(w.digits):
        for idx, e in enumerate(g.edges[level]):
            if e.source == vertex and g.out_index(level, idx) == d:
                out.append(idx)
                vertex = e.target
                break
        else:
            raise ValueError(f"no out-edge {d} at level {level}")
    return tuple(out)


@dataclass
class InducedReport:
    passed: bool
    p: int
    height: int
    paths: int
    non_maximal: int
    j_histogram: dict[int, int]
    increments: list[tuple[str, int]]
    counterexamples: list[dict]

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "p": self.p,
            "height": self.height,
            "paths": self.paths,
            "non_maximal": self.non_maximal,
            "j_histogram": {str(k): v for k, v in sorted(self.j_histogram.items())},
            "counterexamples": self.counterexamples,
        }


def verify_induced_over_odometer(g: GradedGraph, p: int, height: int) -> InducedReport:
    """Check that the adic successor is ``x -> x + j`` with ``j >= 1`` in the p-odometer.

    Raises ValueError when some vertex below ``height`` has more than ``p``
    outgoing edges (the check is undefined there).
    """
    if height > g.levels:
        raise ValueError(f"height {height} exceeds the graph's {g.levels} levels")
    degree = g.max_out_degree(height)
    if degree > p:
        raise ValueError(f"out-degree {degree} exceeds p={p}")
    hist = Counter()
    increments = []
    bad = []
    total = 0
    for path in iter_paths(g, height):
        total += 1
        succ = adic_successor(g, path)
        if succ is MAXIMAL_PATH:
            continue
        src, dst = encode_path(g, path, p), encode_path(g, succ, p)
        j = value(dst) - value(src)
        if j < 1 or add_natural(src, j) != dst:
            bad.append({"path": str(src), "successor": str(dst), "j": j})
            continue
        hist[j] += 1
        increments.append((str(src), j))
    return InducedReport(
        passed=not bad,
        p=p,
        height=height,
        paths=total,
        non_maximal=sum(hist.values()) + len(bad),
        j_histogram=dict(hist),
        increments=increments,
        counterexamples=bad,
    )
