"""Brute-force reference computations, kept independent of the package code.

Words here are plain tuples of 0/1 digits, least significant first.
"""
from fractions import Fraction
from itertools import product


def words(length):
    # product() varies the last position fastest; reverse so index 0 is least significant
    for bits in product((0, 1), repeat=length):
        yield tuple(reversed(bits))


def val(bits):
    return sum(b << i for i, b in enumerate(bits))


def composition_class(bits):
    ones = sum(bits)
    return sorted((w for w in words(len(bits)) if sum(w) == ones), key=val)


def brute_rank(bits):
    cls = composition_class(bits)
    return cls.index(tuple(bits))


def brute_successor(bits):
    """Next larger word with the same composition, or None at the top of the class."""
    cls = composition_class(bits)
    i = cls.index(tuple(bits))
    return cls[i + 1] if i + 1 < len(cls) else None


def brute_jump(bits):
    nxt = brute_successor(bits)
    return None if nxt is None else val(nxt) - val(bits)


def successor_table(length):
    """word -> next larger word of the same composition (None at the top)."""
    classes = {}
    for w in words(length):
        classes.setdefault(sum(w), []).append(w)
    table = {}
    for cls in classes.values():
        cls.sort(key=val)
        for a, b in zip(cls, cls[1:] + [None]):
            table[a] = b
    return table


def rank_table(length):
    """word -> index within its composition class sorted by value."""
    classes = {}
    for w in words(length):
        classes.setdefault(sum(w), []).append(w)
    table = {}
    for cls in classes.values():
        cls.sort(key=val)
        for i, w in enumerate(cls):
            table[w] = i
    return table


def brute_truncated_expectation(length):
    """Average of jump over all words whose first '10' lies inside the window."""
    table = successor_table(length)
    total = 0
    for w, nxt in table.items():
        if any(w[i] == 1 and w[i + 1] == 0 for i in range(length - 1)):
            total += val(nxt) - val(w)
    return Fraction(total, 2**length)


def tridiagonal_top_eigenvalue(radius):
    import numpy as np

    size = 2 * radius + 1
    M = np.zeros((size, size))
    for i in range(size - 1):
        M[i, i + 1] = M[i + 1, i] = 0.5
    return float(np.linalg.eigvalsh(M)[-1])


def free_group_ball_top_eigenvalue(radius):
    """Top eigenvalue of the simple walk on F_2 restricted to a ball, via eigsh."""
    import numpy as np
    from scipy.sparse import lil_matrix
    from scipy.sparse.linalg import eigsh

    letters = [1, -1, 2, -2]
    ball = [()]
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for a in letters:
                if not w or w[-1] != -a:
                    nxt.append(w + (a,))
        ball += nxt
        frontier = nxt
    index = {w: i for i, w in enumerate(ball)}
    M = lil_matrix((len(ball), len(ball)))
    for w, i in index.items():
        for a in letters:
            u = w[:-1] if w and w[-1] == -a else w + (a,)
            j = index.get(u)
            if j is not None:
                M[i, j] = 0.25
    if len(ball) <= 2:
        return float(np.linalg.eigvalsh(M.toarray())[-1])
    return float(eigsh(M.tocsr(), k=1, which="LA", return_eigenvectors=False)[0])
