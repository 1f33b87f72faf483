"""Independent reference computations used by the tests.

Nothing here imports the package's arithmetic: prime fields use plain modular
integers, and F_9 uses Gaussian integers mod 3 (valid because the library's
default F_9 modulus is t^2 + 1, so t behaves like i).
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def naive_rank_gf2(rows: list[list[int]]) -> int:
    """Textbook elimination on unpacked lists."""
    m = [[x & 1 for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                m[r] = [a ^ b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def naive_matmul_gf2(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return [[sum(a[i][t] & b[t][j] for t in range(k)) % 2 for j in range(m)] for i in range(n)]


def poly_has_root(coeffs, p: int) -> bool:
    """Evaluate a polynomial (constant term first) at every residue."""
    return any(sum(c * x**k for k, c in enumerate(coeffs)) % p == 0 for x in range(p))


class GaussF9:
    """F_9 as {a + b i : a, b in F_3}, encoded a + 3 b."""

    q = 9

    @staticmethod
    def split(x):
        return x % 3, x // 3

    @classmethod
    def add(cls, x, y):
        (a, b), (c, d) = cls.split(x), cls.split(y)
        return (a + c) % 3 + 3 * ((b + d) % 3)

    @classmethod
    def mul(cls, x, y):
        (a, b), (c, d) = cls.split(x), cls.split(y)
        return (a * c - b * d) % 3 + 3 * ((a * d + b * c) % 3)

    @classmethod
    def neg(cls, x):
        a, b = cls.split(x)
        return (-a) % 3 + 3 * ((-b) % 3)


class PrimeF:
    def __init__(self, p):
        self.q = p

    def add(self, x, y):
        return (x + y) % self.q

    def mul(self, x, y):
        return x * y % self.q

    def neg(self, x):
        return -x % self.q


def oracle_field(q: int):
    return GaussF9 if q == 9 else PrimeF(q)


@lru_cache(maxsize=None)
def brute_geometry(q: int, diag: tuple[int, ...]):
    """Points, Q values and square classes by direct enumeration.

    Returns (points, qvals, squares) with points canonical (leading 1) in
    lexicographic order.
    """
    F = oracle_field(q)
    n = len(diag)
    pts = []
    for v in itertools.product(range(q), repeat=n):
        lead = next((x for x in v if x), None)
        if lead == 1:
            pts.append(v)
    squares = {F.mul(x, x) for x in range(1, q)}

    def form(x, y):
        acc = 0
        for d, a, b in zip(diag, x, y):
            acc = F.add(acc, F.mul(d, F.mul(a, b)))
        return acc

    qvals = [form(P, P) for P in pts]
    return pts, qvals, squares, form
