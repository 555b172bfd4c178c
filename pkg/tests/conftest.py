"""Independent group constructions and a literal axiom checker for tests.

Nothing here goes through coset enumeration: groups are built from
permutations or explicit arithmetic, so they can serve as oracles for the
library's own constructions.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from multlie.core import FiniteMLA
from multlie.groups import GroupTable


def perm_group(gens: list[tuple[int, ...]]) -> GroupTable:
    """Cayley table of the permutation group generated by ``gens``."""
    deg = len(gens[0])
    ident = tuple(range(deg))
    elems = [ident]
    index = {ident: 0}
    for p in elems:
        for g in gens:
            q = tuple(g[p[i]] for i in range(deg))  # apply p then g
            if q not in index:
                index[q] = len(elems)
                elems.append(q)
    n = len(elems)
    mul = np.zeros((n, n), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            mul[i, j] = index[tuple(p[q[k]] for k in range(deg))]
    return GroupTable(mul)


def mod_table(*moduli: int) -> GroupTable:
    """Direct product of cyclic groups by coordinate arithmetic."""
    elems = list(itertools.product(*(range(m) for m in moduli)))
    index = {e: i for i, e in enumerate(elems)}
    mul = [[index[tuple((a + b) % m for a, b, m in zip(x, y, moduli))] for y in elems] for x in elems]
    return GroupTable(mul)


def s3() -> GroupTable:
    return perm_group([(1, 0, 2), (1, 2, 0)])


def d4() -> GroupTable:
    return perm_group([(1, 2, 3, 0), (3, 2, 1, 0)])


def a4() -> GroupTable:
    return perm_group([(1, 0, 3, 2), (1, 2, 0, 3)])


def q8() -> GroupTable:
    """Quaternion units as signed basis indices (0=1, 1=i, 2=j, 3=k)."""
    table = {
        (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elems = [(s, u) for s in (1, -1) for u in range(4)]
    index = {e: i for i, e in enumerate(elems)}

    def mult(x, y):
        (s, u), (t, v) = x, y
        if u == 0 or v == 0:
            return (s * t, u + v)
        r, w = table[u, v]
        return (s * t * r, w)

    return GroupTable([[index[mult(x, y)] for y in elems] for x in elems])


def literal_axiom_failures(m: FiniteMLA) -> list[int]:
    """Numbers of the axioms that fail, checked triple by triple in Python."""
    mul = m.group.mul.tolist()
    inv = m.group.inv.tolist()
    s = m.star.tolist()
    n = m.n

    def c(x, y):
        return mul[mul[x][y]][inv[x]]

    bad = set()
    for x in range(n):
        if s[x][x] != 0:
            bad.add(1)
        for y in range(n):
            for z in range(n):
                if s[x][mul[y][z]] != mul[s[x][y]][c(y, s[x][z])]:
                    bad.add(2)
                if s[mul[x][y]][z] != mul[c(x, s[y][z])][s[x][z]]:
                    bad.add(3)
                a = s[s[x][y]][c(y, z)]
                b = s[s[y][z]][c(z, x)]
                d = s[s[z][x]][c(x, y)]
                if mul[mul[a][b]][d] != 0:
                    bad.add(4)
                if c(z, s[x][y]) != s[c(z, x)][c(z, y)]:
                    bad.add(5)
    return sorted(bad)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
