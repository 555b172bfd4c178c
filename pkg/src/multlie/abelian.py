"""Invariant factors of finite abelian groups and abelian sections.

The primary method reduces a relation matrix: generators are chosen
greedily, every element gets an exponent vector from a breadth-first walk,
and each walk edge that revisits an element contributes a relation.  The
diagonal of the Smith form gives the invariant factors.

:func:`invariants_from_orders` is an independent cross-check.  For an
abelian group the number of elements killed by ``p**k`` is
``prod(p**min(k, e))`` over its p-primary cyclic factors ``p**e``, so the
multiset of element orders alone pins down the decomposition.
"""

from __future__ import annotations

from collections import Counter
from math import lcm
from typing import Iterable, Sequence

import numpy as np
from sympy import Matrix, ZZ, multiplicity, primefactors
from sympy.matrices.normalforms import invariant_factors

from .groups import GroupTable, SubSet, cosets, greedy_generators, member_mask


def invariants_from_orders(orders: Sequence[int]) -> list[int]:
    """Invariant factors ``d1 | d2 | ...`` (ascending) of an abelian group
    given the multiset of its element orders.  Trivial group gives ``[]``."""
    size = len(orders)
    count = Counter(orders)
    primary: dict[int, list[int]] = {}
    for p in primefactors(size):
        top = multiplicity(p, size)
        # logs[k] = log_p #{x : x^(p^k) = 1}
        logs = []
        for k in range(top + 1):
            killed = sum(c for o, c in count.items() if (p ** k) % o == 0)
            logs.append(multiplicity(p, killed))
        # factors of exponent >= k number logs[k] - logs[k-1]
        at_least = [logs[k] - logs[k - 1] for k in range(1, top + 1)]
        exps = []
        for k in range(top, 0, -1):
            exps += [k] * (at_least[k - 1] - (at_least[k] if k < top else 0))
        primary[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in primary.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for p, exps in primary.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return sorted(factors)


def relation_matrix(t: GroupTable, gens: Sequence[int], label: Sequence[int] | None = None) -> list[list[int]]:
    """Generating relations among ``gens`` in the abelian group they generate.

    With ``label`` given, elements sharing a label are identified, so the
    relations are those of the section generated modulo that labelling
    (the labels must be cosets of a subgroup normalized by ``gens``).
    """
    k = len(gens)
    if k == 0:
        return []
    lab = list(range(t.n)) if label is None else list(label)
    cols = [t.col(g) for g in gens]
    # order of each generator modulo the labelling
    orders = []
    for g in gens:
        acc, o = g, 1
        while lab[acc] != lab[0]:
            acc = int(t.mul[acc, g])
            o += 1
        orders.append(o)
    rows = {tuple(o if j == i else 0 for j in range(k)) for i, o in enumerate(orders)}
    vec = {lab[0]: (0,) * k}
    queue = [0]
    for x in queue:
        v = vec[lab[x]]
        for i, c in enumerate(cols):
            y = c[x]
            w = list(v)
            w[i] = (w[i] + 1) % orders[i]
            w = tuple(w)
            seen = vec.get(lab[y])
            if seen is None:
                vec[lab[y]] = w
                queue.append(y)
            elif seen != w:
                rows.add(tuple((a - b) % o for a, b, o in zip(w, seen, orders)))
    return [list(r) for r in sorted(rows)]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """``(s, u, g)`` with ``s*a + u*b = g = gcd(a, b)``."""
    s0, s1, u0, u1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    return s0, u0, a


def _hermite_rows(rows: list[list[int]], k: int) -> list[list[int]]:
    """A square basis of the row lattice, built by gcd elimination.

    ``rows`` must include a multiple of each unit vector, so ``e``, the lcm
    of all entries, times any unit vector lies in the lattice; entries off
    the pivots are kept reduced modulo ``e``.
    """
    e = lcm(*(x for r in rows for x in r if x))
    basis = {i: [e if j == i else 0 for j in range(k)] for i in range(k)}
    for v in rows:
        v = [x % e for x in v]
        for c in range(k):
            if v[c] == 0:
                continue
            b = basis[c]
            s, u, g = _egcd(b[c], v[c])
            new = [(s * p + u * q) for p, q in zip(b, v)]
            rest = [(v[c] // g) * p - (b[c] // g) * q for p, q in zip(b, v)]
            basis[c] = [x if j == c else x % e for j, x in enumerate(new)]
            v = [x % e for x in rest]
    return [basis[c] for c in range(k)]


def smith_invariants(rows: list[list[int]], k: int) -> list[int]:
    """Non-unit invariant factors of ``Z^k`` modulo the row lattice."""
    if k == 0:
        return []
    square = _hermite_rows(rows, k)
    diag = invariant_factors(Matrix(square), domain=ZZ)
    return sorted(int(d) for d in diag if abs(int(d)) != 1)


def is_abelian_subgroup(t: GroupTable, members: Iterable[int]) -> bool:
    """Whether the subgroup ``members`` is abelian (its generators commute)."""
    gens = np.array(greedy_generators(t, members), dtype=np.int64)
    block = t.mul[np.ix_(gens, gens)]
    return bool((block == block.T).all())


def abelian_invariants(t: GroupTable, members: Iterable[int] | SubSet | None = None) -> list[int] | None:
    """Invariant factors of an abelian subgroup, or None when it is non-abelian."""
    s = list(range(t.n)) if members is None else sorted(set(members))
    if not is_abelian_subgroup(t, s):
        return None
    gens = greedy_generators(t, s)
    return smith_invariants(relation_matrix(t, gens), len(gens))


def quotient_invariants(t: GroupTable, big: Iterable[int], small: Iterable[int]) -> list[int] | None:
    """Invariant factors of ``big/small`` for ``small`` normal in ``big``, or
    None when the quotient is non-abelian."""
    small = sorted(set(small))
    inside = member_mask(t, small)
    gens = greedy_generators(t, big)
    g = np.array(gens, dtype=np.int64)
    comm = t.mul[t.mul[t.mul[g[:, None], g[None, :]], t.inv[g][:, None]], t.inv[g][None, :]]
    if not inside[comm].all():
        return None
    return smith_invariants(relation_matrix(t, gens, cosets(t, small)), len(gens))


def format_invariants(inv: Sequence[int] | None) -> str:
    if inv is None:
        return "nonabelian"
    return "[" + ",".join(str(d) for d in inv) + "]"
