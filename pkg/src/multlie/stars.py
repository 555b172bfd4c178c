"""Enumeration of all multiplicative Lie structures on a finite group.

A star is determined by its values on pairs of generators: the twisted
additivity axioms express ``x * (w g)`` and ``(w g) * z`` through shorter
words.  Values on generator pairs are chosen by backtracking; after all
pairs inside ``<g1..gj>`` are fixed, the partial table on that subgroup is
checked against every axiom whose arguments stay inside it.

Antisymmetry ``y*x = (x*y)^-1`` holds in every MLA: expanding
``(xy)*(xy) = 1`` with both additivity axioms gives ``^x((y*x)(x*y)) = 1``.
So only pairs ``i < j`` are free.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Sequence

import numpy as np

from .core import FiniteMLA, _profile, iso_search, validate_mla
from .errors import ResourceLimitError
from .groups import GroupTable, bfs_words

STAR_ENUMERATION_CAP = 16


def star_from_generators(t: GroupTable, gens: Sequence[int], values) -> tuple[np.ndarray, list[int]]:
    """Extend ``gens[i] * gens[j] = values[i][j]`` along breadth-first words.

    Returns the star table (entries outside the generated subgroup are -1)
    and the subgroup's elements in breadth-first order.  The table is only
    an MLA if the values are consistent; that is checked by the caller.
    """
    parent, via, order = bfs_words(t, gens)
    mul, conj = t.mul, t.conj_table
    k = len(gens)
    members = np.array(order, dtype=np.int64)
    # rows gens[a] * z: a*(w l) = (a*w) ^w(a*l)
    rows = np.zeros((k, t.n), dtype=np.int64)
    for a in range(k):
        row = rows[a]
        for z in order[1:]:
            w = parent[z]
            row[z] = mul[row[w], conj[w, values[a][via[z]]]]
    # rows x * z: (w l)*z = ^w(l*z) (w*z)
    S = np.full((t.n, t.n), -1, dtype=np.int64)
    S[0, members] = 0
    for x in order[1:]:
        w = parent[x]
        S[x, members] = mul[conj[w, rows[via[x]][members]], S[w, members]]
    return S, order


def _consistent_on(t: GroupTable, S: np.ndarray, members: Sequence[int]) -> bool:
    """Axioms on triples from ``members`` whose star arguments stay inside."""
    h = np.asarray(members, dtype=np.int64)
    m, c = t.mul, t.conj_table
    x, y, z = h[:, None, None], h[None, :, None], h[None, None, :]
    if (np.diagonal(S)[h] != 0).any():
        return False
    sxy, sxz = S[x, y], S[x, z]
    if (S[x, m[y, z]] != m[sxy, c[y, sxz]]).any():
        return False
    if (S[m[x, y], z] != m[c[x, S[y, z]], sxz]).any():
        return False
    if (c[z, sxy] != S[c[z, x], c[z, y]]).any():
        return False
    return True


def _pairs_by_prefix(k: int) -> list[tuple[int, int]]:
    # (i, j) with i < j, ordered so that <g1..gj> is complete after (j-1, j)
    return [(i, j) for j in range(k) for i in range(j)]


def enumerate_stars(t: GroupTable, dedup: bool = False, cap: int = STAR_ENUMERATION_CAP) -> list[FiniteMLA]:
    """Every star table on ``t`` satisfying the MLA axioms.

    Order is deterministic: lexicographic in the generator-pair values.
    With ``dedup`` only the first structure of each isomorphism class is
    kept.
    """
    if t.n > cap:
        raise ResourceLimitError(f"star enumeration capped at n <= {cap}, got {t.n}")
    gens = list(t.generating_sequence)
    k = len(gens)
    inv = t.inv
    pairs = _pairs_by_prefix(k)
    # checkpoints: after pair index p, the subgroup <g0..gj> is fully assigned
    checkpoint = {pairs.index((j - 1, j)): j for j in range(1, k)}
    values = [[0] * k for _ in range(k)]
    found: list[FiniteMLA] = []

    def recurse(p: int):
        if p == len(pairs):
            S, _ = star_from_generators(t, gens, values)
            m = FiniteMLA(t, S)
            if validate_mla(m).valid:
                found.append(m)
            return
        i, j = pairs[p]
        for v in range(t.n):
            values[i][j] = v
            values[j][i] = int(inv[v])
            if p in checkpoint and p != len(pairs) - 1:
                sub = gens[: checkpoint[p] + 1]
                S, members = star_from_generators(t, sub, [row[: len(sub)] for row in values[: len(sub)]])
                if not _consistent_on(t, S, members):
                    continue
            recurse(p + 1)
        values[i][j] = values[j][i] = 0

    if k == 0:
        found.append(FiniteMLA(t, np.zeros((1, 1), dtype=np.int64)))
    else:
        recurse(0)
    return dedup_isomorphic(found) if dedup else found


def dedup_isomorphic(mlas: Sequence[FiniteMLA]) -> list[FiniteMLA]:
    """First representative of each isomorphism class, in input order."""
    buckets: dict[tuple, list[FiniteMLA]] = defaultdict(list)
    out = []
    for m in mlas:
        bucket = buckets[(m.n, _profile(m))]
        if any(iso_search(m, r) is not None for r in bucket):
            continue
        bucket.append(m)
        out.append(m)
    return out
