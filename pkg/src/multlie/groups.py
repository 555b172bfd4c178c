"""Finite groups as dense Cayley tables with identity at index 0.

Everything here works on element indices.  Subgroups are returned as
:class:`SubSet` values whose ``members`` tuple is sorted.  Routines that
may see realized groups with thousands of elements walk cached table
columns (right multiplication by a fixed element) rather than rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError, StructuralError

INDEX = np.int32


class GroupTable:
    """Cayley table of a finite group.

    ``mul[i, j]`` is the index of ``i*j`` and ``inv[i]`` the index of the
    inverse of ``i`` (-1 when row ``i`` has no 0).  Index 0 is the
    identity.  The constructor only checks shape and index range; the
    group axioms are checked by :func:`multlie.core.validate_group`.
    """

    def __init__(self, mul, inv=None):
        mul = np.array(mul, dtype=INDEX)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] < 1:
            raise StructuralError(f"multiplication table must be square and non-empty, got shape {mul.shape}")
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            bad = np.argwhere((mul < 0) | (mul >= n))[0]
            raise StructuralError(f"entry mul[{bad[0]},{bad[1]}]={mul[tuple(bad)]} out of range 0..{n - 1}")
        if inv is None:
            hits = mul == 0
            inv = np.where(hits.any(axis=1), hits.argmax(axis=1), -1)
        inv = np.array(inv, dtype=INDEX)
        if inv.shape != (n,):
            raise StructuralError(f"inverse table must have length {n}")
        mul.setflags(write=False)
        inv.setflags(write=False)
        self.mul = mul
        self.inv = inv
        self._cols: dict[int, list[int]] = {}

    @property
    def n(self) -> int:
        return self.mul.shape[0]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupTable):
            return NotImplemented
        return self.n == other.n and bool((self.mul == other.mul).all())

    def __hash__(self) -> int:
        return hash(self.mul.tobytes())

    def __repr__(self) -> str:
        return f"GroupTable(n={self.n})"

    @cached_property
    def rows(self) -> list[list[int]]:
        """Row lists; convenient for small tables only."""
        return self.mul.tolist()

    @cached_property
    def invs(self) -> list[int]:
        return self.inv.tolist()

    def col(self, s: int) -> list[int]:
        """``col(s)[x] == x*s``."""
        c = self._cols.get(s)
        if c is None:
            c = self._cols[s] = self.mul[:, s].tolist()
        return c

    def prod(self, *xs: int) -> int:
        acc = 0
        for x in xs:
            acc = int(self.mul[acc, x])
        return acc

    def conj(self, x: int, y: int) -> int:
        """``x y x^-1``."""
        return int(self.mul[self.mul[x, y], self.inv[x]])

    def comm(self, x: int, y: int) -> int:
        """``x y x^-1 y^-1``."""
        m, iv = self.mul, self.inv
        return int(m[m[m[x, y], iv[x]], iv[y]])

    @cached_property
    def comm_table(self) -> np.ndarray:
        m, iv = self.mul, self.inv
        t = m[m[m, iv[:, None]], iv[None, :]]
        t.setflags(write=False)
        return t

    @cached_property
    def conj_table(self) -> np.ndarray:
        """``conj_table[x, y] = x y x^-1``."""
        t = self.mul[self.mul, self.inv[:, None]]
        t.setflags(write=False)
        return t

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        n = self.n
        idx = np.arange(n)
        acc = idx.copy()
        orders = np.zeros(n, dtype=np.int64)
        for k in range(1, n + 1):
            orders[(acc == 0) & (orders == 0)] = k
            if (orders > 0).all():
                break
            acc = self.mul[acc, idx]
        if (orders == 0).any():
            raise StructuralError("table has elements of infinite order")
        return tuple(orders.tolist())

    def order_of(self, x: int) -> int:
        return self.element_orders[x]

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    @cached_property
    def generating_sequence(self) -> tuple[int, ...]:
        """Greedy generating set, elements taken by descending order then index."""
        return greedy_generators(self, range(self.n))

    def is_hom_image(self, target: "GroupTable", image: Sequence[int]) -> bool:
        img = np.asarray(image)
        return bool((img[self.mul] == target.mul[img[:, None], img[None, :]]).all())


@dataclass(frozen=True)
class SubSet:
    """A sorted set of element indices of ``parent``.

    ``parent`` is a :class:`GroupTable` or an MLA; only indices are stored.
    """

    parent: object
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(int(m) for m in self.members))))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return x in self.as_set

    def __iter__(self):
        return iter(self.members)

    @cached_property
    def as_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubSet):
            return NotImplemented
        return self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        return f"SubSet({list(self.members)})"


def _table(t) -> GroupTable:
    return t if isinstance(t, GroupTable) else t.group


def _closure(g: GroupTable, gens: Iterable[int]) -> set[int]:
    cols = [g.col(s) for s in sorted(set(int(x) for x in gens) - {0})]
    seen = {0}
    queue = [0]
    for e in queue:
        for c in cols:
            y = c[e]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def subgroup_generated(t, gens: Iterable[int]) -> SubSet:
    return SubSet(t, tuple(_closure(_table(t), gens)))


def greedy_generators(t, members: Iterable[int]) -> tuple[int, ...]:
    """Pick generators for ``members`` by descending element order."""
    g = _table(t)
    orders = g.element_orders
    pool = sorted(set(members), key=lambda x: (-orders[x], x))
    target = len(pool)
    gens: list[int] = []
    current = {0}
    for x in pool:
        if len(current) == target:
            break
        if x not in current:
            gens.append(x)
            current = _closure(g, gens)
    return tuple(gens)


def member_mask(t, members: Iterable[int]) -> np.ndarray:
    mask = np.zeros(_table(t).n, dtype=bool)
    mask[np.fromiter((int(x) for x in members), dtype=np.int64)] = True
    return mask


def is_subgroup(t, members: Iterable[int]) -> bool:
    g = _table(t)
    s = set(int(x) for x in members)
    if 0 not in s:
        return False
    # a finite subset is a subgroup iff it is the closure of its generators
    return _closure(g, greedy_generators(g, s)) == s


def is_normal(t, members: Iterable[int], ambient: Iterable[int] | None = None) -> bool:
    """Whether ``members`` is a normal subgroup of ``ambient`` (default: everything)."""
    g = _table(t)
    s = set(int(x) for x in members)
    if not is_subgroup(g, s):
        return False
    outer = g.generating_sequence if ambient is None else greedy_generators(g, ambient)
    inner = np.array(greedy_generators(g, s), dtype=np.int64)
    if len(inner) == 0:
        return True
    a = np.array(outer, dtype=np.int64)
    conj = g.mul[g.mul[a[:, None], inner[None, :]], g.inv[a][:, None]]
    return bool(member_mask(g, s)[conj].all())


def normal_closure(t, gens: Iterable[int]) -> SubSet:
    g = _table(t)
    ambient = g.generating_sequence
    gens = set(int(x) for x in gens) - {0}
    sub = _closure(g, gens)
    pending = sorted(gens)
    while pending:
        new = []
        for s in pending:
            for a in ambient:
                c = g.conj(a, s)
                if c not in sub:
                    gens.add(c)
                    new.append(c)
                    sub = _closure(g, gens)
        pending = new
    return SubSet(t, tuple(sub))


def cosets(t, members: Sequence[int]) -> list[int]:
    """Label each element by its left coset ``x*N``; labels ordered by least element."""
    g = _table(t)
    mem = np.array(sorted(set(members)), dtype=np.int64)
    label = np.full(g.n, -1, dtype=np.int64)
    k = 0
    for x in range(g.n):
        if label[x] < 0:
            label[g.mul[x, mem]] = k
            k += 1
    return label.tolist()


def quotient_group(t, normal: Iterable[int]) -> tuple[GroupTable, list[int]]:
    """Quotient by a normal subgroup; returns the table and the projection."""
    g = _table(t)
    members = sorted(set(normal))
    if not is_normal(g, members):
        raise PreconditionError("quotient_group requires a normal subgroup")
    label = cosets(g, members)
    lab = np.array(label)
    k = int(lab.max()) + 1
    reps = np.zeros(k, dtype=np.int64)
    reps[lab[::-1]] = np.arange(g.n)[::-1]
    qmul = lab[g.mul[np.ix_(reps, reps)]]
    return GroupTable(qmul), label


def restrict(t, members: Sequence[int]) -> tuple[GroupTable, list[int]]:
    """Cayley table of a subgroup, re-indexed by sorted order (identity stays 0)."""
    g = _table(t)
    s = sorted(set(members))
    if not is_subgroup(g, s):
        raise PreconditionError("restrict requires a subgroup")
    pos = np.full(g.n, -1, dtype=np.int64)
    pos[s] = np.arange(len(s))
    return GroupTable(pos[g.mul[np.ix_(s, s)]]), s


class GroupMap:
    """A map between group tables given by its image list."""

    def __init__(self, source: GroupTable, target: GroupTable, image: Sequence[int]):
        self.source = source
        self.target = target
        self.image = tuple(int(x) for x in image)
        if len(self.image) != source.n:
            raise StructuralError("image list length does not match the source order")

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __repr__(self) -> str:
        return f"GroupMap({self.source.n} -> {self.target.n})"

    def is_homomorphism(self) -> bool:
        return self.source.is_hom_image(self.target, self.image)

    def kernel(self) -> SubSet:
        return kernel_of(self)

    def image_set(self) -> SubSet:
        return SubSet(self.target, tuple(set(self.image)))

    def is_injective(self) -> bool:
        return len(set(self.image)) == self.source.n

    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.target.n


def kernel_of(f) -> SubSet:
    return SubSet(f.source, tuple(x for x, y in enumerate(f.image) if y == 0))


def bfs_words(t: GroupTable, gens: Sequence[int]) -> tuple[list[int], list[int], list[int]]:
    """Spanning tree of the Cayley graph by right multiplication.

    Returns ``(parent, via, order)`` so that ``x = parent[x] * gens[via[x]]``
    and ``order`` lists reached elements breadth first.  The identity has
    parent -1; unreached elements have parent -2.
    """
    cols = [t.col(s) for s in gens]
    parent = [-2] * t.n
    via = [-1] * t.n
    parent[0] = -1
    order = [0]
    for e in order:
        for k, c in enumerate(cols):
            y = c[e]
            if parent[y] == -2:
                parent[y] = e
                via[y] = k
                order.append(y)
    return parent, via, order


def extend_hom(source: GroupTable, target: GroupTable, gens: Sequence[int],
               images: Sequence[int]) -> list[int] | None:
    """Extend ``gens[k] -> images[k]`` to a homomorphism, or None if impossible."""
    parent, via, order = bfs_words(source, gens)
    if len(order) != source.n:
        raise PreconditionError("generators do not generate the source group")
    tcols = [target.col(y) for y in images]
    img = [0] * source.n
    for x in order[1:]:
        img[x] = tcols[via[x]][img[parent[x]]]
    if not source.is_hom_image(target, img):
        return None
    return img
