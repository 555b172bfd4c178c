"""Finite multiplicative Lie algebras as a group table plus a star table."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import PreconditionError, ResourceLimitError, StructuralError
from .groups import (
    GroupTable,
    SubSet,
    greedy_generators,
    is_normal,
    is_subgroup,
    quotient_group,
    restrict,
    subgroup_generated,
)

ENUMERATION_CAP = 64

AXIOMS = {
    1: "x*x = 1",
    2: "x*(yz) = (x*y) ^y(x*z)",
    3: "(xy)*z = ^x(y*z) (x*z)",
    4: "((x*y)*^yz)((y*z)*^zx)((z*x)*^xy) = 1",
    5: "^z(x*y) = ^zx * ^zy",
}


class FiniteMLA:
    """A finite group with a second operation ``star`` (element indices).

    ``star[i, j]`` is the index of ``i * j`` in the Lie product.  Nothing
    is checked at construction beyond table shapes; see :func:`validate_mla`.
    """

    def __init__(self, group: GroupTable, star, names: Sequence[str] | None = None):
        star = np.array(star, dtype=np.int64)
        n = group.n
        if star.shape != (n, n):
            raise StructuralError(f"star table must be {n}x{n}, got {star.shape}")
        if star.min() < 0 or star.max() >= n:
            bad = np.argwhere((star < 0) | (star >= n))[0]
            raise StructuralError(f"entry star[{bad[0]},{bad[1]}] out of range 0..{n - 1}")
        star.setflags(write=False)
        self.group = group
        self.star = star
        self.names = tuple(names) if names is not None else None

    @property
    def n(self) -> int:
        return self.group.n

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMLA):
            return NotImplemented
        return self.group == other.group and bool((self.star == other.star).all())

    def __hash__(self) -> int:
        return hash((self.group.mul.tobytes(), self.star.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteMLA(n={self.n}, trivial_star={self.is_trivial_star})"

    @cached_property
    def star_rows(self) -> list[list[int]]:
        return self.star.tolist()

    @cached_property
    def is_trivial_star(self) -> bool:
        return not self.star.any()

    @cached_property
    def k_values(self) -> np.ndarray:
        """``(x*y)[x,y]`` for every pair."""
        return self.group.mul[self.star, self.group.comm_table]


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    kind: str = ""
    witness: tuple[int, ...] | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.valid

    def as_dict(self) -> dict[str, str]:
        d = {"valid": "true" if self.valid else "false"}
        if not self.valid:
            d["violation"] = self.kind
            if self.witness is not None:
                d["witness"] = ",".join(str(w) for w in self.witness)
        return d


def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(v) for v in hits[0])


def validate_group(t) -> ValidationReport:
    if not isinstance(t, GroupTable):
        t = GroupTable(t)
    n = t.n
    m = t.mul
    idx = np.arange(n)
    w = _first((m[0] != idx) | (m[:, 0] != idx))
    if w is not None:
        return ValidationReport(False, "identity", w, f"0 is not a two-sided identity at {w[0]}")
    w = _first(t.inv < 0)
    if w is not None:
        return ValidationReport(False, "inverse", w, f"element {w[0]} has no inverse")
    w = _first((m[idx, t.inv] != 0) | (m[t.inv, idx] != 0))
    if w is not None:
        return ValidationReport(False, "inverse", w, f"element {w[0]} has no two-sided inverse")
    for x in range(n):
        bad = m[m[x]] != m[x][m]  # (x*y)*z vs x*(y*z)
        w = _first(bad)
        if w is not None:
            return ValidationReport(False, "associativity", (x,) + w, "associativity fails")
    return ValidationReport(True)


def _axiom_masks(g: GroupTable, s: np.ndarray, xs: np.ndarray):
    """Violation masks of axioms 2-5 for x in ``xs`` (all y, z)."""
    m, c = g.mul, g.conj_table
    n = g.n
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    x = xs[:, None, None]
    sxy = s[x, y]
    sxz = s[x, z]
    ax2 = s[x, m[y, z]] != m[sxy, c[y, sxz]]
    ax3 = s[m[x, y], z] != m[c[x, s[y, z]], sxz]
    j = m[m[s[sxy, c[y, z]], s[s[y, z], c[z, x]]], s[s[z, x], c[x, y]]]
    ax4 = j != 0
    ax5 = c[z, sxy] != s[c[z, x], c[z, y]]
    return {2: ax2, 3: ax3, 4: ax4, 5: ax5}


def validate_mla(m: FiniteMLA, block: int | None = None) -> ValidationReport:
    """Check axioms (1)-(5) over all triples; report the first failure."""
    g, s = m.group, m.star
    n = m.n
    w = _first(np.diagonal(s) != 0)
    if w is not None:
        return ValidationReport(False, "axiom1", (w[0], w[0]), AXIOMS[1])
    if block is None:
        block = max(1, 2_000_000 // (n * n))
    first: dict[int, tuple[int, ...]] = {}
    for start in range(0, n, block):
        xs = np.arange(start, min(n, start + block))
        for k, mask in _axiom_masks(g, s, xs).items():
            if k in first:
                continue
            hit = _first(mask)
            if hit is not None:
                first[k] = (int(xs[hit[0]]), hit[1], hit[2])
        if first:
            k = min(first)
            return ValidationReport(False, f"axiom{k}", first[k], AXIOMS[k])
    return ValidationReport(True)


def commutator_structure(t: GroupTable) -> FiniteMLA:
    return FiniteMLA(t, t.comm_table)


def trivial_structure(t: GroupTable) -> FiniteMLA:
    return FiniteMLA(t, np.zeros((t.n, t.n), dtype=np.int64))


# --- substructures ---------------------------------------------------------


def derived_subalgebra(m: FiniteMLA) -> SubSet:
    """Subgroup generated by all star values and all commutators."""
    gens = set(m.star.ravel().tolist()) | set(m.group.comm_table.ravel().tolist())
    return SubSet(m, subgroup_generated(m.group, gens).members)


def ml_center(m: FiniteMLA) -> SubSet:
    central = (m.group.comm_table == 0).all(axis=1) & (m.star == 0).all(axis=1)
    return SubSet(m, tuple(np.nonzero(central)[0].tolist()))


def is_subalgebra(m: FiniteMLA, members) -> bool:
    s = sorted(set(members))
    if not is_subgroup(m.group, s):
        return False
    return bool(np.isin(m.star[np.ix_(s, s)], s).all())


def is_ideal(m: FiniteMLA, members) -> bool:
    s = sorted(set(members))
    if not is_normal(m.group, s):
        return False
    return bool(np.isin(m.star[:, s], s).all() and np.isin(m.star[s, :], s).all())


def k_set(m: FiniteMLA) -> SubSet:
    return SubSet(m, tuple(np.unique(m.k_values).tolist()))


def is_perfect(m: FiniteMLA) -> bool:
    return len(derived_subalgebra(m)) == m.n


def enumerate_subgroups(t: GroupTable, cap: int = ENUMERATION_CAP) -> list[SubSet]:
    """All subgroups, sorted by size then members."""
    if t.n > cap:
        raise ResourceLimitError(f"subgroup enumeration capped at n <= {cap}, got {t.n}")
    cyclic = {subgroup_generated(t, [x]).members for x in range(t.n)}
    found = set(cyclic)
    frontier = list(found)
    while frontier:
        new = []
        for h in frontier:
            hs = set(h)
            for c in cyclic:
                if not hs.issuperset(c):
                    j = subgroup_generated(t, h + c).members
                    if j not in found:
                        found.add(j)
                        new.append(j)
        frontier = new
    return [SubSet(t, h) for h in sorted(found, key=lambda h: (len(h), h))]


def enumerate_ideals(m: FiniteMLA, cap: int = ENUMERATION_CAP) -> list[SubSet]:
    return [SubSet(m, h.members) for h in enumerate_subgroups(m.group, cap) if is_ideal(m, h.members)]


def enumerate_abelian_subalgebras(m: FiniteMLA, cap: int = ENUMERATION_CAP) -> list[SubSet]:
    out = []
    for h in enumerate_subgroups(m.group, cap):
        s = list(h.members)
        block = np.ix_(s, s)
        if (m.star[block] == 0).all() and (m.group.comm_table[block] == 0).all():
            out.append(SubSet(m, h.members))
    return out


# --- morphisms and derived objects ---------------------------------------


class MLAMorphism:
    def __init__(self, source: FiniteMLA, target: FiniteMLA, image: Sequence[int]):
        self.source = source
        self.target = target
        self.image = tuple(int(x) for x in image)
        if len(self.image) != source.n:
            raise StructuralError("image list length does not match the source order")

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __repr__(self) -> str:
        return f"MLAMorphism({self.source.n} -> {self.target.n})"

    def is_morphism(self) -> bool:
        img = np.asarray(self.image)
        tm, ts = self.target.group.mul, self.target.star
        ok_mul = (img[self.source.group.mul] == tm[img[:, None], img[None, :]]).all()
        ok_star = (img[self.source.star] == ts[img[:, None], img[None, :]]).all()
        return bool(ok_mul and ok_star)

    def is_bijective(self) -> bool:
        return self.source.n == self.target.n and len(set(self.image)) == self.source.n

    def kernel(self) -> SubSet:
        return SubSet(self.source, tuple(x for x, y in enumerate(self.image) if y == 0))


def sub_mla(m: FiniteMLA, members) -> tuple[FiniteMLA, list[int]]:
    """The subalgebra on ``members`` re-indexed by sorted order."""
    if not is_subalgebra(m, members):
        raise PreconditionError("members do not form a subalgebra")
    table, elems = restrict(m.group, members)
    pos = {x: i for i, x in enumerate(elems)}
    s = m.star[np.ix_(elems, elems)]
    star = np.vectorize(pos.__getitem__, otypes=[np.int64])(s)
    return FiniteMLA(table, star), elems


def quotient(m: FiniteMLA, h) -> tuple[FiniteMLA, MLAMorphism]:
    members = h.members if isinstance(h, SubSet) else sorted(set(h))
    if not is_ideal(m, members):
        raise PreconditionError("quotient requires an ideal")
    table, label = quotient_group(m.group, members)
    lab = np.array(label)
    reps = np.zeros(table.n, dtype=np.int64)
    for x in range(m.n - 1, -1, -1):
        reps[label[x]] = x
    star = lab[m.star[np.ix_(reps, reps)]]
    q = FiniteMLA(table, star)
    return q, MLAMorphism(m, q, label)


def abelianizer(m: FiniteMLA) -> FiniteMLA:
    return quotient(m, derived_subalgebra(m))[0]


def direct_product(a: FiniteMLA, b: FiniteMLA) -> FiniteMLA:
    """Componentwise product; element ``(i, j)`` has index ``i * |b| + j``."""
    na, nb = a.n, b.n
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    mul = a.group.mul[ia[:, None], ia[None, :]] * nb + b.group.mul[ib[:, None], ib[None, :]]
    star = a.star[ia[:, None], ia[None, :]] * nb + b.star[ib[:, None], ib[None, :]]
    return FiniteMLA(GroupTable(mul), star)


def relabel(m: FiniteMLA, perm: Sequence[int]) -> FiniteMLA:
    """Transport of structure along ``perm`` (old index -> new index); perm[0] must be 0."""
    p = np.asarray(perm, dtype=np.int64)
    if p[0] != 0 or sorted(p.tolist()) != list(range(m.n)):
        raise PreconditionError("relabelling must be a permutation fixing 0")
    inv = np.empty_like(p)
    inv[p] = np.arange(m.n)
    mul = p[m.group.mul[np.ix_(inv, inv)]]
    star = p[m.star[np.ix_(inv, inv)]]
    return FiniteMLA(GroupTable(mul), star)


# --- isomorphism search -----------------------------------------------------


def _profile(m: FiniteMLA) -> tuple:
    orders = m.group.element_orders
    star_zero = (m.star == 0).sum(axis=1)
    comm_zero = (m.group.comm_table == 0).sum(axis=1)
    return tuple(sorted(zip(orders, star_zero.tolist(), comm_zero.tolist())))


def _element_keys(m: FiniteMLA) -> list[tuple[int, int, int]]:
    orders = m.group.element_orders
    star_zero = (m.star == 0).sum(axis=1).tolist()
    comm_zero = (m.group.comm_table == 0).sum(axis=1).tolist()
    return list(zip(orders, star_zero, comm_zero))


def iter_isomorphisms(m1: FiniteMLA, m2: FiniteMLA, cap: int = ENUMERATION_CAP) -> Iterator[MLAMorphism]:
    """Every MLA isomorphism ``m1 -> m2`` in a deterministic order."""
    if max(m1.n, m2.n) > cap:
        raise ResourceLimitError(f"isomorphism search capped at n <= {cap}")
    if m1.n != m2.n or _profile(m1) != _profile(m2):
        return
    g1, g2 = m1.group, m2.group
    gens = greedy_generators(g1, range(m1.n))
    keys1, keys2 = _element_keys(m1), _element_keys(m2)
    candidates = [[y for y in range(m2.n) if keys2[y] == keys1[x]] for x in gens]
    r1, r2 = g1.rows, g2.rows
    s1, s2 = m1.star_rows, m2.star_rows

    def close(images: list[int]) -> dict[int, int] | None:
        # partial hom on <gens[:k]>, built by right multiplication
        phi = {0: 0}
        queue = [0]
        k = len(images)
        for e in queue:
            for i in range(k):
                y = r1[e][gens[i]]
                v = r2[phi[e]][images[i]]
                if y in phi:
                    if phi[y] != v:
                        return None
                else:
                    phi[y] = v
                    queue.append(y)
        if len(set(phi.values())) != len(phi):
            return None
        for a in phi:
            for b in phi:
                c = s1[a][b]
                if c in phi and phi[c] != s2[phi[a]][phi[b]]:
                    return None
        return phi

    def search(images: list[int]) -> Iterator[dict[int, int]]:
        k = len(images)
        if k == len(gens):
            phi = close(images)
            if phi is not None and len(phi) == m1.n:
                yield phi
            return
        for y in candidates[k]:
            if y in images:
                continue
            trial = images + [y]
            if close(trial) is not None:
                yield from search(trial)

    for phi in search([]):
        f = MLAMorphism(m1, m2, [phi[x] for x in range(m1.n)])
        if f.is_morphism():
            yield f


def iso_search(m1: FiniteMLA, m2: FiniteMLA, cap: int = ENUMERATION_CAP) -> MLAMorphism | None:
    return next(iter_isomorphisms(m1, m2, cap), None)


def group_isomorphic(t1: GroupTable, t2: GroupTable, cap: int = 4096) -> bool:
    """Group isomorphism test (trivial stars); used for non-abelian kernels."""
    return iso_search(trivial_structure(t1), trivial_structure(t2), cap) is not None
