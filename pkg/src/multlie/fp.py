"""Finitely presented groups realized as Cayley tables by coset enumeration.

Words are tuples of letters: ``g`` (``g >= 0``) is generator ``g`` and
``~g`` (a negative int) its inverse.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InternalConsistencyError, PreconditionError, ResourceLimitError
from ._cosets import felsch_enumerate, hlt_enumerate
from .groups import GroupMap, GroupTable, normal_closure, quotient_group

log = logging.getLogger(__name__)

MAX_COSETS = 2_000_000

STRATEGIES = ("hlt", "felsch", "reference")
DEFAULT_STRATEGY = "hlt"

Word = tuple[int, ...]


def inverse_word(w: Sequence[int]) -> Word:
    return tuple(~x for x in reversed(w))


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == ~x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == ~w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def canonical_relator(w: Sequence[int]) -> Word:
    """Least rotation of ``w`` or its inverse, after cyclic reduction."""
    w = cyclic_reduce(w)
    if not w:
        return w
    best = None
    for cand in (w, inverse_word(w)):
        # the least rotation starts at an occurrence of the least letter
        low = min(cand)
        for k, x in enumerate(cand):
            if x == low:
                rot = cand[k:] + cand[:k]
                if best is None or rot < best:
                    best = rot
    return best


def commutator_word(a: Sequence[int], b: Sequence[int]) -> Word:
    """``a b a^-1 b^-1``."""
    return tuple(a) + tuple(b) + inverse_word(a) + inverse_word(b)


@dataclass(frozen=True)
class Presentation:
    gen_count: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        seen = set()
        rels = []
        for r in self.relators:
            for x in r:
                g = x if x >= 0 else ~x
                if g >= self.gen_count:
                    raise PreconditionError(f"letter {x} refers to generator {g} >= {self.gen_count}")
            w = free_reduce(r)
            if w and w not in seen:
                seen.add(w)
                rels.append(w)
        object.__setattr__(self, "relators", tuple(rels))


# --- Tietze pre-elimination ----------------------------------------------


def _substitute(w: Sequence[int], g: int, repl: Word, repl_inv: Word) -> Word:
    out: list[int] = []
    for x in w:
        if x == g:
            out.extend(repl)
        elif x == ~g:
            out.extend(repl_inv)
        else:
            out.append(x)
    return free_reduce(out)


def _collapse_short(gen_count: int, relators: Sequence[Word]) -> dict[int, Word]:
    """Substitutions forced by relators of length one and two.

    Uses a signed union-find: ``up[g]`` is a letter equal to ``g``, or
    None when ``g`` is trivial.  Returns a word of length at most one for
    every generator that is not its own representative.
    """
    up: list[int | None] = list(range(gen_count))

    def find(x: int) -> int | None:
        # letter -> equal letter over a representative, or None
        g, neg = (x, False) if x >= 0 else (~x, True)
        while up[g] is not None and up[g] != g:
            nxt = up[g]
            if nxt < 0:
                neg = not neg
                g = ~nxt
            else:
                g = nxt
        if up[g] is None:
            root = None
        else:
            root = ~g if neg else g
        return root

    for w in relators:
        if len(w) == 1:
            a = find(w[0])
            if a is not None:
                up[a if a >= 0 else ~a] = None
        elif len(w) == 2:
            a, b = find(w[0]), find(w[1])
            if a is None and b is not None:
                up[b if b >= 0 else ~b] = None
            elif b is None and a is not None:
                up[a if a >= 0 else ~a] = None
            elif a is not None and b is not None:
                ga, gb = (a if a >= 0 else ~a), (b if b >= 0 else ~b)
                if ga == gb:
                    continue
                # a b = 1, so the root of a equals b^-1 up to sign
                lo, hi = min(ga, gb), max(ga, gb)
                la, lb = (a, b) if ga == hi else (b, a)
                # la = ~lb, expressed for the positive generator hi
                target = ~lb if la >= 0 else lb
                up[hi] = target
    out: dict[int, Word] = {}
    for g in range(gen_count):
        r = find(g)
        if r is None:
            out[g] = ()
        elif r != g:
            out[g] = (r,)
    return out


def eliminate_generators(p: Presentation, max_len: int = 3):
    """Remove generators using short relators in which they occur once.

    Returns ``(kept, relators, subst)``: surviving generator indices,
    canonical relators over them, and for every eliminated generator a
    word in the survivors equal to it.
    """
    rels: dict[int, Word] = {}
    index: dict[Word, int] = {}
    occurs: dict[int, set[int]] = {}
    next_id = 0

    def add(w: Word):
        nonlocal next_id
        c = canonical_relator(w)
        if not c or c in index:
            return None
        rid = next_id
        next_id += 1
        rels[rid] = c
        index[c] = rid
        for x in c:
            occurs.setdefault(x if x >= 0 else ~x, set()).add(rid)
        return rid

    def drop(rid: int):
        c = rels.pop(rid)
        del index[c]
        for x in c:
            occurs[x if x >= 0 else ~x].discard(rid)

    subst: dict[int, Word] = _collapse_short(p.gen_count, p.relators)
    # users[g]: eliminated generators whose substitution word mentions g
    users: dict[int, set[int]] = {}
    for g, w in subst.items():
        for x in w:
            users.setdefault(x if x >= 0 else ~x, set()).add(g)
    for r in p.relators:
        out: list[int] = []
        for x in r:
            g = x if x >= 0 else ~x
            w = subst.get(g)
            if w is None:
                out.append(x)
            else:
                out.extend(w if x >= 0 else inverse_word(w))
        add(tuple(out))

    # a relator's eligibility never changes while it lives, so a heap of
    # short relators keyed by (length, word) yields the next pivot
    heap = [(len(w), w, rid) for rid, w in rels.items() if len(w) <= max_len]
    heapq.heapify(heap)
    while heap:
        _, w, rid = heapq.heappop(heap)
        if rels.get(rid) != w:
            continue
        counts: dict[int, int] = {}
        for x in w:
            g = x if x >= 0 else ~x
            counts[g] = counts.get(g, 0) + 1
        once = [g for g, k in counts.items() if k == 1]
        if not once:
            continue
        g = max(once)
        pos = next(i for i, x in enumerate(w) if x == g or x == ~g)
        rot = w[pos:] + w[:pos]
        rest = rot[1:]
        # rot = g^e rest = 1  =>  g = rest^-1 (e=+1) or g = rest (e=-1)
        repl = inverse_word(rest) if rot[0] == g else tuple(rest)
        repl_inv = inverse_word(repl)
        for h in users.pop(g, ()):
            if h in subst:
                subst[h] = _substitute(subst[h], g, repl, repl_inv)
                for x in repl:
                    users.setdefault(x if x >= 0 else ~x, set()).add(h)
        subst[g] = repl
        for x in repl:
            users.setdefault(x if x >= 0 else ~x, set()).add(g)
        for other in sorted(occurs.get(g, ())):
            old = rels[other]
            drop(other)
            nid = add(_substitute(old, g, repl, repl_inv))
            if nid is not None and len(rels[nid]) <= max_len:
                heapq.heappush(heap, (len(rels[nid]), rels[nid], nid))
    kept = [g for g in range(p.gen_count) if g not in subst]
    relators = sorted(rels.values(), key=lambda w: (len(w), w))
    return kept, relators, subst


# --- coset enumeration ---------------------------------------------------


class _TableFull(Exception):
    pass


class _CosetEnumerator:
    """HLT coset enumeration over the trivial subgroup with lookahead."""

    def __init__(self, ngens: int, relators: Sequence[Sequence[int]], limit: int):
        self.ncols = 2 * ngens
        # letter -> column
        self.rels = [[2 * x if x >= 0 else 2 * (~x) + 1 for x in w] for w in relators]
        self.limit = limit
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.p: list[int] = [0]
        self.live = 1

    def rep(self, k: int) -> int:
        p = self.p
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def define(self, a: int, x: int):
        if self.live >= self.limit:
            raise _TableFull
        b = len(self.table)
        self.table.append([-1] * self.ncols)
        self.p.append(b)
        self.live += 1
        self.table[a][x] = b
        self.table[b][x ^ 1] = a

    def _merge(self, k: int, l: int, queue: list[int]):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        self.p[l] = k
        self.live -= 1
        queue.append(l)

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self._merge(a, b, queue)
        t = self.table
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            row = t[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                t[d][x ^ 1] = -1
                mu, nu = self.rep(g), self.rep(d)
                if t[mu][x] >= 0:
                    self._merge(nu, t[mu][x], queue)
                elif t[nu][x ^ 1] >= 0:
                    self._merge(mu, t[nu][x ^ 1], queue)
                else:
                    t[mu][x] = nu
                    t[nu][x ^ 1] = mu

    def scan(self, a: int, w: list[int], fill: bool):
        t = self.table
        f, i = a, 0
        b, j = a, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] >= 0:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != a:
                    self.coincidence(f, a)
                return
            while j >= i and t[b][w[j] ^ 1] >= 0:
                b = t[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][w[i]] = b
                t[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, w[i])

    def lookahead(self):
        for b in range(len(self.table)):
            for w in self.rels:
                if self.p[b] != b:
                    break
                self.scan(b, w, fill=False)

    def compact(self, a: int) -> int:
        """Renumber live cosets in order; return the new position of ``a``."""
        live = [k for k in range(len(self.table)) if self.p[k] == k]
        new = {k: i for i, k in enumerate(live)}
        self.table = [[new[d] if d >= 0 else -1 for d in self.table[k]] for k in live]
        self.p = list(range(len(live)))
        return sum(1 for k in live if k < a)

    def result(self) -> list[list[int]]:
        live = [k for k in range(len(self.table)) if self.p[k] == k]
        new = {k: i for i, k in enumerate(live)}
        return [[new[self.rep(d)] for d in self.table[k]] for k in live]

    def run(self) -> list[list[int]]:
        a = 0
        while a < len(self.table):
            try:
                if self.p[a] == a:
                    for w in self.rels:
                        if self.p[a] != a:
                            break
                        self.scan(a, w, fill=True)
                    if self.p[a] == a:
                        row = self.table[a]
                        for x in range(self.ncols):
                            if row[x] < 0:
                                self.define(a, x)
                a += 1
            except _TableFull:
                before = self.live
                self.lookahead()
                a = self.compact(a)
                if self.live >= before:
                    raise ResourceLimitError(f"coset enumeration exceeded {self.limit} cosets")
        return self.result()




def enumerate_cosets(gen_count: int, relators: Sequence[Sequence[int]], max_cosets: int = MAX_COSETS,
                     strategy: str = DEFAULT_STRATEGY) -> np.ndarray:
    """Action table (cosets x 2*gen_count) of the regular representation.

    Column ``2g`` is generator ``g`` and ``2g+1`` its inverse; coset 0 is
    the identity.  Numbering is the raw order of definition.
    """
    if strategy == "hlt":
        return hlt_enumerate(gen_count, relators, max_cosets)
    if strategy == "felsch":
        return felsch_enumerate(gen_count, relators, max_cosets)
    if strategy == "reference":
        e = _CosetEnumerator(gen_count, relators, max_cosets)
        return np.array(e.run(), dtype=np.int64).reshape(-1, 2 * gen_count)
    raise PreconditionError(f"unknown enumeration strategy {strategy!r}")


# --- realized groups -----------------------------------------------------


def _letter_col(x: int) -> int:
    return 2 * x if x >= 0 else 2 * (~x) + 1


@dataclass(frozen=True)
class RealizedGroup:
    """A presented group as a Cayley table with generator images.

    ``word_parent``/``word_letter`` encode normal-form words: element ``e``
    is ``word_parent[e]`` times the letter ``word_letter[e]``.
    """

    presentation: Presentation
    table: GroupTable
    gen_images: tuple[int, ...]
    word_parent: tuple[int, ...] = field(repr=False)
    word_letter: tuple[int, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return self.table.n

    def normal_form(self, e: int) -> Word:
        out = []
        while e != 0:
            out.append(self.word_letter[e])
            e = self.word_parent[e]
        return tuple(reversed(out))

    def letter_image(self, x: int) -> int:
        return self.gen_images[x] if x >= 0 else self.table.invs[self.gen_images[~x]]


def evaluate_word(r: RealizedGroup, w: Sequence[int]) -> int:
    col = r.table.col
    acc = 0
    for x in w:
        acc = col(r.letter_image(x))[acc]
    return acc


def _standardize(table: GroupTable, images: Sequence[int], letters: Sequence[int]):
    """Renumber elements breadth first along ``letters`` (right multiplication)."""
    invs = table.invs
    steps = [images[x] if x >= 0 else invs[images[~x]] for x in letters]
    cols = [table.col(s) for s in steps]
    old_of = [0]
    new_of = {0: 0}
    parent = [-1]
    via = [0]
    for e in old_of:
        for k, c in enumerate(cols):
            y = c[e]
            if y not in new_of:
                new_of[y] = len(old_of)
                old_of.append(y)
                parent.append(new_of[e])
                via.append(k)
    if len(old_of) != table.n:
        raise InternalConsistencyError("generator images do not generate the realized group")
    perm = np.array([new_of[x] for x in range(table.n)], dtype=np.int32)
    old = np.array(old_of, dtype=np.int64)
    mul = perm[table.mul[np.ix_(old, old)]]
    return GroupTable(mul), perm, parent, via


def todd_coxeter(p: Presentation, max_cosets: int = MAX_COSETS, simplify: bool = True,
                 strategy: str = DEFAULT_STRATEGY) -> RealizedGroup:
    """Realize ``p`` as a Cayley table.

    Generators are first eliminated with short relators; enumeration then
    runs on growing prefixes of the (length sorted) remaining relators.
    Once a prefix closes, the remaining relators are imposed exactly by
    taking the quotient by their normal closure.
    """
    if simplify:
        kept, relators, subst = eliminate_generators(p)
    else:
        kept, relators, subst = list(range(p.gen_count)), [canonical_relator(r) for r in p.relators], {}
        relators = [r for r in relators if r]
    return realize_reduced(p, kept, relators, subst, max_cosets, strategy)


def realize_reduced(p: Presentation, kept: Sequence[int], relators: Sequence[Word],
                    subst: dict[int, Word], max_cosets: int = MAX_COSETS,
                    strategy: str = DEFAULT_STRATEGY) -> RealizedGroup:
    """Realize ``p`` from an equivalent presentation on the generators ``kept``.

    ``relators`` are words over ``kept`` and ``subst`` expresses every other
    generator of ``p`` as such a word.  The result is checked against every
    relator of ``p``.
    """
    relators = sorted(set(c for c in map(canonical_relator, relators) if c), key=lambda w: (len(w), w))
    local = {g: i for i, g in enumerate(kept)}
    loc_rels = [tuple(local[x] if x >= 0 else ~local[~x] for x in w) for w in relators]
    k = len(kept)

    if k == 0:
        table = GroupTable([[0]])
        images_local: list[int] = []
    else:
        table, images_local = _enumerate_staged(k, loc_rels, max_cosets, strategy)

    letters = []
    for i in range(k):
        letters.extend([i, ~i])
    std, perm, parent, via = _standardize(table, images_local, letters)
    images_local = [int(perm[x]) for x in images_local]

    gen_images = [0] * p.gen_count
    for g, i in local.items():
        gen_images[g] = images_local[i]
    col, invs = std.col, std.invs
    for g, w in subst.items():
        acc = 0
        for x in w:
            acc = col(images_local[local[x]] if x >= 0 else invs[images_local[local[~x]]])[acc]
        gen_images[g] = acc
    word_letter = [0]
    for v in via[1:]:
        x = letters[v]
        word_letter.append(kept[x] if x >= 0 else ~kept[~x])
    r = RealizedGroup(p, std, tuple(gen_images), tuple(parent), tuple(word_letter))
    _check_realization(r)
    return r


def _enumerate_staged(k: int, rels: list[Word], max_cosets: int, strategy: str) -> tuple[GroupTable, list[int]]:
    # a short prefix may present an infinite group, so prefix length and
    # coset budget grow together; the last attempt uses everything.  Long
    # relators dominate scan cost, so the prefix grows faster than the budget
    total = len(rels)
    size, budget = min(total, 32), 2048
    while True:
        cap = max_cosets if size >= total else min(max_cosets, budget)
        try:
            act = enumerate_cosets(k, rels[:size], cap, strategy)
            break
        except ResourceLimitError:
            if size >= total:
                raise
            size, budget = min(total, size * 4), budget * 2
            log.debug("prefix enumeration overflowed; retrying with %d relators", size)
    table = _regular_table(act)
    images = [int(act[0, 2 * i]) for i in range(k)]
    if size < total:
        col, invs = table.col, table.invs
        steps = {}
        for i in range(k):
            steps[i] = col(images[i])
            steps[~i] = col(invs[images[i]])
        bad = set()
        for w in rels[size:]:
            acc = 0
            for x in w:
                acc = steps[x][acc]
            if acc:
                bad.add(acc)
        if bad:
            closure = normal_closure(table, bad)
            table, proj = quotient_group(table, closure.members)
            images = [proj[x] for x in images]
    return table, images


def _regular_table(act: np.ndarray) -> GroupTable:
    n = act.shape[0]
    # spanning tree of the coset graph from coset 0
    parent = np.full(n, -1, dtype=np.int64)
    col = np.full(n, -1, dtype=np.int64)
    order = [0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    rows = act.tolist()
    for e in order:
        for c, y in enumerate(rows[e]):
            if not seen[y]:
                seen[y] = True
                parent[y] = e
                col[y] = c
                order.append(y)
    mul = np.empty((n, n), dtype=np.int32)
    mul[:, 0] = np.arange(n)
    for j in order[1:]:
        mul[:, j] = act[mul[:, parent[j]], col[j]]
    return GroupTable(mul)


def _check_realization(r: RealizedGroup):
    for w in r.presentation.relators:
        if evaluate_word(r, w) != 0:
            raise InternalConsistencyError(f"relator {w} does not hold in the realization")


def hom_by_generators(r: RealizedGroup, target: GroupTable, images: Sequence[int]) -> GroupMap | None:
    """The homomorphism sending generator ``g`` to ``images[g]``, if relators allow it."""
    if len(images) != r.presentation.gen_count:
        raise PreconditionError("need one image per generator")
    col, tinv = target.col, target.invs
    for w in r.presentation.relators:
        acc = 0
        for x in w:
            acc = col(images[x] if x >= 0 else tinv[images[~x]])[acc]
        if acc:
            return None
    img = [0] * r.order
    for e in range(1, r.order):
        x = r.word_letter[e]
        step = images[x] if x >= 0 else tinv[images[~x]]
        img[e] = col(step)[img[r.word_parent[e]]]
    return GroupMap(r.table, target, img)
