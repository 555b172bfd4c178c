"""Lie exterior squares and curly Lie exterior squares of finite MLAs.

Both squares are presented on ``2 n**2`` symbols: ``i^j`` has generator
index ``i*n + j`` and the bracket symbol ``[i,j]`` has ``n*n + i*n + j``.
The two variants differ only in which symbols are killed outright.  The
star on the realized square is not part of the group presentation; it is
rebuilt afterwards by :func:`star_on_exterior` and checked.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import FiniteMLA, ValidationReport, _axiom_masks, _first, derived_subalgebra, validate_mla
from .errors import InternalConsistencyError, PreconditionError
from .fp import (
    MAX_COSETS,
    Presentation,
    RealizedGroup,
    Word,
    commutator_word,
    eliminate_generators,
    free_reduce,
    hom_by_generators,
    inverse_word,
    realize_reduced,
)
from .groups import GroupMap, SubSet

log = logging.getLogger(__name__)

WEDGE = "wedge"
CURLY = "curly"
VARIANTS = (WEDGE, CURLY)

STAR_CAP = 4096
FULL_CHECK_LIMIT = 256


@dataclass(frozen=True)
class ExteriorSymbolMap:
    n: int

    @property
    def gen_count(self) -> int:
        return 2 * self.n * self.n

    def wedge_index(self, i: int, j: int) -> int:
        return i * self.n + j

    def bracket_index(self, i: int, j: int) -> int:
        return self.n * self.n + i * self.n + j

    def describe(self, g: int) -> tuple[str, int, int]:
        """``("wedge" | "bracket", i, j)`` for generator ``g``."""
        kind, rest = divmod(g, self.n * self.n)
        i, j = divmod(rest, self.n)
        return ("bracket" if kind else "wedge", i, j)


# --- presentations ---------------------------------------------------------


def _short_relators(m: FiniteMLA, variant: str, sym: ExteriorSymbolMap) -> list[Word]:
    """Killed symbols, antisymmetry, twisted additivity in both arguments and
    the Jacobi-type identity: at most cubic in n."""
    g = m.group
    n = m.n
    mul, inv, conj = g.rows, g.invs, g.conj_table.tolist()
    star, comm = m.star_rows, g.comm_table.tolist()
    W, B = sym.wedge_index, sym.bracket_index
    rels: list[Word] = []
    if variant == WEDGE:
        for x in range(n):
            rels += [(W(0, x),), (W(x, 0),), (W(x, x),), (B(0, x),), (B(x, 0),), (B(x, x),)]
    else:
        for x in range(n):
            for y in range(n):
                if star[x][y] == 0:
                    rels.append((W(x, y),))
                if comm[x][y] == 0:
                    rels.append((B(x, y),))
    for x in range(n):
        for y in range(n):
            rels.append((W(x, y), W(y, x)))
            rels.append((B(x, y), B(y, x)))
    for x in range(n):
        for y in range(n):
            xy = mul[x][y]
            cx = conj[x]
            # conjugate of x^-1 by xy
            a = conj[xy][inv[x]]
            for z in range(n):
                yz = mul[y][z]
                for S in (W, B):
                    rels.append((~S(x, yz), S(x, y), S(conj[y][x], conj[y][z])))
                    rels.append((~S(xy, z), S(cx[y], cx[z]), S(x, z)))
                    rels.append((S(x, y), S(conj[z][y], conj[z][x]), ~S(x, z), ~S(a, cx[z])))
    return rels


class _Reducer:
    """Rewrites symbol words through a Tietze substitution."""

    def __init__(self, subst: dict[int, Word]):
        self.subst = subst

    def letter(self, x: int) -> Word:
        g = x if x >= 0 else ~x
        w = self.subst.get(g)
        if w is None:
            return (x,)
        return w if x >= 0 else inverse_word(w)

    def word(self, w: Word) -> Word:
        out: list[int] = []
        for x in w:
            out.extend(self.letter(x))
        return free_reduce(out)


def _long_relators(m: FiniteMLA, sym: ExteriorSymbolMap, red: _Reducer) -> list[Word]:
    """Commutator compatibility of symbols and bracket composition, one
    instance per class of equal reduced symbols.

    Instances whose symbols reduce to the same words are consequences of
    each other modulo the short relators, so one representative suffices.
    """
    n = m.n
    comm = m.group.comm_table.tolist()
    W, B = sym.wedge_index, sym.bracket_index
    pair_rep: dict[tuple[Word, Word], tuple[int, int]] = {}
    brk_rep: dict[tuple[Word, int], tuple[int, int]] = {}
    for x in range(n):
        for y in range(n):
            wb = (red.letter(W(x, y)), red.letter(B(x, y)))
            pair_rep.setdefault(wb, (x, y))
            brk_rep.setdefault((wb[1], comm[x][y]), (x, y))
    rels: list[Word] = []
    reps = list(pair_rep.values())
    for x, y in reps:
        A, Bx = (W(x, y),), (B(x, y),)
        for u, v in reps:
            U, V = (W(u, v),), (B(u, v),)
            rels.append(commutator_word(A, U) + inverse_word(commutator_word(Bx, U)))
            rels.append(commutator_word(Bx, U) + inverse_word(commutator_word(Bx, V)))
    breps = list(brk_rep.values())
    for x, y in breps:
        for u, v in breps:
            rels.append(commutator_word((B(x, y),), (B(u, v),)) + (~B(comm[x][y], comm[u][v]),))
    return rels


@dataclass(frozen=True)
class _Built:
    presentation: Presentation
    symbols: ExteriorSymbolMap
    kept: list[int]
    reduced: list[Word]
    subst: dict[int, Word]


def _build(m: FiniteMLA, variant: str) -> _Built:
    if variant not in VARIANTS:
        raise PreconditionError(f"unknown variant {variant!r}")
    sym = ExteriorSymbolMap(m.n)
    short = _short_relators(m, variant, sym)
    kept, reduced, subst = eliminate_generators(Presentation(sym.gen_count, tuple(short)))
    red = _Reducer(subst)
    long = _long_relators(m, sym, red)
    reduced = list(reduced) + [red.word(w) for w in long]
    p = Presentation(sym.gen_count, tuple(short + long))
    return _Built(p, sym, kept, reduced, subst)


def wedge_presentation(m: FiniteMLA) -> tuple[Presentation, ExteriorSymbolMap]:
    b = _build(m, WEDGE)
    return b.presentation, b.symbols


def curly_presentation(m: FiniteMLA) -> tuple[Presentation, ExteriorSymbolMap]:
    b = _build(m, CURLY)
    return b.presentation, b.symbols


# --- realization -------------------------------------------------------------


@dataclass(frozen=True)
class RealizedExterior:
    mla: FiniteMLA
    variant: str
    symbols: ExteriorSymbolMap
    realized: RealizedGroup
    chi: GroupMap

    @property
    def table(self):
        return self.realized.table

    @property
    def order(self) -> int:
        return self.realized.order

    def wedge(self, i: int, j: int) -> int:
        """Realized element of the symbol ``i^j``."""
        return self.realized.gen_images[self.symbols.wedge_index(i, j)]

    def bracket(self, i: int, j: int) -> int:
        return self.realized.gen_images[self.symbols.bracket_index(i, j)]

    @cached_property
    def wedge_images(self) -> np.ndarray:
        n = self.symbols.n
        return np.array(self.realized.gen_images[: n * n], dtype=np.int64).reshape(n, n)

    @cached_property
    def bracket_images(self) -> np.ndarray:
        n = self.symbols.n
        return np.array(self.realized.gen_images[n * n:], dtype=np.int64).reshape(n, n)

    @cached_property
    def kernel(self) -> SubSet:
        return self.chi.kernel()

    def kernel_is_central(self) -> bool:
        k = np.array(self.kernel.members, dtype=np.int64)
        g = np.array(self.table.generating_sequence, dtype=np.int64)
        mul = self.table.mul
        return bool((mul[k[:, None], g[None, :]] == mul[g[None, :], k[:, None]]).all())


def realize_exterior(m: FiniteMLA, variant: str = WEDGE, max_cosets: int = MAX_COSETS) -> RealizedExterior:
    """Realize the wedge or curly square of ``m`` together with its map onto ``m``."""
    b = _build(m, variant)
    r = realize_reduced(b.presentation, b.kept, b.reduced, b.subst, max_cosets)
    n = m.n
    images = m.star.ravel().tolist() + m.group.comm_table.ravel().tolist()
    chi = hom_by_generators(r, m.group, images)
    if chi is None:
        raise InternalConsistencyError(f"{variant} square: symbol map onto the algebra is not defined")
    ext = RealizedExterior(m, variant, b.symbols, r, chi)
    derived = derived_subalgebra(m)
    if chi.image_set().members != derived.members:
        raise InternalConsistencyError(f"{variant} square: image of chi is not the derived subalgebra")
    _check_long_instances(ext)
    log.debug("%s square of order %d realized, n=%d", variant, r.order, n)
    return ext


def _check_long_instances(ext: RealizedExterior):
    """Every instance of the quartic relations holds in the realization."""
    t = ext.table
    comm = ext.mla.group.comm_table
    Wi, Bi = ext.wedge_images, ext.bracket_images
    pairs = sorted(set(zip(Wi.ravel().tolist(), Bi.ravel().tolist())))
    a = np.array([p[0] for p in pairs])
    b = np.array([p[1] for p in pairs])
    mul, inv = t.mul, t.inv

    def ct(x, y):
        return mul[mul[mul[x, y], inv[x]], inv[y]]

    c_au = ct(a[:, None], a[None, :])
    c_bu = ct(b[:, None], a[None, :])
    c_bv = ct(b[:, None], b[None, :])
    if not ((c_au == c_bu).all() and (c_bu == c_bv).all()):
        raise InternalConsistencyError("symbol commutator compatibility fails in the realization")
    keys = sorted(set(zip(Bi.ravel().tolist(), comm.ravel().tolist())))
    bb = np.array([k[0] for k in keys])
    cc = np.array([k[1] for k in keys])
    lhs = ct(bb[:, None], bb[None, :])
    rhs = Bi[cc[:, None], cc[None, :]]
    if not (lhs == rhs).all():
        raise InternalConsistencyError("bracket composition fails in the realization")


def wedge_to_curly(wedge: RealizedExterior, curly: RealizedExterior) -> GroupMap | None:
    """The natural map sending each wedge symbol to the matching curly symbol."""
    return hom_by_generators(wedge.realized, curly.table, curly.realized.gen_images)


# --- star on the realized square ---------------------------------------------


@dataclass(frozen=True)
class StarExtension:
    mla: FiniteMLA | None
    report: ValidationReport
    full_check: bool


def _letter_star(ext: RealizedExterior, a: int, b: int) -> int:
    """Star of two symbol generators: wedge symbols multiply through the star
    of their arguments, anything involving a bracket is a commutator."""
    sym = ext.symbols
    m = ext.mla
    ka, i, j = sym.describe(a)
    kb, u, v = sym.describe(b)
    if ka == "wedge" and kb == "wedge":
        return ext.wedge(int(m.star[i, j]), int(m.star[u, v]))
    return ext.table.comm(ext.wedge(i, j), ext.wedge(u, v))


def star_on_exterior(ext: RealizedExterior, cap: int = STAR_CAP) -> StarExtension:
    """Extend the star from symbols to the whole realized square and check it.

    Generator pairs get their value from :func:`_letter_star`; the rest
    follows from the two twisted additivity axioms along the normal-form
    words of the realization.  The resulting table is validated against
    the MLA axioms (exhaustively up to ``FULL_CHECK_LIMIT`` elements, on
    triples drawn from symbol images above that) and against the star rule
    on every symbol pair.
    """
    r = ext.realized
    t = r.table
    N = r.order
    if N > cap:
        raise PreconditionError(f"star extension capped at {cap} elements, square has {N}")
    if N == 1:
        zero = FiniteMLA(t, np.zeros((1, 1), dtype=np.int64))
        return StarExtension(zero, ValidationReport(True), True)
    mul, inv = t.mul, t.inv
    parent, letter = r.word_parent, r.word_letter
    letters = sorted(set(letter[1:]))

    def elem(x: int) -> int:
        return r.letter_image(x)

    # star between letters, inverse letters through the additivity axioms
    base = {}
    for a in letters:
        for b in letters:
            ga, gb = (a if a >= 0 else ~a), (b if b >= 0 else ~b)
            s = _letter_star(ext, ga, gb)
            if b < 0:
                # x * g^-1 = ^(g^-1)((x*g)^-1)
                s = t.conj(elem(b), int(inv[s]))
            if a < 0:
                # g^-1 * z = (^(g^-1)(g*z))^-1, with g*z already adjusted
                s = int(inv[t.conj(elem(a), s)])
            base[a, b] = s

    # rows letter * z along normal forms: l*(w l') = (l*w) ^w(l*l')
    order = range(1, N)
    lrow = {}
    for a in letters:
        row = [0] * N
        for z in order:
            w = parent[z]
            row[z] = int(mul[row[w], t.conj(w, base[a, letter[z]])])
        lrow[a] = np.array(row, dtype=np.int64)

    # rows x * z: (w l)*z = ^w(l*z) (w*z)
    S = np.zeros((N, N), dtype=np.int64)
    ctab = t.conj_table
    for x in order:
        w = parent[x]
        S[x] = mul[ctab[w, lrow[letter[x]]], S[w]]

    ext_mla = FiniteMLA(t, S)
    if N <= FULL_CHECK_LIMIT:
        report = validate_mla(ext_mla)
        full = True
    else:
        report = _sampled_check(ext_mla, r)
        full = False
    if report.valid:
        report = _check_symbol_stars(ext, S)
    return StarExtension(ext_mla if report.valid else None, report, full)


def _sampled_check(m: FiniteMLA, r: RealizedGroup) -> ValidationReport:
    n = m.n
    w = _first(np.diagonal(m.star) != 0)
    if w is not None:
        return ValidationReport(False, "axiom1", (w[0], w[0]), "x*x = 1")
    gens = sorted(set(r.gen_images) - {0})
    xs = np.array(gens[: max(1, 2_000_000 // (n * n))], dtype=np.int64)
    for k, mask in _axiom_masks(m.group, m.star, xs).items():
        hit = _first(mask)
        if hit is not None:
            return ValidationReport(False, f"axiom{k}", (int(xs[hit[0]]), hit[1], hit[2]), "")
    return ValidationReport(True)


def _check_symbol_stars(ext: RealizedExterior, S: np.ndarray) -> ValidationReport:
    """The star rule of :func:`_letter_star` on every symbol pair."""
    m = ext.mla
    t = ext.table
    Wi, Bi = ext.wedge_images, ext.bracket_images
    n = m.n
    x, y, u, v = np.meshgrid(*(np.arange(n),) * 4, indexing="ij")
    wxy, wuv = Wi[x, y], Wi[u, v]
    bxy, buv = Bi[x, y], Bi[u, v]
    expect = Wi[m.star[x, y], m.star[u, v]]
    bad = np.argwhere(S[wxy, wuv] != expect)
    if len(bad):
        return ValidationReport(False, "wedge_star", tuple(int(k) for k in bad[0]), "(x^y)*(u^v) = (x*y)^(u*v)")
    cm = t.mul[t.mul[t.mul[wxy, wuv], t.inv[wxy]], t.inv[wuv]]
    for name, val in (("bracket*wedge", S[bxy, wuv]), ("bracket*bracket", S[bxy, buv])):
        bad = np.argwhere(val != cm)
        if len(bad):
            return ValidationReport(False, "bracket_star", tuple(int(k) for k in bad[0]), name)
    return ValidationReport(True)
