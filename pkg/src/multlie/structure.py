"""Isoclinism, the five-term sequence and CTP extensions.

Bogomolov multipliers in this module are realized as concrete groups:
``kernel / m0`` inside the wedge square for isoclinism invariance, and the
kernel of the curly square for the exact sequences.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .abelian import abelian_invariants, format_invariants
from .core import (
    ENUMERATION_CAP,
    FiniteMLA,
    MLAMorphism,
    derived_subalgebra,
    direct_product,
    group_isomorphic,
    is_ideal,
    is_perfect,
    iter_isomorphisms,
    k_set,
    ml_center,
    quotient,
    sub_mla,
)
from .errors import InternalConsistencyError, PreconditionError, ResourceLimitError
from .exterior import CURLY, WEDGE, RealizedExterior, curly_presentation, realize_exterior, star_on_exterior
from .groups import (
    GroupTable,
    SubSet,
    _closure,
    extend_hom,
    normal_closure,
    quotient_group,
    restrict,
    subgroup_generated,
)
from .fp import hom_by_generators
from .multipliers import MultiplierReport, bogomolov, m0_subgroup

log = logging.getLogger(__name__)


# --- isoclinism -----------------------------------------------------------


@dataclass(frozen=True)
class Isoclinism:
    """``lam`` between central quotients, ``mu`` between derived subalgebras.

    Derived subalgebras are re-indexed by sorted element order; ``elems1``
    and ``elems2`` map those indices back to the parents.
    """

    lam: MLAMorphism
    mu: MLAMorphism
    elems1: tuple[int, ...]
    elems2: tuple[int, ...]


@dataclass(frozen=True)
class _Sections:
    m: FiniteMLA
    quotient: FiniteMLA
    proj: tuple[int, ...]
    reps: tuple[int, ...]
    derived: FiniteMLA
    elems: tuple[int, ...]


def _sections(m: FiniteMLA) -> _Sections:
    q, p = quotient(m, ml_center(m))
    reps = [0] * q.n
    for x in range(m.n - 1, -1, -1):
        reps[p(x)] = x
    d, elems = sub_mla(m, derived_subalgebra(m).members)
    return _Sections(m, q, p.image, tuple(reps), d, tuple(elems))


def _mu_from_lambda(s1: _Sections, s2: _Sections, lam: MLAMorphism) -> MLAMorphism | None:
    """The only possible partner of ``lam``, or None if it is not an isomorphism.

    Commutators and star values of representatives generate the derived
    subalgebra, so compatibility pins ``mu`` down on generators.
    """
    g1, g2 = s1.m.group, s2.m.group
    pos1 = {x: i for i, x in enumerate(s1.elems)}
    pos2 = {x: i for i, x in enumerate(s2.elems)}
    forced: dict[int, int] = {}
    r1, r2 = s1.reps, s2.reps
    c1, c2 = g1.comm_table, g2.comm_table
    for A in range(s1.quotient.n):
        for B in range(s1.quotient.n):
            a, b = r1[A], r1[B]
            a2, b2 = r2[lam(A)], r2[lam(B)]
            for src, dst in ((int(c1[a, b]), int(c2[a2, b2])), (int(s1.m.star[a, b]), int(s2.m.star[a2, b2]))):
                i, j = pos1[src], pos2[dst]
                if forced.setdefault(i, j) != j:
                    return None
    d1, d2 = s1.derived, s2.derived
    gens: list[int] = []
    span = {0}
    for x in sorted(forced):
        if x not in span:
            gens.append(x)
            span = _closure(d1.group, gens)
    if len(span) != d1.n:
        raise InternalConsistencyError("commutators and star values do not generate the derived subalgebra")
    img = extend_hom(d1.group, d2.group, gens, [forced[x] for x in gens])
    if img is None or any(img[x] != y for x, y in forced.items()):
        return None
    mu = MLAMorphism(d1, d2, img)
    if not (mu.is_bijective() and mu.is_morphism()):
        return None
    return mu


def isoclinism_search(m1: FiniteMLA, m2: FiniteMLA, cap: int = ENUMERATION_CAP) -> Isoclinism | None:
    """First isoclinism ``m1 -> m2`` in a deterministic order, or None."""
    s1, s2 = _sections(m1), _sections(m2)
    if s1.quotient.n != s2.quotient.n or s1.derived.n != s2.derived.n:
        return None
    for lam in iter_isomorphisms(s1.quotient, s2.quotient, cap):
        mu = _mu_from_lambda(s1, s2, lam)
        if mu is not None:
            return Isoclinism(lam, mu, s1.elems, s2.elems)
    return None


def is_isoclinism(m1: FiniteMLA, m2: FiniteMLA, iso: Isoclinism) -> bool:
    """Both maps are isomorphisms and compatible on every pair of cosets."""
    s1, s2 = _sections(m1), _sections(m2)
    if not (iso.lam.is_bijective() and iso.lam.is_morphism() and iso.mu.is_bijective() and iso.mu.is_morphism()):
        return False
    pos1 = {x: i for i, x in enumerate(s1.elems)}
    c1, c2 = m1.group.comm_table, m2.group.comm_table
    for a in range(m1.n):
        for b in range(m1.n):
            a2 = s2.reps[iso.lam(s1.proj[a])]
            b2 = s2.reps[iso.lam(s1.proj[b])]
            if s2.elems[iso.mu(pos1[int(c1[a, b])])] != c2[a2, b2]:
                return False
            if s2.elems[iso.mu(pos1[int(m1.star[a, b])])] != m2.star[a2, b2]:
                return False
    return True


def bogomolov_group(m: FiniteMLA, wedge: RealizedExterior | None = None) -> GroupTable:
    """``kernel / m0`` in the wedge square as a Cayley table."""
    if wedge is None:
        return _bogomolov_group_cached(m)
    return _bogomolov_group(m, wedge)


@lru_cache(maxsize=256)
def _bogomolov_group_cached(m: FiniteMLA) -> GroupTable:
    return _bogomolov_group(m, realize_exterior(m, WEDGE))


def _bogomolov_group(m: FiniteMLA, wedge: RealizedExterior) -> GroupTable:
    kt, elems = restrict(wedge.table, wedge.kernel.members)
    pos = {x: i for i, x in enumerate(elems)}
    m0 = [pos[x] for x in m0_subgroup(m, wedge).members]
    return quotient_group(kt, m0)[0]


@dataclass(frozen=True)
class InvarianceReport:
    order1: int
    order2: int
    invariants1: tuple[int, ...] | None
    invariants2: tuple[int, ...] | None
    kernel_isomorphism: str  # "found", "none" or "inconclusive"

    @property
    def holds(self) -> bool:
        if self.order1 != self.order2:
            return False
        if self.invariants1 is not None and self.invariants2 is not None:
            if self.invariants1 != self.invariants2:
                return False
        return self.kernel_isomorphism != "none"

    def as_dict(self) -> dict[str, str]:
        return {
            "b0_order_1": str(self.order1),
            "b0_order_2": str(self.order2),
            "b0_invariants_1": format_invariants(self.invariants1),
            "b0_invariants_2": format_invariants(self.invariants2),
            "kernel_isomorphism": self.kernel_isomorphism,
            "invariant": "true" if self.holds else "false",
        }


def verify_b0_invariance(m1: FiniteMLA, m2: FiniteMLA, iso: Isoclinism | None = None,
                         cap: int = 4096) -> InvarianceReport:
    """Compare the Bogomolov multipliers of two isoclinic algebras."""
    if iso is not None and not is_isoclinism(m1, m2, iso):
        raise PreconditionError("the given pair of maps is not an isoclinism")
    b1, b2 = bogomolov_group(m1), bogomolov_group(m2)
    inv1, inv2 = abelian_invariants(b1), abelian_invariants(b2)
    if b1.n != b2.n:
        status = "none"
    elif inv1 is not None and inv2 is not None:
        # finite abelian groups are determined by their invariant factors
        status = "found" if inv1 == inv2 else "none"
    else:
        try:
            status = "found" if group_isomorphic(b1, b2, cap) else "none"
        except ResourceLimitError:
            status = "inconclusive"
    return InvarianceReport(b1.n, b2.n, None if inv1 is None else tuple(inv1),
                            None if inv2 is None else tuple(inv2), status)


# --- five-term sequence ----------------------------------------------------


def k_closure(m: FiniteMLA, h: Sequence[int], normal: bool = True) -> SubSet:
    """``<K(G) & H>``: normal closure in G by default, plain generation otherwise."""
    gens = set(k_set(m).members) & set(h)
    if normal:
        return normal_closure(m.group, gens)
    return subgroup_generated(m.group, gens)


@dataclass(frozen=True)
class FiveTermReport:
    b0_order: int
    b0_quotient_order: int
    middle_order: int
    abelianization_order: int
    quotient_abelianization_order: int
    exact_at_b0_quotient: bool
    exact_at_middle: bool
    exact_at_abelianization: bool
    final_surjective: bool
    nu_kernel_order: int
    phi_image_order: int
    phi_onto_derived_part: bool
    closure_is_generated: bool
    maps: dict[str, str] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return (self.exact_at_b0_quotient and self.exact_at_middle
                and self.exact_at_abelianization and self.final_surjective)

    def as_dict(self) -> dict[str, str]:
        def flag(b):
            return "true" if b else "false"

        d = {
            "b0_order": str(self.b0_order),
            "b0_quotient_order": str(self.b0_quotient_order),
            "middle_order": str(self.middle_order),
            "abelianization_order": str(self.abelianization_order),
            "quotient_abelianization_order": str(self.quotient_abelianization_order),
            "exact_at_b0_quotient": flag(self.exact_at_b0_quotient),
            "exact_at_middle": flag(self.exact_at_middle),
            "exact_at_abelianization": flag(self.exact_at_abelianization),
            "final_surjective": flag(self.final_surjective),
            "nu_kernel_order": str(self.nu_kernel_order),
            "phi_image_order": str(self.phi_image_order),
            "phi_onto_derived_part": flag(self.phi_onto_derived_part),
            "closure_is_generated": flag(self.closure_is_generated),
        }
        d.update({f"map_{k}": v for k, v in self.maps.items()})
        return d


def _labels_mod(t: GroupTable, normal: Sequence[int]) -> list[int]:
    return quotient_group(t, normal)[1]


def _lift_witness(q: FiniteMLA, target: GroupTable, images: Sequence[int]) -> str:
    """The first curly relator of ``q`` whose symbol-wise lift is nontrivial."""
    pres, sym = curly_presentation(q)
    mul, inv = target.mul, target.inv
    for r in pres.relators:
        acc = 0
        for x in r:
            v = images[x] if x >= 0 else int(inv[images[~x]])
            acc = int(mul[acc, v])
        if acc:
            letters = " ".join(("%s(%d,%d)" % sym.describe(x if x >= 0 else ~x)) + ("" if x >= 0 else "^-1")
                               for x in r)
            return f"relator {letters} lifts to class {acc}"
    return "no single relator fails"


def five_term(m: FiniteMLA, h, curly: RealizedExterior | None = None) -> FiveTermReport:
    """Build the five terms for the ideal ``h`` and check exactness.

    Terms: B0(G) -> B0(G/H) -> H/<K(G)&H> -> G^ab -> (G/H)^ab -> 1, with
    both multipliers taken as curly-square kernels.
    """
    members = sorted(set(h.members if isinstance(h, SubSet) else h))
    if not is_ideal(m, members):
        raise PreconditionError("five_term needs an ideal")
    g = m.group
    q, proj = quotient(m, members)
    p = proj.image
    cg = curly or realize_exterior(m, CURLY)
    cq = realize_exterior(q, CURLY)
    n, nq = m.n, q.n

    # nu: x^y -> xH^yH on generators
    images = [cq.wedge(p[x], p[y]) for x in range(n) for y in range(n)]
    images += [cq.bracket(p[x], p[y]) for x in range(n) for y in range(n)]
    nu = hom_by_generators(cg.realized, cq.table, images)
    if nu is None:
        raise InternalConsistencyError("induced map on curly squares is not defined")
    ker_g, ker_q = cg.kernel.members, cq.kernel.members
    nu_img = {nu(x) for x in ker_g}
    if not nu_img <= set(ker_q):
        raise InternalConsistencyError("induced map does not send B0(G) into B0(G/H)")

    # phi: lift symbols to star values and commutators, then reduce mod N
    N = k_closure(m, members)
    N_gen = k_closure(m, members, normal=False)
    if not set(N.members) <= set(members):
        raise InternalConsistencyError("<K(G) & H> is not inside H")
    gn, label_n = quotient_group(g, N.members)
    reps = [0] * nq
    for x in range(n - 1, -1, -1):
        reps[p[x]] = x
    comm = g.comm_table
    lift = [label_n[int(m.star[reps[a], reps[b]])] for a in range(nq) for b in range(nq)]
    lift += [label_n[int(comm[reps[a], reps[b]])] for a in range(nq) for b in range(nq)]
    phi = hom_by_generators(cq.realized, gn, lift)
    if phi is None:
        raise InternalConsistencyError(
            "lift of B0(G/H) into H/<K(G)&H> is not well defined; " + _lift_witness(q, gn, lift))
    h_mod_n = {label_n[x] for x in members}
    phi_img = {phi(x) for x in ker_q}
    if not phi_img <= h_mod_n:
        raise InternalConsistencyError("lift of B0(G/H) leaves H/<K(G)&H>")
    phi_ker = {x for x in ker_q if phi(x) == 0}

    # f: hN -> hD and the natural map G^ab -> (G/H)^ab
    derived = derived_subalgebra(m).members
    label_d = _labels_mod(g, derived)
    gab_order = max(label_d) + 1
    qd = derived_subalgebra(q).members
    label_qd = _labels_mod(q.group, qd)
    qab_order = max(label_qd) + 1
    f_ker = {label_n[x] for x in members if label_d[x] == 0}
    f_img = {label_d[x] for x in members}
    g_map = {}
    for x in range(n):
        g_map.setdefault(label_d[x], label_qd[p[x]])
    g_ker = {a for a, b in g_map.items() if b == 0}
    derived_part = {label_n[x] for x in set(members) & set(derived)}

    return FiveTermReport(
        b0_order=len(ker_g),
        b0_quotient_order=len(ker_q),
        middle_order=len(h_mod_n),
        abelianization_order=gab_order,
        quotient_abelianization_order=qab_order,
        exact_at_b0_quotient=nu_img == phi_ker,
        exact_at_middle=phi_img == f_ker,
        exact_at_abelianization=f_img == g_ker,
        final_surjective=set(g_map.values()) == set(range(qab_order)),
        nu_kernel_order=sum(1 for x in ker_g if nu(x) == 0),
        phi_image_order=len(phi_img),
        phi_onto_derived_part=phi_img == derived_part,
        closure_is_generated=N.members == N_gen.members,
        maps={
            "nu": "x^y -> xH^yH, [x,y] -> [xH,yH]",
            "phi": "xH^yH -> (x*y) mod <K&H>, [xH,yH] -> [x,y] mod <K&H>",
            "f": "h<K&H> -> h mod derived",
        },
    )


@dataclass(frozen=True)
class FourTermReport:
    nu_kernel_order: int
    image_nu_is_kernel_phi: bool
    phi_onto_derived_part: bool

    @property
    def holds(self) -> bool:
        return self.image_nu_is_kernel_phi and self.phi_onto_derived_part

    def as_dict(self) -> dict[str, str]:
        return {
            "nu_kernel_order": str(self.nu_kernel_order),
            "image_nu_is_kernel_phi": "true" if self.image_nu_is_kernel_phi else "false",
            "phi_onto_derived_part": "true" if self.phi_onto_derived_part else "false",
        }


def four_term_check(m: FiniteMLA, h, curly: RealizedExterior | None = None) -> FourTermReport:
    """The computable junctions of the four-term sequence, from the five-term data."""
    r = five_term(m, h, curly)
    return FourTermReport(r.nu_kernel_order, r.exact_at_b0_quotient, r.phi_onto_derived_part)


# --- central extensions ----------------------------------------------------


@dataclass(frozen=True)
class CentralExtension:
    total: FiniteMLA
    base: FiniteMLA
    proj: MLAMorphism
    kernel: SubSet

    def __post_init__(self):
        if not self.proj.is_morphism():
            raise PreconditionError("projection is not a morphism")
        if set(self.proj.image) != set(range(self.base.n)):
            raise PreconditionError("projection is not surjective")
        expected = tuple(x for x, y in enumerate(self.proj.image) if y == 0)
        if tuple(self.kernel.members) != expected:
            raise PreconditionError("kernel does not match the projection")

    @cached_property
    def is_central(self) -> bool:
        k = np.array(self.kernel.members, dtype=np.int64)
        g = self.total.group
        return bool((g.comm_table[k] == 0).all() and (self.total.star[k] == 0).all()
                    and (self.total.star[:, k] == 0).all())


def is_ctp(e: CentralExtension) -> tuple[bool, tuple[int, int] | None]:
    """Whether every base pair with trivial ``(a*b)[a,b]`` lifts to such a pair.

    Returns ``(True, None)`` or ``(False, (a, b))`` for the first failing pair.
    """
    fibers: list[list[int]] = [[] for _ in range(e.base.n)]
    for x, y in enumerate(e.proj.image):
        fibers[y].append(x)
    kb, kt = e.base.k_values, e.total.k_values
    for a, b in np.argwhere(kb == 0).tolist():
        block = kt[np.ix_(fibers[a], fibers[b])]
        if not (block == 0).any():
            return False, (a, b)
    return True, None


def direct_product_extension(a: FiniteMLA, b: FiniteMLA) -> CentralExtension:
    """``a x b -> b``; central when ``a`` is abelian with trivial star."""
    total = direct_product(a, b)
    proj = MLAMorphism(total, b, [x % b.n for x in range(total.n)])
    kernel = SubSet(total, tuple(i * b.n for i in range(a.n)))
    return CentralExtension(total, b, proj, kernel)


@dataclass(frozen=True)
class CurlySequence:
    extension: CentralExtension
    central: bool
    total_perfect: bool


def curly_ses(m: FiniteMLA, curly: RealizedExterior | None = None) -> CurlySequence:
    """The curly square over the derived subalgebra, with the extended star."""
    curly = curly or realize_exterior(m, CURLY)
    star = star_on_exterior(curly)
    if star.mla is None:
        raise InternalConsistencyError(f"star on the curly square failed: {star.report.kind} at {star.report.witness}")
    base, elems = sub_mla(m, derived_subalgebra(m).members)
    pos = {x: i for i, x in enumerate(elems)}
    proj = MLAMorphism(star.mla, base, [pos[curly.chi(x)] for x in range(curly.order)])
    ext = CentralExtension(star.mla, base, proj, curly.kernel)
    return CurlySequence(ext, ext.is_central, is_perfect(star.mla))
