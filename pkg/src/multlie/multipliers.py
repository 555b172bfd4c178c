"""Schur multiplier, the subgroup generated by commuting symbols, and the
Bogomolov multiplier computed two independent ways."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import prod

import numpy as np


from .abelian import abelian_invariants, format_invariants, quotient_invariants
from .core import FiniteMLA
from .errors import InternalConsistencyError
from .exterior import CURLY, WEDGE, RealizedExterior, realize_exterior
from .fp import MAX_COSETS
from .groups import SubSet, is_normal, subgroup_generated

log = logging.getLogger(__name__)


def schur_multiplier(m: FiniteMLA, wedge: RealizedExterior | None = None) -> SubSet:
    """Kernel of the map from the wedge square onto the algebra."""
    wedge = wedge or realize_exterior(m, WEDGE)
    return wedge.kernel


def commuting_pairs(m: FiniteMLA) -> np.ndarray:
    """Pairs ``(i, j)`` with trivial star and trivial commutator."""
    return np.argwhere((m.star == 0) & (m.group.comm_table == 0))


def m0_subgroup(m: FiniteMLA, wedge: RealizedExterior | None = None) -> SubSet:
    """Subgroup of the wedge square generated by the symbols on commuting pairs."""
    wedge = wedge or realize_exterior(m, WEDGE)
    pairs = commuting_pairs(m)
    gens = set(wedge.wedge_images[pairs[:, 0], pairs[:, 1]].tolist())
    gens |= set(wedge.bracket_images[pairs[:, 0], pairs[:, 1]].tolist())
    m0 = subgroup_generated(wedge.table, gens)
    if not m0.as_set <= wedge.kernel.as_set:
        raise InternalConsistencyError("commuting-pair symbols leave the kernel of chi")
    return m0


@dataclass(frozen=True)
class MultiplierReport:
    schur_order: int
    schur_invariants: tuple[int, ...] | None
    m0_order: int
    m0_normal: bool
    bogomolov_order: int
    bogomolov_invariants: tuple[int, ...] | None
    curly_order: int
    curly_invariants: tuple[int, ...] | None
    wedge_kernel_central: bool
    curly_kernel_central: bool

    @property
    def routes_agree(self) -> bool:
        if self.bogomolov_order != self.curly_order:
            return False
        if self.bogomolov_invariants is not None and self.curly_invariants is not None:
            return self.bogomolov_invariants == self.curly_invariants
        return True

    def as_dict(self) -> dict[str, str]:
        def flag(b):
            return "true" if b else "false"

        return {
            "schur_order": str(self.schur_order),
            "schur_invariants": format_invariants(self.schur_invariants),
            "m0_order": str(self.m0_order),
            "m0_normal": flag(self.m0_normal),
            "bogomolov_order": str(self.bogomolov_order),
            "bogomolov_invariants": format_invariants(self.bogomolov_invariants),
            "curly_bogomolov_order": str(self.curly_order),
            "curly_bogomolov_invariants": format_invariants(self.curly_invariants),
            "routes_agree": flag(self.routes_agree),
            "wedge_kernel_central": flag(self.wedge_kernel_central),
            "curly_kernel_central": flag(self.curly_kernel_central),
        }


def _tuple(inv):
    return None if inv is None else tuple(inv)


def bogomolov(m: FiniteMLA, strict: bool = False, max_cosets: int = MAX_COSETS,
              wedge: RealizedExterior | None = None, curly: RealizedExterior | None = None) -> MultiplierReport:
    """Bogomolov multiplier as kernel modulo the commuting-pair subgroup in the
    wedge square (reported as ``bogomolov_*``) and as the kernel of the curly
    square (``curly_*``).

    Disagreement between the two is logged as an error, or raised when
    ``strict`` is set.
    """
    wedge = wedge or realize_exterior(m, WEDGE, max_cosets)
    curly = curly or realize_exterior(m, CURLY, max_cosets)
    t = wedge.table
    kernel = wedge.kernel
    m0 = m0_subgroup(m, wedge)
    if not is_normal(t, m0.members, kernel.members):
        raise InternalConsistencyError("commuting-pair subgroup is not normal in the kernel")
    report = MultiplierReport(
        schur_order=len(kernel),
        schur_invariants=_tuple(abelian_invariants(t, kernel.members)),
        m0_order=len(m0),
        m0_normal=is_normal(t, m0.members),
        bogomolov_order=len(kernel) // len(m0),
        bogomolov_invariants=_tuple(quotient_invariants(t, kernel.members, m0.members)),
        curly_order=len(curly.kernel),
        curly_invariants=_tuple(abelian_invariants(curly.table, curly.kernel.members)),
        wedge_kernel_central=wedge.kernel_is_central(),
        curly_kernel_central=curly.kernel_is_central(),
    )
    if not report.routes_agree:
        msg = (f"Bogomolov routes disagree: kernel/M0 has order {report.bogomolov_order} "
               f"{format_invariants(report.bogomolov_invariants)}, curly kernel has order "
               f"{report.curly_order} {format_invariants(report.curly_invariants)}")
        if strict:
            raise InternalConsistencyError(msg)
        log.error(msg)
    return report


def hom_count_check(report: MultiplierReport) -> bool | None:
    """Number of homomorphisms from the Bogomolov multiplier to the roots of
    unity equals its order.  None when the multiplier is not abelian."""
    inv = report.bogomolov_invariants
    if inv is None:
        return None
    # Hom(Z/d, roots of unity) has d elements
    return prod(inv) == report.bogomolov_order
