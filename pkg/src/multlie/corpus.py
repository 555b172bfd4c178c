"""The desk-scale corpus: every MLA on every group of small order."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .core import FiniteMLA, derived_subalgebra, is_perfect, ml_center
from .library import small_groups
from .multipliers import MultiplierReport, bogomolov
from .stars import enumerate_stars


@dataclass(frozen=True)
class CorpusEntry:
    group: str
    star_id: int
    mla: FiniteMLA

    @property
    def key(self) -> str:
        return f"{self.group}#{self.star_id}"

    @cached_property
    def multipliers(self) -> MultiplierReport:
        return bogomolov(self.mla)

    def summary(self) -> dict[str, int | bool]:
        r = self.multipliers
        return {
            "derived_order": len(derived_subalgebra(self.mla)),
            "center_order": len(ml_center(self.mla)),
            "schur_order": r.schur_order,
            "m0_order": r.m0_order,
            "bogomolov_order": r.bogomolov_order,
            "perfect": is_perfect(self.mla),
        }


@lru_cache(maxsize=None)
def mla_corpus(max_order: int = 8, dedup: bool = True) -> tuple[CorpusEntry, ...]:
    """All MLAs on the groups of :func:`small_groups` up to ``max_order``.

    ``star_id`` is the position in the (possibly deduplicated) enumeration
    for that group, so keys are stable across runs.
    """
    out = []
    for name, t in small_groups(max_order):
        for i, m in enumerate(enumerate_stars(t, dedup=dedup)):
            out.append(CorpusEntry(name, i, m))
    return tuple(out)
