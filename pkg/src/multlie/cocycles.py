"""Multiplicative Lie 2-cocycles with finite abelian coefficients.

Coefficients are written additively: ``add`` is the coefficient group's
table and ``neg`` its inverse map.  Reports name a failed condition by
its key in :data:`CONDITIONS`, as ``condition<k>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FiniteMLA, ValidationReport, is_subalgebra, sub_mla
from .errors import InternalConsistencyError, PreconditionError, StructuralError
from .groups import GroupTable

CONDITIONS = {
    "group": "f(x,y) + f(xy,z) = f(y,z) + f(x,yz)",
    1: "h(x,1) = h(1,x) = h(x,x) = 0",
    2: "h(x,yz) = h(x,y) + h(x,z) - f(y^-1,y) + f(y,x*z) + f(y(x*z),y^-1) + f(x*y,^y(x*z))",
    3: "h(xy,z) = h(y,z) + h(x,z) - f(x^-1,x) + f(x,y*z) + f(x(y*z),x^-1) + f(^x(y*z),x*z)",
    4: "h(y*x,^xz) + h(x*z,^zy) + h(z*y,^yx) + f(A,B) + f(AB,C) = 0",
    5: "h(^zx,^zy) = h(x,y) + f(z,x*y) - f(z^-1,z) + f(z(x*y),z^-1)",
}


@dataclass(frozen=True)
class CocyclePair:
    coeff: GroupTable
    f: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        f = np.array(self.f, dtype=np.int64)
        h = np.array(self.h, dtype=np.int64)
        if f.ndim != 2 or f.shape != h.shape or f.shape[0] != f.shape[1]:
            raise StructuralError("f and h must be square tables of the same size")
        for name, tab in (("f", f), ("h", h)):
            if tab.size and (tab.min() < 0 or tab.max() >= self.coeff.n):
                raise StructuralError(f"{name} has values outside the coefficient group")
        f.setflags(write=False)
        h.setflags(write=False)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return self.f.shape[0]


def _witness(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    return None if len(hits) == 0 else tuple(int(v) for v in hits[0])


def is_2cocycle(m: FiniteMLA, c: CocyclePair) -> ValidationReport:
    """Check the group cocycle identity, then conditions 1 to 5 on ``h``."""
    if not c.coeff.is_abelian:
        raise PreconditionError("coefficient group must be abelian")
    if c.n != m.n:
        raise PreconditionError(f"cocycle tables have size {c.n}, algebra has {m.n}")
    add, neg = c.coeff.mul, c.coeff.inv
    f, h = c.f, c.h
    g = m.group
    mul, inv, cj, s = g.mul, g.inv, g.conj_table, m.star
    n = m.n
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]

    def plus(*terms):
        acc = terms[0]
        for t in terms[1:]:
            acc = add[acc, t]
        return acc

    w = _witness(plus(f[x, y], f[mul[x, y], z]) != plus(f[y, z], f[x, mul[y, z]]))
    if w is not None:
        return ValidationReport(False, "group", w, CONDITIONS["group"])

    d = np.arange(n)
    w = _witness((h[d, 0] != 0) | (h[0, d] != 0) | (h[d, d] != 0))
    if w is not None:
        return ValidationReport(False, "condition1", w, CONDITIONS[1])

    xz = s[x, z]
    right = plus(h[x, y], h[x, z], neg[f[inv[y], y]], f[y, xz], f[mul[y, xz], inv[y]], f[s[x, y], cj[y, xz]])
    w = _witness(h[x, mul[y, z]] != right)
    if w is not None:
        return ValidationReport(False, "condition2", w, CONDITIONS[2])

    yz = s[y, z]
    left = plus(h[y, z], h[x, z], neg[f[inv[x], x]], f[x, yz], f[mul[x, yz], inv[x]], f[cj[x, yz], s[x, z]])
    w = _witness(h[mul[x, y], z] != left)
    if w is not None:
        return ValidationReport(False, "condition3", w, CONDITIONS[3])

    yx, zx_, zy = s[y, x], s[x, z], s[z, y]
    A = s[yx, cj[x, z]]
    B = s[zx_, cj[z, y]]
    C = s[zy, cj[y, x]]
    cyclic = plus(h[yx, cj[x, z]], h[zx_, cj[z, y]], h[zy, cj[y, x]], f[A, B], f[mul[A, B], C])
    w = _witness(cyclic != 0)
    if w is not None:
        return ValidationReport(False, "condition4", w, CONDITIONS[4])

    # equivariance reads (x, y, z) with z the conjugating element
    xy = s[x, y]
    moved = plus(h[x, y], f[z, xy], neg[f[inv[z], z]], f[mul[z, xy], inv[z]])
    w = _witness(h[cj[z, x], cj[z, y]] != moved)
    if w is not None:
        return ValidationReport(False, "condition5", w, CONDITIONS[5])
    return ValidationReport(True)


def coboundary(m: FiniteMLA, coeff: GroupTable, g) -> CocyclePair:
    """The pair ``(dg, g*)`` with ``dg(x,y) = g(y) - g(xy) + g(x)`` and ``g*(x,y) = -g(x*y)``."""
    g = np.asarray(g, dtype=np.int64)
    if g.shape != (m.n,):
        raise PreconditionError(f"g needs {m.n} values")
    if g[0] != 0:
        raise PreconditionError("g must send the identity to 0")
    add, neg = coeff.mul, coeff.inv
    mul = m.group.mul
    f = add[add[g[None, :], neg[g[mul]]], g[:, None]]
    h = neg[g[m.star]]
    c = CocyclePair(coeff, f, h)
    report = is_2cocycle(m, c)
    if not report.valid:
        raise InternalConsistencyError(f"coboundary failed {report.kind} at {report.witness}")
    return c


def restrict_cocycle(m: FiniteMLA, members, c: CocyclePair) -> tuple[FiniteMLA, CocyclePair]:
    """Restriction to a subalgebra, re-indexed by sorted member order."""
    members = sorted(set(members))
    if not is_subalgebra(m, members):
        raise PreconditionError("restriction needs a subalgebra")
    sub, elems = sub_mla(m, members)
    block = np.ix_(elems, elems)
    return sub, CocyclePair(c.coeff, c.f[block], c.h[block])
