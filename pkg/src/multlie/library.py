"""Small groups and standard star structures used by tests and the corpus."""

from __future__ import annotations

from functools import lru_cache
import numpy as np

from .core import FiniteMLA, commutator_structure, trivial_structure
from .fp import Presentation, todd_coxeter
from .groups import GroupTable


def cyclic(n: int) -> GroupTable:
    i = np.arange(n)
    return GroupTable((i[:, None] + i[None, :]) % n)


def product_table(a: GroupTable, b: GroupTable) -> GroupTable:
    """Direct product; element ``(i, j)`` has index ``i * |b| + j``."""
    nb = b.n
    ia = np.repeat(np.arange(a.n), nb)
    ib = np.tile(np.arange(nb), a.n)
    return GroupTable(a.mul[ia[:, None], ia[None, :]] * nb + b.mul[ib[:, None], ib[None, :]])


def abelian_group(invariants) -> GroupTable:
    t = cyclic(1)
    for d in invariants:
        t = product_table(t, cyclic(d))
    return t


def from_presentation(gen_count: int, relators) -> GroupTable:
    return todd_coxeter(Presentation(gen_count, tuple(tuple(r) for r in relators))).table


def _pow(g: int, k: int) -> tuple[int, ...]:
    return (g,) * k if k >= 0 else (~g,) * (-k)


def dihedral(n: int) -> GroupTable:
    """Dihedral group of order ``2n``."""
    return from_presentation(2, [_pow(0, n), _pow(1, 2), (0, 1, 0, 1)])


def dicyclic(n: int) -> GroupTable:
    """Dicyclic group of order ``4n`` (quaternion for n = 2)."""
    return from_presentation(2, [_pow(0, 2 * n), _pow(0, n) + _pow(~1, 2), (1, 0, ~1, 0)])


def alternating4() -> GroupTable:
    return from_presentation(2, [_pow(0, 2), _pow(1, 3), _pow(0, 1) + _pow(1, 1) + (0, 1, 0, 1)])


def abelian_invariant_lists(max_order: int) -> list[tuple[int, ...]]:
    """Every invariant-factor list ``d1 | d2 | ...`` with product <= max_order."""
    out = [()]

    def grow(prefix: tuple[int, ...], size: int):
        last = prefix[-1] if prefix else None
        for d in range(2, max_order // size + 1):
            if last is None or d % last == 0:
                new = prefix + (d,)
                out.append(new)
                grow(new, size * d)

    grow((), 1)
    return sorted(out, key=lambda t: (int(np.prod(t)) if t else 1, t))


def abelian_groups(max_order: int) -> list[tuple[str, GroupTable]]:
    out = []
    for inv in abelian_invariant_lists(max_order):
        name = "Z1" if not inv else "x".join(f"Z{d}" for d in inv)
        out.append((name, abelian_group(inv)))
    return out


@lru_cache(maxsize=None)
def small_groups(max_order: int = 8) -> tuple[tuple[str, GroupTable], ...]:
    """All groups of order <= 8 up to isomorphism, with short names.

    Above order 8 only the abelian groups and a few named groups are listed.
    """
    named = {
        6: [("S3", dihedral(3))],
        8: [("D4", dihedral(4)), ("Q8", dicyclic(2))],
        10: [("D5", dihedral(5))],
        12: [("A4", alternating4()), ("D6", dihedral(6)), ("Dic3", dicyclic(3))],
        14: [("D7", dihedral(7))],
        16: [("D8", dihedral(8)), ("Q16", dicyclic(4))],
    }
    out = []
    abel = abelian_groups(max_order)
    for size in range(1, max_order + 1):
        out += [(name, t) for name, t in abel if t.n == size]
        out += [(name, t) for name, t in named.get(size, ())]
    return tuple(out)


def group_by_name(name: str) -> GroupTable:
    for key, t in small_groups(16):
        if key == name:
            return t
    raise KeyError(name)


# --- standard structures -------------------------------------------------------


def klein_four() -> GroupTable:
    """V4 on 0=1, 1=a, 2=b, 3=ab (bitwise xor)."""
    return GroupTable([[i ^ j for j in range(4)] for i in range(4)])


def v4_example() -> FiniteMLA:
    """V4 with ``a*b = a``: every pair of distinct non-identity elements stars to a."""
    star = [[1 if (x and y and x != y) else 0 for y in range(4)] for x in range(4)]
    return FiniteMLA(klein_four(), star, names=("1", "a", "b", "ab"))


def cross_product_example() -> FiniteMLA:
    """F2^3 with the cross product as star; a perfect MLA of order 8.

    Element ``x`` is the bit vector of its index; group law is xor.
    """
    vecs = [tuple((x >> k) & 1 for k in range(3)) for x in range(8)]

    def idx(v):
        return sum(b << k for k, b in enumerate(v))

    def cross(a, b):
        return ((a[1] * b[2] - a[2] * b[1]) % 2, (a[2] * b[0] - a[0] * b[2]) % 2, (a[0] * b[1] - a[1] * b[0]) % 2)

    mul = [[x ^ y for y in range(8)] for x in range(8)]
    star = [[idx(cross(vecs[x], vecs[y])) for y in range(8)] for x in range(8)]
    return FiniteMLA(GroupTable(mul), star)


def trivial_mla() -> FiniteMLA:
    return trivial_structure(cyclic(1))


def standard_structures(t: GroupTable) -> list[FiniteMLA]:
    """The trivial star and, for non-abelian groups, the commutator star."""
    out = [trivial_structure(t)]
    if not t.is_abelian:
        out.append(commutator_structure(t))
    return out


def random_identity_preserving(n: int, modulus: int, rng) -> list[int]:
    """Random map with value 0 at the identity, values in ``range(modulus)``."""
    return [0] + [int(v) for v in rng.integers(0, modulus, size=n - 1)]
