import numpy as np
import pytest

from conftest import s3
from multlie.cocycles import CONDITIONS, CocyclePair, coboundary, is_2cocycle, restrict_cocycle
from multlie.core import commutator_structure, enumerate_abelian_subalgebras, trivial_structure
from multlie.errors import PreconditionError, StructuralError
from multlie.library import cyclic, klein_four, v4_example

A, B, C = 1, 2, 3


def literal_coboundary(m, k, g):
    n = m.n
    mul, star = m.group.mul, m.star
    f = [[(g[y] - g[mul[x, y]] + g[x]) % k for y in range(n)] for x in range(n)]
    h = [[(-g[star[x, y]]) % k for y in range(n)] for x in range(n)]
    return np.array(f), np.array(h)


def test_zero_pair_valid():
    m = v4_example()
    z = np.zeros((4, 4), dtype=np.int64)
    assert is_2cocycle(m, CocyclePair(cyclic(2), z, z)).valid


def test_coboundary_matches_literal_formula(rng):
    m = commutator_structure(s3())
    for k in (2, 3, 4):
        g = rng.integers(0, k, size=6)
        g[0] = 0
        c = coboundary(m, cyclic(k), g)
        f, h = literal_coboundary(m, k, g)
        assert np.array_equal(c.f, f) and np.array_equal(c.h, h)
        assert is_2cocycle(m, c).valid


def test_v4_with_z4_coefficients():
    m = v4_example()
    g = [0, 1, 2, 3]
    c = coboundary(m, cyclic(4), g)
    # a*b = a, so g*(a,b) = -g(a)
    assert c.h[A, B] == (-1) % 4
    assert c.h[B, A] == (-g[m.star[B, A]]) % 4


def test_broken_h_reports_condition2():
    m = trivial_structure(klein_four())
    f = np.zeros((4, 4), dtype=np.int64)
    h = np.zeros((4, 4), dtype=np.int64)
    h[A, B] = h[B, A] = 1
    r = is_2cocycle(m, CocyclePair(cyclic(2), f, h))
    assert not r.valid and r.kind == "condition2"
    x, y, z = r.witness
    # with f = 0 condition 2 reads h(x,yz) = h(x,y) + h(x,z)
    assert h[x, m.group.mul[y, z]] != (h[x, y] + h[x, z]) % 2
    assert r.message == CONDITIONS[2]


def test_condition1_witness():
    m = v4_example()
    z = np.zeros((4, 4), dtype=np.int64)
    h = z.copy()
    h[A, A] = 1
    r = is_2cocycle(m, CocyclePair(cyclic(2), z, h))
    assert not r.valid and r.kind == "condition1" and r.witness == (A,)


def test_group_cocycle_failure():
    m = v4_example()
    f = np.zeros((4, 4), dtype=np.int64)
    f[A, B] = 1
    r = is_2cocycle(m, CocyclePair(cyclic(2), f, np.zeros_like(f)))
    assert not r.valid and r.kind == "group"


def test_restriction_to_abelian_subalgebras(rng):
    m = commutator_structure(s3())
    g = rng.integers(0, 3, size=6)
    g[0] = 0
    c = coboundary(m, cyclic(3), g)
    for sub in enumerate_abelian_subalgebras(m):
        s, rc = restrict_cocycle(m, sub.members, c)
        assert s.n == len(sub)
        assert is_2cocycle(s, rc).valid


def test_restriction_needs_subalgebra():
    m = v4_example()
    c = coboundary(m, cyclic(2), [0, 1, 0, 1])
    with pytest.raises(PreconditionError):
        restrict_cocycle(m, [0, A, B], c)


def test_input_checks():
    m = v4_example()
    with pytest.raises(PreconditionError):
        coboundary(m, cyclic(2), [1, 0, 0, 0])
    with pytest.raises(StructuralError):
        CocyclePair(cyclic(2), np.zeros((4, 4)), np.full((4, 4), 5))
    with pytest.raises(PreconditionError):
        z = np.zeros((2, 2), dtype=np.int64)
        is_2cocycle(m, CocyclePair(cyclic(2), z, z))
