import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import d4, mod_table, q8
from multlie.abelian import (
    abelian_invariants,
    format_invariants,
    invariants_from_orders,
    quotient_invariants,
    smith_invariants,
)
from multlie.groups import normal_closure, subgroup_generated
from multlie.library import abelian_invariant_lists


def test_examples():
    assert abelian_invariants(mod_table(1)) == []
    assert abelian_invariants(mod_table(2, 2)) == [2, 2]
    assert abelian_invariants(mod_table(6)) == [6]
    assert abelian_invariants(mod_table(2, 3)) == [6]
    assert abelian_invariants(mod_table(4, 6)) == [2, 12]
    assert abelian_invariants(q8()) is None


def test_order_count_oracle_on_known_groups():
    assert invariants_from_orders(mod_table(4, 2).element_orders) == [2, 4]
    assert invariants_from_orders(mod_table(2, 2, 2).element_orders) == [2, 2, 2]
    assert invariants_from_orders([1]) == []


@pytest.mark.parametrize("inv", [i for i in abelian_invariant_lists(64) if i])
def test_snf_matches_order_count_up_to_64(inv):
    t = mod_table(*inv)
    got = abelian_invariants(t)
    assert got == invariants_from_orders(t.element_orders)
    assert got == [d for d in inv if d > 1]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 5, 6, 8, 9]), min_size=1, max_size=3).filter(
    lambda xs: int(np.prod(xs)) <= 200))
def test_arbitrary_product_of_cyclics(moduli):
    t = mod_table(*moduli)
    inv = abelian_invariants(t)
    assert int(np.prod(inv, dtype=np.int64)) == t.n
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
    assert inv == invariants_from_orders(t.element_orders)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_subgroups_and_quotients(data):
    t = mod_table(4, 6)
    gens = data.draw(st.lists(st.integers(0, t.n - 1), max_size=3))
    h = subgroup_generated(t, gens).members
    sub = abelian_invariants(t, h)
    assert int(np.prod(sub, dtype=np.int64)) == len(h)
    q = quotient_invariants(t, range(t.n), h)
    assert int(np.prod(q, dtype=np.int64)) == t.n // len(h)


def test_nonabelian_quotient_detected():
    g = d4()
    assert quotient_invariants(g, range(8), [0]) is None
    center = normal_closure(g, [next(x for x in range(1, 8) if all(g.mul[x, y] == g.mul[y, x] for y in range(8)))])
    assert quotient_invariants(g, range(8), center.members) == [2, 2]


def test_smith_on_raw_relations():
    assert smith_invariants([[2, 0], [0, 3]], 2) == [6]
    assert smith_invariants([[4, 0], [0, 6]], 2) == [2, 12]
    assert smith_invariants([[1]], 1) == []


def test_format():
    assert format_invariants([2, 2]) == "[2,2]"
    assert format_invariants([]) == "[]"
    assert format_invariants(None) == "nonabelian"
