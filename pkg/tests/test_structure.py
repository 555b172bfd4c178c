import numpy as np
import pytest

from conftest import d4, mod_table, q8, s3
from multlie.core import (
    FiniteMLA,
    MLAMorphism,
    commutator_structure,
    enumerate_ideals,
    k_set,
    ml_center,
    quotient,
    relabel,
    trivial_structure,
    validate_mla,
)
from multlie.errors import InternalConsistencyError, PreconditionError
from multlie.groups import SubSet
from multlie.library import cross_product_example, cyclic, v4_example
from multlie.structure import (
    CentralExtension,
    curly_ses,
    direct_product_extension,
    five_term,
    four_term_check,
    is_ctp,
    is_isoclinism,
    isoclinism_search,
    k_closure,
    verify_b0_invariance,
)


def reversed_commutator(g):
    """x*y = [y,x]: valid whenever the derived subgroup is abelian."""
    return FiniteMLA(g, g.comm_table.T.copy())


def test_isoclinism_identity_and_relabel():
    m = v4_example()
    iso = isoclinism_search(m, m)
    assert iso is not None and is_isoclinism(m, m, iso)
    r = relabel(m, [0, 2, 3, 1])
    iso = isoclinism_search(m, r)
    assert iso is not None and is_isoclinism(m, r, iso)


def test_trivial_star_abelian_all_isoclinic():
    # the whole group is central and nothing is derived
    a, b = trivial_structure(mod_table(2, 2)), trivial_structure(cyclic(3))
    assert isoclinism_search(a, b) is not None
    assert isoclinism_search(v4_example(), trivial_structure(cyclic(2))) is None


def test_d4_q8_commutator_structures_isoclinic():
    a, b = commutator_structure(d4()), commutator_structure(q8())
    ab, ba = isoclinism_search(a, b), isoclinism_search(b, a)
    assert ab is not None and ba is not None
    assert is_isoclinism(a, b, ab) and is_isoclinism(b, a, ba)
    rep = verify_b0_invariance(a, b, ab)
    assert rep.holds and rep.order1 == rep.order2


def test_not_isoclinic_different_derived():
    assert isoclinism_search(commutator_structure(s3()), trivial_structure(s3())) is None


def test_b0_invariance_rejects_bad_maps():
    a, b = commutator_structure(d4()), commutator_structure(q8())
    iso = isoclinism_search(a, b)
    bad = type(iso)(iso.lam, MLAMorphism(iso.mu.source, iso.mu.target, [0] * iso.mu.source.n),
                    iso.elems1, iso.elems2)
    assert not is_isoclinism(a, b, bad)
    with pytest.raises(PreconditionError):
        verify_b0_invariance(a, b, bad)


def test_k_closure():
    m = v4_example()
    assert k_closure(m, range(4)).members == (0, 1)
    assert k_closure(m, [0, 2]).members == (0,)


@pytest.mark.parametrize("h", [[0], [0, 1], [0, 1, 2, 3]])
def test_five_term_v4(h):
    r = five_term(v4_example(), h)
    assert r.exact
    assert r.closure_is_generated
    assert four_term_check(v4_example(), h).holds


def test_five_term_trivial_ideal_orders():
    m = v4_example()
    r = five_term(m, [0])
    assert r.middle_order == 1
    assert r.abelianization_order == r.quotient_abelianization_order == 2


def test_five_term_rejects_non_ideal():
    with pytest.raises(PreconditionError):
        five_term(v4_example(), [0, 2])


def test_reversed_commutator_has_trivial_k():
    for g in (s3(), d4(), q8()):
        m = reversed_commutator(g)
        assert validate_mla(m).valid
        assert k_set(m).members == (0,)


def test_five_term_fails_when_k_trivial():
    """S3 with x*y = [y,x] and H = A3.  N = <K & H> is trivial, so H/N has
    order 3 and lies in the derived subgroup, i.e. in the kernel of
    H/N -> G^ab.  Exactness there would need a nontrivial image from
    B0(G/H) = B0(Z2), which is trivial."""
    g = s3()
    m = reversed_commutator(g)
    a3 = [x for x in range(6) if g.order_of(x) != 2]
    r = five_term(m, a3)
    assert r.middle_order == 3 and r.b0_quotient_order == 1
    assert r.phi_image_order == 1
    assert not r.exact_at_middle and not r.exact
    assert r.exact_at_abelianization and r.final_surjective


def test_five_term_lift_ill_defined():
    g = d4()
    m = reversed_commutator(g)
    z = ml_center(m).members
    center = [x for x in z if x != 0]
    assert len(center) == 1
    with pytest.raises(InternalConsistencyError, match="relator"):
        five_term(m, [0, center[0]])


def test_identity_extension_is_ctp():
    m = v4_example()
    e = CentralExtension(m, m, MLAMorphism(m, m, range(4)), SubSet(m, (0,)))
    assert e.is_central and is_ctp(e) == (True, None)


def test_direct_product_extension_ctp():
    b = commutator_structure(s3())
    e = direct_product_extension(trivial_structure(cyclic(2)), b)
    assert e.is_central
    assert is_ctp(e) == (True, None)


def test_non_ctp_example():
    """Q8 with trivial star over its centre: the base V4 has every k trivial,
    but lifts of two distinct noncentral generators never commute."""
    m = trivial_structure(q8())
    z = ml_center(m)
    # the centre of a trivial-star algebra is the group centre
    center = [x for x in range(8) if all(m.group.mul[x, y] == m.group.mul[y, x] for y in range(8))]
    assert list(z.members) == center
    base, p = quotient(m, center)
    e = CentralExtension(m, base, p, SubSet(m, tuple(center)))
    assert e.is_central
    ok, witness = is_ctp(e)
    assert not ok and witness is not None
    a, b = witness
    assert a != 0 and b != 0 and a != b


def test_central_extension_validation():
    m = v4_example()
    with pytest.raises(PreconditionError):
        CentralExtension(m, m, MLAMorphism(m, m, range(4)), SubSet(m, (0, 1)))
    t = trivial_structure(cyclic(2))
    with pytest.raises(PreconditionError):
        CentralExtension(t, m, MLAMorphism(t, m, [0, 0]), SubSet(t, (0, 1)))


def test_curly_ses_examples():
    s = curly_ses(trivial_structure(mod_table(2, 2)))
    assert s.extension.total.n == 1 and s.central
    s = curly_ses(cross_product_example())
    assert s.central
    assert s.extension.base.n == cross_product_example().n
    assert len(s.extension.kernel) * s.extension.base.n == s.extension.total.n


def test_five_term_over_ideals_of_s3_commutator_structure():
    # here K(G) is the derived subgroup, unlike the reversed structure above
    m = commutator_structure(s3())
    assert len(k_set(m)) == 3
    for h in enumerate_ideals(m):
        assert five_term(m, h.members).exact


def test_q8_commutator_structure_is_reversed_one():
    # commutators in Q8 have order at most 2, so [x,y] = [y,x]
    m = commutator_structure(q8())
    assert np.array_equal(m.star, reversed_commutator(q8()).star)
