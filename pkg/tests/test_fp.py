import itertools
import random

import numpy as np
import pytest

from conftest import a4, d4, mod_table, q8, s3
from multlie.core import group_isomorphic
from multlie.errors import PreconditionError, ResourceLimitError
from multlie.fp import (
    STRATEGIES,
    Presentation,
    canonical_relator,
    cyclic_reduce,
    enumerate_cosets,
    evaluate_word,
    free_reduce,
    hom_by_generators,
    inverse_word,
    todd_coxeter,
)
from multlie.groups import (
    GroupMap,
    is_normal,
    kernel_of,
    normal_closure,
    quotient_group,
    restrict,
    subgroup_generated,
)
from multlie.library import cyclic

a, b = 0, 1
A, B = ~0, ~1

KLEIN = Presentation(2, ((a, a), (b, b), (a, b, a, b)))
S3_PRES = Presentation(2, ((a, a, a), (b, b), (a, b, a, b)))


def words(gen_count, length):
    letters = [g for i in range(gen_count) for g in (i, ~i)]
    return itertools.product(letters, repeat=length)


def test_word_helpers():
    assert free_reduce((a, A, b)) == (b,)
    assert free_reduce((a, b, B, A)) == ()
    assert inverse_word((a, b)) == (B, A)
    assert cyclic_reduce((b, a, B)) == (a,)
    w = (b, a, a)
    assert canonical_relator(w) == canonical_relator((a, b, a)) == canonical_relator(inverse_word(w))


def test_presentation_drops_empty_and_duplicates():
    p = Presentation(1, ((a, A), (a, a), (a, a)))
    assert p.relators == ((a, a),)
    with pytest.raises(PreconditionError):
        Presentation(1, ((b,),))


def test_golden_orders():
    assert todd_coxeter(KLEIN).order == 4
    assert todd_coxeter(S3_PRES).order == 6
    assert todd_coxeter(Presentation(1, ((a,),))).order == 1


def test_s3_order_by_word_classes():
    """Brute force: words up to length 6 evaluated in an independent S3 fall into 6 classes."""
    g = s3()
    x = next(e for e in range(6) if g.order_of(e) == 3)
    y = next(e for e in range(6) if g.order_of(e) == 2)
    ev = {a: x, b: y, A: int(g.inv[x]), B: int(g.inv[y])}
    assert all(g.prod(*(ev[c] for c in r)) == 0 for r in S3_PRES.relators)
    seen = {0}
    for n in range(1, 7):
        for w in words(2, n):
            seen.add(g.prod(*(ev[c] for c in w)))
    assert len(seen) == todd_coxeter(S3_PRES).order == 6


GOLDEN = {
    "trivial": (Presentation(1, ((a,),)), 1, None),
    "V4": (KLEIN, 4, mod_table(2, 2)),
    "S3": (S3_PRES, 6, s3()),
    "Q8": (Presentation(2, ((a, a, a, a), (a, a, B, B), (b, a, B, a))), 8, q8()),
    "D4": (Presentation(2, ((a, a, a, a), (b, b), (a, b, a, b))), 8, d4()),
    "A4": (Presentation(2, ((a, a), (b, b, b), (a, b, a, b, a, b))), 12, a4()),
}


@pytest.mark.parametrize("name", GOLDEN)
@pytest.mark.parametrize("strategy", STRATEGIES)
def test_strategies_agree(name, strategy):
    p, order, oracle = GOLDEN[name]
    r = todd_coxeter(p, strategy=strategy, simplify=False)
    assert r.order == order
    if oracle is not None:
        assert group_isomorphic(r.table, oracle)


@pytest.mark.parametrize("name", GOLDEN)
def test_relator_permutation_invariance(name):
    p, order, _ = GOLDEN[name]
    rng = random.Random(7)
    base = todd_coxeter(p).table
    for _ in range(5):
        rels = list(p.relators)
        rng.shuffle(rels)
        # rotations and inverses generate the same normal closure
        rels = [r[k:] + r[:k] for r in rels for k in [rng.randrange(len(r))]]
        rels = [inverse_word(r) if rng.random() < 0.5 else r for r in rels]
        r = todd_coxeter(Presentation(p.gen_count, tuple(rels)))
        assert r.order == order
        assert group_isomorphic(r.table, base)


def test_realization_invariants():
    for p, _, _ in GOLDEN.values():
        r = todd_coxeter(p)
        for rel in p.relators:
            assert evaluate_word(r, rel) == 0
        assert len(subgroup_generated(r.table, r.gen_images)) == r.order
        assert evaluate_word(r, ()) == 0
        assert evaluate_word(r, (a, A)) == 0


def test_enumerate_cosets_regular_action():
    act = enumerate_cosets(2, S3_PRES.relators)
    assert act.shape == (6, 4)
    for col in range(4):
        assert sorted(act[:, col]) == list(range(6))


def test_resource_limit_on_infinite_group():
    free_abelian = Presentation(2, ((a, b, A, B),))
    for strategy in STRATEGIES:
        with pytest.raises(ResourceLimitError):
            todd_coxeter(free_abelian, max_cosets=500, strategy=strategy)


def test_hom_by_generators_examples():
    r = todd_coxeter(KLEIN)
    z2, z3 = cyclic(2), cyclic(3)
    f = hom_by_generators(r, z2, [0, 0])
    assert f is not None and set(f.image) == {0}
    f = hom_by_generators(r, z2, [1, 0])
    assert f is not None and f.is_surjective() and f.is_homomorphism()
    assert len(f.kernel()) == 2
    assert hom_by_generators(r, z3, [1, 0]) is None


def test_kernel_and_quotient_roundtrip():
    g = d4()
    ident = GroupMap(g, g, range(g.n))
    assert kernel_of(ident).members == (0,)
    for h in ([0], [0, 2], list(range(8))):
        h = normal_closure(g, h).members
        q, label = quotient_group(g, h)
        proj = GroupMap(g, q, label)
        assert proj.is_homomorphism() and kernel_of(proj).members == h


def test_normal_closure_of_reflection_in_s3():
    g = s3()
    refl = next(e for e in range(6) if g.order_of(e) == 2)
    assert len(subgroup_generated(g, [refl])) == 2
    assert not is_normal(g, subgroup_generated(g, [refl]).members)
    assert len(normal_closure(g, [refl])) == 6


def test_quotient_group_rejects_non_normal():
    g = s3()
    refl = next(e for e in range(6) if g.order_of(e) == 2)
    with pytest.raises(PreconditionError):
        quotient_group(g, [0, refl])


def test_restrict():
    g = q8()
    h = subgroup_generated(g, [1]).members
    t, elems = restrict(g, h)
    assert t.n == len(h) == 4 and elems == list(h)
    assert np.array_equal(np.sort(t.mul, axis=1), np.tile(np.arange(4), (4, 1)))
