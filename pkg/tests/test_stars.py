import itertools

import numpy as np
import pytest

from conftest import literal_axiom_failures, mod_table, s3
from multlie.core import FiniteMLA, commutator_structure, iso_search, validate_mla
from multlie.corpus import mla_corpus
from multlie.errors import ResourceLimitError
from multlie.library import cyclic
from multlie.stars import dedup_isomorphic, enumerate_stars, star_from_generators


def brute_force_stars(t):
    """All antisymmetric tables with a trivial identity row that pass the
    literal axiom check."""
    n = t.n
    pairs = [(i, j) for i in range(1, n) for j in range(i + 1, n)]
    out = []
    for vals in itertools.product(range(n), repeat=len(pairs)):
        S = np.zeros((n, n), dtype=np.int64)
        for (i, j), v in zip(pairs, vals):
            S[i, j] = v
            S[j, i] = t.inv[v]
        m = FiniteMLA(t, S)
        if not literal_axiom_failures(m):
            out.append(S)
    return out


def keyset(tables):
    return {t.tobytes() for t in tables}


@pytest.mark.parametrize("moduli", [(2,), (3,), (4,), (2, 2)])
def test_matches_brute_force(moduli):
    t = mod_table(*moduli)
    got = enumerate_stars(t)
    assert keyset(m.star for m in got) == keyset(brute_force_stars(t))


def test_small_counts():
    assert len(enumerate_stars(mod_table(2))) == 1
    assert len(enumerate_stars(mod_table(3))) == 1
    assert len(enumerate_stars(mod_table(4))) == 1  # one generator, nothing to choose
    assert len(enumerate_stars(mod_table(2, 2))) == 4


def test_elementary_abelian_rank3_against_lie_algebras():
    """On an elementary abelian 2-group the axioms say the star is an
    alternating bilinear map satisfying Jacobi, i.e. a Lie bracket over F2."""
    t = mod_table(2, 2, 2)
    # element index = 4a + 2b + c for coordinates (a, b, c)
    vec = [np.array([(x >> 2) & 1, (x >> 1) & 1, x & 1]) for x in range(8)]

    def idx(v):
        v = v % 2
        return int(4 * v[0] + 2 * v[1] + v[2])

    expected = 0
    for vals in itertools.product(range(8), repeat=3):
        br = {(0, 1): vals[0], (0, 2): vals[1], (1, 2): vals[2]}

        def bracket(x, y):
            total = np.zeros(3, dtype=np.int64)
            for i in range(3):
                for j in range(3):
                    if i != j and vec[x][i] and vec[y][j]:
                        total += vec[br[min(i, j), max(i, j)]]
            return idx(total)

        S = np.array([[bracket(x, y) for y in range(8)] for x in range(8)], dtype=np.int64)
        if literal_axiom_failures(FiniteMLA(t, S)) == []:
            expected += 1
    assert expected == 120
    assert len(enumerate_stars(t)) == expected


def test_commutator_structure_enumerated():
    t = s3()
    found = enumerate_stars(t)
    target = commutator_structure(t)
    assert any(np.array_equal(m.star, target.star) for m in found)


def test_outputs_validate():
    for t in (s3(), mod_table(2, 4), mod_table(2, 2)):
        for m in enumerate_stars(t):
            assert validate_mla(m).valid


def test_dedup_classes_distinct():
    found = enumerate_stars(mod_table(2, 4))
    reps = dedup_isomorphic(found)
    assert reps == enumerate_stars(mod_table(2, 4), dedup=True)
    for a, b in itertools.combinations(reps, 2):
        assert iso_search(a, b) is None
    for m in found:
        assert any(iso_search(m, r) is not None for r in reps)


def test_corpus_counts():
    assert len(mla_corpus(8, dedup=False)) == 145
    assert len(mla_corpus(8, dedup=True)) == 29


def test_star_from_generators_roundtrip():
    m = commutator_structure(s3())
    gens = list(m.group.generating_sequence)
    values = [[int(m.star[a, b]) for b in gens] for a in gens]
    S, members = star_from_generators(m.group, gens, values)
    assert sorted(members) == list(range(6))
    assert np.array_equal(S, m.star)


def test_cap():
    with pytest.raises(ResourceLimitError):
        enumerate_stars(cyclic(17))
