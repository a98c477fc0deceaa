import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare

from wrcomm.errors import AddressError, SignatureError
from wrcomm.tree import (AritySignature, TreeAut, commutator, compose_from, conjugate, decompose,
                         from_levels, identity, inverse, level_index, level_profile, multiply,
                         power, random_element, section, signature, vertex_index)

from conftest import full_group

small_sigs = st.lists(st.integers(2, 5), min_size=0, max_size=4).map(tuple)


@st.composite
def elements(draw, sig=None, n=1):
    arities = sig if sig is not None else draw(small_sigs)
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    s = signature(arities)
    return tuple(random_element(s, rng) for _ in range(n))


# -- signatures -----------------------------------------------------------------

def test_signature_shape():
    s = AritySignature((2, 3, 5))
    assert s.level_sizes == (1, 2, 6)
    assert s.offsets == (0, 1, 3, 9)
    assert s.num_vertices == 9
    assert s.leaf_count == 30
    assert s.order == 2 * 3 ** 2 * 5 ** 6


@pytest.mark.parametrize("arities, order", [((2, 2), 8), ((2, 2, 2), 128), ((3, 3), 81), ((), 1)])
def test_order(arities, order):
    assert signature(arities).order == order


@pytest.mark.parametrize("bad", [(1,), (2, 0), (256,)])
def test_bad_arity(bad):
    with pytest.raises(SignatureError):
        AritySignature(bad)


def test_parse_and_str():
    s = AritySignature.parse(" 2, 3 ,2")
    assert s.arities == (2, 3, 2)
    assert AritySignature.parse(str(s)) == s
    assert AritySignature.parse("") == AritySignature(())
    with pytest.raises(SignatureError):
        AritySignature.parse("2,x")


def test_signature_is_interned():
    assert signature((2, 2)) is signature((2, 2))


# -- values -----------------------------------------------------------------------

def test_identity_layout():
    e = identity((2, 2))
    assert e.levels() == [[0], [0, 0]]
    assert e.is_identity()
    assert identity(()).labels.size == 0


def test_labels_validated_and_frozen():
    with pytest.raises(SignatureError):
        TreeAut(signature((2, 2)), [0, 2, 0])
    with pytest.raises(SignatureError):
        TreeAut(signature((2, 2)), [0, 0])
    g = from_levels((3, 2), [[1], [0, 1, 1]])
    with pytest.raises(ValueError):
        g.labels[0] = 2


def test_equality_and_hash():
    a = from_levels((2, 2), [[1], [0, 1]])
    b = from_levels((2, 2), [[1], [0, 1]])
    assert a == b and hash(a) == hash(b)
    assert a != from_levels((2, 2), [[1], [1, 1]])
    assert a != from_levels((2, 3), [[1], [0, 1]])
    assert len({a, b}) == 1


def test_root_swap_is_involution():
    g = from_levels((2,), [[1]])
    assert multiply(g, g).is_identity()


def test_inverse_of_three_cycle():
    assert inverse(from_levels((3,), [[1]])) == from_levels((3,), [[2]])


def test_involutions_are_self_inverse():
    for arities in [(2,), (2, 2)]:
        for g in full_group(arities):
            assert (inverse(g) == g) == multiply(g, g).is_identity()


def test_signature_mismatch():
    with pytest.raises(SignatureError):
        multiply(identity((2, 2)), identity((2, 3)))


# -- group laws -------------------------------------------------------------------

@given(elements(n=3))
def test_associativity(abc):
    a, b, c = abc
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@given(elements(n=1))
def test_identity_and_inverse_laws(g):
    (g,) = g
    e = identity(g.sig)
    assert multiply(e, g) == g == multiply(g, e)
    assert multiply(g, inverse(g)).is_identity()
    assert multiply(inverse(g), g).is_identity()
    assert inverse(inverse(g)) == g


@given(elements(n=2))
def test_conjugate_and_commutator_conventions(ab):
    a, b = ab
    assert conjugate(a, b) == multiply(multiply(b, a), inverse(b))
    assert commutator(a, b) == multiply(multiply(a, b), multiply(inverse(a), inverse(b)))
    assert commutator(a, a).is_identity()
    assert commutator(a, identity(a.sig)).is_identity()
    assert conjugate(a, identity(a.sig)) == a
    assert conjugate(identity(a.sig), b).is_identity()


@given(st.integers(1, 6).flatmap(lambda k: elements(sig=(2,) * k, n=2)))
def test_conjugation_preserves_level_index_parity(ab):
    a, b = ab
    assert level_profile(conjugate(a, b)).parities() == level_profile(a).parities()


def test_conjugation_can_change_exact_level_index():
    # the root swap conjugated by (e, sigma) is (sigma, sigma) sigma; checked on leaf permutations
    from wrcomm import oracle

    a = from_levels((2, 2), [[1], [0, 0]])
    b = from_levels((2, 2), [[0], [0, 1]])
    pa, pb = oracle.to_leaf_perm(a), oracle.to_leaf_perm(b)
    conj = oracle.from_leaf_perm(pb * pa * pb.inverse(), a.sig)
    assert conj == conjugate(a, b) == from_levels((2, 2), [[1], [1, 1]])
    assert level_profile(conj).counts == (1, 2) != level_profile(a).counts


def test_level_index_parity_is_additive_on_b3():
    grp = sorted(full_group((2, 2, 2)), key=TreeAut.key)
    for g in grp:
        pg = level_profile(g).parities()
        for h in grp:
            ph = level_profile(h).parities()
            assert level_profile(multiply(g, h)).parities() == tuple(x ^ y for x, y in zip(pg, ph))


@given(elements(n=1), st.integers(-7, 7))
def test_power(g, n):
    (g,) = g
    expected = identity(g.sig)
    step = g if n >= 0 else inverse(g)
    for _ in range(abs(n)):
        expected = multiply(expected, step)
    assert power(g, n) == expected
    assert g ** n == expected


# -- sections ---------------------------------------------------------------------

def test_vertex_index_is_lexicographic_rank():
    s = signature((2, 3, 2))
    assert vertex_index(s, ()) == 0
    assert vertex_index(s, (1,)) == 0
    assert vertex_index(s, (2,)) == 1
    assert vertex_index(s, (1, 3)) == 2
    assert vertex_index(s, (2, 3)) == 5
    assert vertex_index(s, (2, 3, 2)) == 11
    with pytest.raises(AddressError):
        vertex_index(s, (3,))
    with pytest.raises(AddressError):
        vertex_index(s, (1, 1, 1, 1))


def test_section_examples():
    g = from_levels((2, 2, 2), [[1], [0, 1], [1, 0, 0, 1]])
    assert section(g, ()) == g
    assert section(g, (1,)) == from_levels((2, 2), [[0], [1, 0]])
    assert section(g, (2,)) == from_levels((2, 2), [[1], [0, 1]])
    assert section(g, (2, 2)) == from_levels((2,), [[1]])
    assert section(g, (1, 2, )) == from_levels((2,), [[0]])
    assert section(identity((3, 2)), (2,)).is_identity()


def test_decompose_round_trip_on_b3():
    for g in full_group((2, 2, 2)):
        root, secs = decompose(g)
        assert secs == [section(g, (1,)), section(g, (2,))]
        assert compose_from(root, secs, 2) == g


@given(elements(n=1))
def test_decompose_round_trip(g):
    (g,) = g
    if g.depth == 0:
        with pytest.raises(SignatureError):
            decompose(g)
        return
    root, secs = decompose(g)
    assert len(secs) == g.sig.arities[0]
    assert compose_from(root, secs, g.sig.arities[0]) == g


def test_decompose_depth_one():
    assert decompose(from_levels((2,), [[1]])) == (1, [identity(())] * 2)
    assert compose_from(1, [identity(())] * 2, 2) == from_levels((2,), [[1]])


def test_compose_from_errors():
    e = identity((2,))
    with pytest.raises(SignatureError):
        compose_from(0, [e], 2)
    with pytest.raises(SignatureError):
        compose_from(2, [e, e], 2)
    with pytest.raises(SignatureError):
        compose_from(0, [e, identity((3,))], 2)


def test_level_index():
    g = from_levels((2, 2), [[1], [0, 0]])
    assert [level_index(g, l) for l in range(2)] == [1, 0]
    assert level_index(identity((2, 2)), 1) == 0
    with pytest.raises(AddressError):
        level_index(g, 2)


def test_level_profile_split():
    g = from_levels((2, 2, 2), [[0], [1, 1], [1, 0, 1, 1]])
    prof = level_profile(g)
    assert prof.counts == (0, 2, 3)
    assert prof.per_subtree == ((), (1, 1), (1, 2))


# -- random elements --------------------------------------------------------------

def test_random_element_deterministic():
    s = signature((2, 3, 2))
    assert random_element(s, 7) == random_element(s, 7)
    assert random_element((), 3).is_identity()


def test_random_element_uniform_on_b2():
    rng = np.random.default_rng(2024)
    s = signature((2, 2))
    counts: dict = {}
    for _ in range(10 ** 4):
        g = random_element(s, rng)
        counts[g] = counts.get(g, 0) + 1
    assert len(counts) == 8
    assert chisquare(list(counts.values())).pvalue > 0.001
