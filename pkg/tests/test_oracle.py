import itertools

import numpy as np
import pytest

from wrcomm import oracle
from wrcomm.errors import GuardExceeded, ParseError, SignatureError
from wrcomm.groups import (GroupId, GroupKind, is_in_Bk_derived, is_in_Gk, is_in_Gk_derived,
                           standard_generators)
from wrcomm.oracle import LeafPermutation, parse_cycles, permutation_parity, to_leaf_perm
from wrcomm.tree import TreeAut, commutator, from_levels, identity, multiply, random_element, signature

from conftest import derived_closure, full_group, sylow_alt_group


def _cycles(perms):
    return {p.cycle_notation(sep="") for p in perms}


# -- leaf permutations ----------------------------------------------------------

def test_identity_and_single_swap():
    assert to_leaf_perm(identity((2, 2))).is_identity()
    assert to_leaf_perm(from_levels((2,), [[1]])).cycle_notation() == "(1 2)"


def test_root_swap_at_depth_two_uses_lexicographic_leaves():
    assert to_leaf_perm(from_levels((2, 2), [[1], [0, 0]])).cycle_notation() == "(1 3)(2 4)"
    assert to_leaf_perm(from_levels((2, 2), [[0], [0, 1]])).cycle_notation() == "(3 4)"


def test_sigma_shifts_children_forward():
    assert to_leaf_perm(from_levels((3,), [[1]])).cycle_notation() == "(1 2 3)"
    assert to_leaf_perm(from_levels((3,), [[2]])).cycle_notation() == "(1 3 2)"


@pytest.mark.parametrize("arities", [(2, 2), (2, 2, 2), (3, 3)])
def test_homomorphism_exhaustive(arities):
    grp = sorted(full_group(arities), key=TreeAut.key)
    perms = {g: to_leaf_perm(g) for g in grp}
    for g, h in itertools.product(grp, repeat=2):
        assert to_leaf_perm(multiply(g, h)) == perms[g] * perms[h]


@pytest.mark.parametrize("arities", [(2,) * 5, (3, 3)])
def test_homomorphism_sampled(arities):
    rng = np.random.default_rng(5)
    sig = signature(arities)
    for _ in range(1000):
        g, h = random_element(sig, rng), random_element(sig, rng)
        assert to_leaf_perm(multiply(g, h)) == to_leaf_perm(g) * to_leaf_perm(h)


def test_leaf_permutation_round_trip():
    for arities in [(2, 2, 2), (3, 2), (2, 3)]:
        for g in full_group(arities):
            assert oracle.from_leaf_perm(to_leaf_perm(g), g.sig) == g


def test_from_leaf_perm_rejects_non_tree_permutation():
    with pytest.raises(SignatureError):
        oracle.from_leaf_perm((0, 2, 1, 3, 4, 5, 6, 7), signature((2, 2, 2)))
    with pytest.raises(SignatureError):
        oracle.from_leaf_perm((0, 2, 1, 3), signature((2, 2)))


def test_parity():
    assert permutation_parity(tuple(range(5))) == "even"
    assert permutation_parity((1, 0, 2)) == "odd"
    assert LeafPermutation((1, 2, 0)).parity() == "even"


def test_parity_matches_gk_on_b3():
    for g in full_group((2, 2, 2)):
        assert (to_leaf_perm(g).parity() == "even") == is_in_Gk(g)


# -- cycle notation -----------------------------------------------------------------

@pytest.mark.parametrize("text", ["(13)(24)", "(1 3)(2 4)", "(1,3) (2,4)", " (3 1)(4 2) "])
def test_parse_cycles_forms(text):
    assert parse_cycles(text, 4) == LeafPermutation((2, 3, 0, 1))


def test_parse_cycles_identity_and_longer():
    assert parse_cycles("e", 3).is_identity()
    assert parse_cycles("()", 3).is_identity()
    assert parse_cycles("(1 2 3)", 3).cycle_notation() == "(1 2 3)"
    assert parse_cycles("(10 11)", 12).images[9] == 10


@pytest.mark.parametrize("text, offset", [("(1 2", 0), ("(12)x", 4), ("(19)", 1), ("(12)(23)", 0)])
def test_parse_cycles_errors(text, offset):
    with pytest.raises(ParseError) as exc:
        parse_cycles(text, 4)
    assert exc.value.offset == offset


def test_listed_a8_permutations_parse():
    perms = {parse_cycles(c, 8) for c in oracle.A8_SYLOW_DERIVED_CYCLES}
    assert len(perms) == 8
    assert all(p.parity() == "even" for p in perms)


# -- enumeration and closures ---------------------------------------------------

@pytest.mark.parametrize("gid, order", [
    (GroupId(GroupKind.FULL_WREATH, signature((2, 2))), 8),
    (GroupId.binary(GroupKind.SYLOW_ALT, 3), 64),
    (GroupId(GroupKind.FULL_WREATH, signature((3, 3))), 81),
    (GroupId(GroupKind.FULL_WREATH, signature((3, 2))), 24),
])
def test_enumerate_group(gid, order):
    grp = oracle.enumerate_group(gid)
    assert len(grp) == order == gid.order()


def test_enumerate_refuses_over_guard(monkeypatch):
    with pytest.raises(GuardExceeded):
        oracle.enumerate_group(GroupId.binary(GroupKind.FULL_WREATH, 3), guard=100)
    monkeypatch.setenv("WRCOMM_GUARD", "50")
    assert oracle.guard_limit() == 50
    with pytest.raises(GuardExceeded):
        oracle.enumerate_group(GroupId(GroupKind.FULL_WREATH, signature((3, 3))))
    assert oracle.guard_limit(7) == 7


def test_enumerate_rejects_derived_kind():
    with pytest.raises(ValueError):
        oracle.enumerate_group(GroupId.binary(GroupKind.DERIVED_FULL_WREATH, 2))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_sylow_alt_is_even_part_of_bk(k):
    even = frozenset(g for g in full_group((2,) * k) if to_leaf_perm(g).parity() == "even")
    assert sylow_alt_group(k) == even


@pytest.mark.parametrize("kind", [GroupKind.FULL_WREATH, GroupKind.SYLOW_ALT])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_standard_generators_generate(kind, k):
    gid = GroupId.binary(kind, k)
    gens = standard_generators(gid)
    assert all(gid.contains(g) for g in gens)
    assert len(oracle.generated_subgroup(gens, gid.signature)) == gid.order()


@pytest.mark.parametrize("arities", [(2,), (3,), (5,), (3, 2), (2, 3), (3, 3), (2, 2, 3)])
def test_standard_generators_general(arities):
    gid = GroupId(GroupKind.FULL_WREATH, signature(arities))
    assert len(oracle.generated_subgroup(standard_generators(gid), gid.signature)) == gid.order()


def test_abelian_generators_have_trivial_derived_subgroup():
    gens = [from_levels((2, 2), [[0], [1, 0]]), from_levels((2, 2), [[0], [0, 1]])]
    assert oracle.derived_subgroup_closure(gens) == {identity((2, 2))}


def test_b2_derived_order_two():
    d = derived_closure(GroupKind.FULL_WREATH, (2, 2))
    assert d == {identity((2, 2)), from_levels((2, 2), [[0], [1, 1]])}


def test_g3_derived_is_the_listed_set():
    d = derived_closure(GroupKind.SYLOW_ALT, (2, 2, 2))
    assert {to_leaf_perm(g) for g in d} == {parse_cycles(c, 8) for c in oracle.A8_SYLOW_DERIVED_CYCLES}


@pytest.mark.parametrize("k", [2, 3, 4])
def test_derived_closure_matches_criteria(k):
    bd = derived_closure(GroupKind.FULL_WREATH, (2,) * k)
    assert bd == frozenset(g for g in full_group((2,) * k) if is_in_Bk_derived(g))
    gd = derived_closure(GroupKind.SYLOW_ALT, (2,) * k)
    assert gd == frozenset(g for g in sylow_alt_group(k) if is_in_Gk_derived(g))


def test_commutator_set_small_cases():
    e = identity((2, 2))
    assert oracle.commutator_set({e}) == {e}
    assert oracle.commutator_set(full_group((2, 2))) == derived_closure(GroupKind.FULL_WREATH, (2, 2))
    g3 = sylow_alt_group(3)
    assert oracle.commutator_set(g3) == derived_closure(GroupKind.SYLOW_ALT, (2, 2, 2))


def test_commutator_set_matches_portrait_commutators():
    grp = full_group((2, 2))
    assert oracle.commutator_set(grp) == {commutator(a, b) for a in grp for b in grp}


def test_commutator_set_cap():
    with pytest.raises(GuardExceeded):
        oracle.commutator_set(full_group((2, 2, 2)), pair_cap=1000)


def test_second_derived():
    assert oracle.second_derived(derived_closure(GroupKind.SYLOW_ALT, (2, 2))) == {identity((2, 2))}
    b3dd = oracle.second_derived(derived_closure(GroupKind.FULL_WREATH, (2, 2, 2)))
    for g in b3dd:
        s = g.level(2)
        assert s[0] == s[1] and s[2] == s[3]
    assert 1 < len(b3dd) < 16
