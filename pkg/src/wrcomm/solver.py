"""Write any derived-subgroup element as a single commutator.

For ``w = (r_1, ..., r_{p-1}, r_p)`` in the derived subgroup of ``B wr C_p``
with ``r_{p-1} ... r_1 r_p = x = [f, g]``, the pair

    a = (e, ..., e, g^(a_{2,p}^-1)) sigma,   b = (a_{2,1}, ..., a_{2,p})
    a_{2,1} = (f^-1)^((r_{p-1} ... r_1)^-1),  a_{2,i} = r_{i-1} a_{2,i-1}

satisfies ``[a, b] = w`` (conventions of :mod:`wrcomm.tree`: ``x^y = y x y^-1``,
``[x, y] = x y x^-1 y^-1``).  ``x`` lies one level down, so recursing on it
reaches the abelian depth-1 group, where ``x`` is trivial.

Every witness is multiplied back out before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass

from wrcomm.errors import InvariantViolation, NotInSubgroupError, SignatureError
from wrcomm.groups import (is_in_Bk_derived, is_in_Gk, is_in_Gk_derived, ordered_section_product,
                           wreath_derived_failure)
from wrcomm.tree import (TreeAut, commutator, compose_from, conjugate, decompose, identity,
                         inverse, level_profile, multiply)


@dataclass(frozen=True)
class CommutatorWitness:
    """A pair with ``commutator(a, b) == target``.

    The flags say whether ``a``/``b`` lie in the Sylow-alternating subgroup;
    they are ``None`` for non-binary signatures.  ``recursion_depth`` counts
    the lifting steps used to build the pair.
    """

    a: TreeAut
    b: TreeAut
    target: TreeAut
    a_in_sylow_alt: bool | None
    b_in_sylow_alt: bool | None
    recursion_depth: int

    def verify(self) -> bool:
        return commutator(self.a, self.b) == self.target


def _witness(a: TreeAut, b: TreeAut, target: TreeAut, depth: int) -> CommutatorWitness:
    if commutator(a, b) != target:
        raise InvariantViolation(
            f"witness does not multiply back to its target (target {target!r}, a {a!r}, b {b!r})")
    binary = target.sig.is_binary
    return CommutatorWitness(a, b, target,
                             is_in_Gk(a) if binary else None,
                             is_in_Gk(b) if binary else None,
                             depth)


def derived_decompose(w: TreeAut) -> tuple[list[TreeAut], TreeAut]:
    """Split ``w`` into its first ``p-1`` level-1 sections and ``x = r_{p-1} ... r_1 r_p``."""
    reason = wreath_derived_failure(w)
    if reason is not None:
        raise NotInSubgroupError("element is not in the derived subgroup", reason)
    if w.sig.depth == 0:
        raise SignatureError("depth-0 element has no sections")
    _, secs = decompose(w)
    return secs[:-1], ordered_section_product(secs)


def _lift(r: list[TreeAut], f: TreeAut, g: TreeAut) -> tuple[TreeAut, TreeAut]:
    sub = f.sig
    p = len(r) + 1
    r_prod = identity(sub)  # r_{p-1} ... r_1
    for ri in r:
        r_prod = multiply(ri, r_prod)
    col = [conjugate(inverse(f), inverse(r_prod))]
    for ri in r:
        col.append(multiply(ri, col[-1]))
    top = [identity(sub)] * (p - 1) + [conjugate(g, inverse(col[-1]))]
    return compose_from(1, top, p), compose_from(0, col, p)


def lift_commutator(r: list[TreeAut], f: TreeAut, g: TreeAut,
                    recursion_depth: int = 1) -> CommutatorWitness:
    """Witness for ``(r_1, ..., r_{p-1}, r_1^-1 ... r_{p-1}^-1 [f, g])``.

    ``a`` gets root label 1 and ``b`` root label 0.
    """
    if not r:
        raise SignatureError("need at least one section (arity >= 2)")
    for x in list(r) + [g]:
        if x.sig != f.sig:
            raise SignatureError("sections and commutator pair must share a signature")
    p = len(r) + 1
    r_inv_prod = identity(f.sig)  # r_1^-1 ... r_{p-1}^-1
    for ri in r:
        r_inv_prod = multiply(r_inv_prod, inverse(ri))
    target = compose_from(0, list(r) + [multiply(r_inv_prod, commutator(f, g))], p)
    a, b = _lift(list(r), f, g)
    return _witness(a, b, target, recursion_depth)


def _trivial(w: TreeAut) -> CommutatorWitness:
    e = identity(w.sig)
    return _witness(e, e, w, 0)


# -- arbitrary cyclic towers -------------------------------------------------

def _solve_tower(w: TreeAut) -> tuple[TreeAut, TreeAut, int]:
    if w.is_identity():
        e = identity(w.sig)
        return e, e, 0
    if w.sig.depth <= 1:
        raise NotInSubgroupError("corrupted input", "nontrivial element in an abelian depth-1 group")
    r, x = derived_decompose(w)
    f, g, d = _solve_tower(x)
    a, b = _lift(r, f, g)
    return a, b, d + 1


def solve_cyclic_tower(w: TreeAut) -> CommutatorWitness:
    """Single-commutator witness for any element of the derived subgroup."""
    if w.sig.depth < 1:
        raise SignatureError("depth must be at least 1")
    reason = wreath_derived_failure(w)
    if reason is not None:
        raise NotInSubgroupError("element is not in the derived subgroup", reason)
    a, b, d = _solve_tower(w)
    return _witness(a, b, w, d)


# -- binary trees with Sylow-alternating constraints -------------------------

def _solve_b(w: TreeAut) -> tuple[TreeAut, TreeAut, int]:
    # returns (a, b, depth) with [a, b] = w and a in G_k
    if w.is_identity():
        e = identity(w.sig)
        return e, e, 0
    (r1,), x = derived_decompose(w)
    f, g, d = _second_slot_in_g(x)
    a, b = _lift([r1], f, g)
    return a, b, d + 1


def _second_slot_in_g(x: TreeAut) -> tuple[TreeAut, TreeAut, int]:
    # [a, b] = [b^-1, a^b]; a in G stays in G under conjugation (G is normal)
    a, b, d = _solve_b(x)
    return inverse(b), conjugate(a, b), d


def _check_flags(wit: CommutatorWitness, need_a: bool, need_b: bool) -> CommutatorWitness:
    if (need_a and not wit.a_in_sylow_alt) or (need_b and not wit.b_in_sylow_alt):
        raise InvariantViolation(
            f"witness left the Sylow-alternating subgroup (a: {wit.a_in_sylow_alt}, "
            f"b: {wit.b_in_sylow_alt}) for target {wit.target!r}")
    return wit


def _bk_reason(w: TreeAut) -> str:
    counts = level_profile(w).counts
    odd = [l for l, c in enumerate(counts) if c % 2]
    return f"odd index {counts[odd[0]]} on level {odd[0]}" if odd else ""


def solve_Bk_derived(w: TreeAut) -> CommutatorWitness:
    """Witness for ``w`` in ``B_k'`` with ``a`` in ``G_k``."""
    if not w.sig.is_binary:
        raise SignatureError(f"binary signature required, got ({w.sig})")
    if not is_in_Bk_derived(w):
        raise NotInSubgroupError("element is not in B_k'", _bk_reason(w))
    a, b, d = _solve_b(w)
    return _check_flags(_witness(a, b, w, d), True, False)


def solve_Gk_derived(w: TreeAut) -> CommutatorWitness:
    """Witness for ``w`` in ``G_k'`` with both ``a`` and ``b`` in ``G_k``."""
    if not w.sig.is_binary:
        raise SignatureError(f"binary signature required, got ({w.sig})")
    if not is_in_Gk_derived(w):
        reason = _bk_reason(w) or "bottom-level index odd inside a level-1 subtree"
        if w.sig.depth and w.labels[0]:
            reason = "nonzero root label"
        raise NotInSubgroupError("element is not in G_k'", reason)
    if w.is_identity():
        return _check_flags(_trivial(w), True, True)
    (r1,), x = derived_decompose(w)
    f, g, d = _second_slot_in_g(x)
    a, b = _lift([r1], f, g)
    return _check_flags(_witness(a, b, w, d + 1), True, True)


def solve(w: TreeAut) -> CommutatorWitness:
    """Dispatch: binary signatures get the ``a in G_k`` witness, others the plain tower solve."""
    if w.sig.is_binary and w.sig.depth >= 1:
        return solve_Bk_derived(w)
    return solve_cyclic_tower(w)


__all__ = ["CommutatorWitness", "derived_decompose", "lift_commutator", "solve",
           "solve_Bk_derived", "solve_Gk_derived", "solve_cyclic_tower"]
