"""Membership, sampling and generators for Sylow 2-subgroups and their derived subgroups.

``B_k`` is the binary tree group of depth ``k`` (the Sylow 2-subgroup of the
symmetric group on ``2**k`` points) and ``G_k`` its index-2 subgroup of
elements acting evenly on the leaves (the Sylow 2-subgroup of the alternating
group).  Arbitrary signatures give iterated wreath products of cyclic groups.

Every binary predicate is computed two independent ways, and the results must
agree.  A disagreement raises :class:`~wrcomm.errors.InvariantViolation`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from wrcomm import _backend
from wrcomm.errors import InvariantViolation, SignatureError
from wrcomm.tree import (AritySignature, TreeAut, compose_from, decompose, identity, inverse,
                         level_profile, multiply, random_element, signature)


class GroupKind(enum.Enum):
    FULL_WREATH = "wreath"
    SYLOW_ALT = "sylow-a"
    DERIVED_FULL_WREATH = "derived-wreath"
    DERIVED_SYLOW_ALT = "derived-sylow-a"

    @property
    def is_derived(self) -> bool:
        return self in (GroupKind.DERIVED_FULL_WREATH, GroupKind.DERIVED_SYLOW_ALT)

    @property
    def is_sylow_alt(self) -> bool:
        return self in (GroupKind.SYLOW_ALT, GroupKind.DERIVED_SYLOW_ALT)


@dataclass(frozen=True)
class GroupId:
    kind: GroupKind
    signature: AritySignature

    def __post_init__(self) -> None:
        if self.kind.is_sylow_alt and not self.signature.is_binary:
            raise SignatureError(f"{self.kind.value} needs an all-2 signature, got ({self.signature})")

    @classmethod
    def binary(cls, kind: GroupKind, depth: int) -> "GroupId":
        return cls(kind, signature((2,) * depth))

    def contains(self, g: TreeAut) -> bool:
        if g.sig != self.signature:
            return False
        return _MEMBERSHIP[self.kind](g)

    def order(self) -> int:
        """Order from the counting formulas (the oracle checks these independently)."""
        sig = self.signature
        k = sig.depth
        if self.kind is GroupKind.FULL_WREATH:
            return sig.order
        if self.kind is GroupKind.DERIVED_FULL_WREATH:
            return sig.order // math.prod(sig.arities)
        if k <= 1:
            return 1
        if self.kind is GroupKind.SYLOW_ALT:
            return sig.order // 2
        # even weight on every level above the bottom, even weight per half on the bottom
        exp = sum(2 ** l - 1 for l in range(k - 1)) + 2 ** (k - 1) - 2
        return 2 ** exp


def _require_binary(g: TreeAut) -> None:
    if not g.sig.is_binary:
        raise SignatureError(f"binary signature required, got ({g.sig})")


def _level_counts(g: TreeAut) -> list[int]:
    sig = g.sig
    return [int(np.count_nonzero(g.labels[sig.offsets[l]:sig.offsets[l + 1]]))
            for l in range(sig.depth)]


# -- G_k -------------------------------------------------------------------

def gk_by_sections(g: TreeAut) -> bool:
    """``(g_1, g_2) sigma**i`` is in ``G_k`` iff ``g_1 g_2`` is in ``G_{k-1}``; ``G_1`` is trivial."""
    # same recursion as decompose + multiply, on bare label arrays to skip per-level wrappers
    labels = g.labels
    for d in range(g.sig.depth, 1, -1):
        g1, g2 = np.concatenate([labels[2 ** l - 1:2 ** (l + 1) - 1].reshape(2, -1)
                                 for l in range(1, d)], axis=1)
        labels = np.empty(2 ** (d - 1) - 1, dtype=np.uint8)
        _backend.kernels.multiply(g1, g2, signature((2,) * (d - 1)).arities_array, labels)
    return labels.size == 0 or labels[0] == 0


def gk_by_bottom_parity(g: TreeAut) -> bool:
    """Even number of active vertices on the deepest labelled level."""
    k = g.sig.depth
    return k == 0 or int(np.count_nonzero(g.level(k - 1))) % 2 == 0


def is_in_Gk(g: TreeAut) -> bool:
    _require_binary(g)
    a = gk_by_sections(g)
    b = gk_by_bottom_parity(g)
    if a != b:
        raise InvariantViolation(f"G_k criteria disagree on {g!r}: sections={a}, parity={b}")
    return a


# -- B_k' ------------------------------------------------------------------

def is_in_Bk_derived(g: TreeAut) -> bool:
    """Even number of active vertices on every level."""
    _require_binary(g)
    return all(c % 2 == 0 for c in _level_counts(g))


# -- G_k' ------------------------------------------------------------------

def gk_derived_by_levels(g: TreeAut) -> bool:
    """Even index on every level above the bottom, and on the bottom within each level-1 subtree."""
    k = g.sig.depth
    if k == 0:
        return True
    if not is_in_Gk(g):
        return False
    prof = level_profile(g)
    if any(c % 2 for c in prof.counts[:k - 1]):
        return False
    return k < 2 or all(c % 2 == 0 for c in prof.per_subtree[k - 1])


def gk_derived_by_sections(g: TreeAut, require_trivial_root: bool = True) -> bool:
    """``(g_1, g_2) sigma**i`` with ``g_1, g_2`` in ``G_{k-1}`` and ``g_1 g_2`` in ``B_{k-1}'``.

    With ``require_trivial_root=False`` the root label is ignored; that reading
    admits elements outside ``G_k'`` (any such element has root label 1).
    """
    k = g.sig.depth
    if k == 0:
        return True
    root, (g1, g2) = decompose(g)
    if require_trivial_root and root != 0:
        return False
    return is_in_Gk(g1) and is_in_Gk(g2) and is_in_Bk_derived(multiply(g1, g2))


def is_in_Gk_derived(g: TreeAut) -> bool:
    _require_binary(g)
    a = gk_derived_by_levels(g)
    b = gk_derived_by_sections(g)
    if a != b:
        raise InvariantViolation(f"G_k' criteria disagree on {g!r}: levels={a}, sections={b}")
    return a


# -- general cyclic towers ----------------------------------------------------

def ordered_section_product(sections: list[TreeAut]) -> TreeAut:
    """``r_{p-1} ... r_2 r_1 r_p`` for sections ``r_1, ..., r_p``."""
    head = sections[:-1]
    x = sections[-1]
    for r in head:
        x = multiply(r, x)
    return x


def wreath_derived_failure(w: TreeAut) -> str | None:
    """Why ``w`` is not in the derived subgroup, or ``None`` if it is."""
    nest = 0
    while True:
        d = w.sig.depth
        if d == 0:
            return None
        if w.labels[0] != 0:
            return f"nonzero root label {int(w.labels[0])} (after {nest} section-product step(s))"
        if d == 1:
            return None
        _, secs = decompose(w)
        w = ordered_section_product(secs)
        nest += 1


def is_in_wreath_derived(w: TreeAut) -> bool:
    """Trivial root label, and the ordered product of the level-1 sections is again derived."""
    return wreath_derived_failure(w) is None


_MEMBERSHIP: dict[GroupKind, Callable[[TreeAut], bool]] = {
    GroupKind.FULL_WREATH: lambda g: True,
    GroupKind.SYLOW_ALT: is_in_Gk,
    GroupKind.DERIVED_FULL_WREATH: is_in_wreath_derived,
    GroupKind.DERIVED_SYLOW_ALT: is_in_Gk_derived,
}


def criteria_report(gid: GroupId, g: TreeAut) -> dict[str, bool]:
    """Verdict of every criterion applicable to ``gid``, computed separately."""
    if g.sig != gid.signature:
        raise SignatureError(f"element has signature ({g.sig}), group has ({gid.signature})")
    kind = gid.kind
    if kind is GroupKind.FULL_WREATH:
        return {"signature": True}
    if kind is GroupKind.SYLOW_ALT:
        return {"section recursion": gk_by_sections(g), "bottom-level parity": gk_by_bottom_parity(g)}
    if kind is GroupKind.DERIVED_FULL_WREATH:
        out = {"section product": is_in_wreath_derived(g)}
        if g.sig.is_binary:
            out["level parity"] = all(c % 2 == 0 for c in _level_counts(g))
        return out
    return {"level/subtree parity": gk_derived_by_levels(g),
            "section criterion": gk_derived_by_sections(g)}


# -- sampling ----------------------------------------------------------------

def _even_weight_bits(rng: np.random.Generator, n: int) -> np.ndarray:
    bits = rng.integers(0, 2, size=n, dtype=np.uint8)
    bits[-1] = int(bits[:-1].sum()) & 1
    return bits


def _sample_wreath_derived(sig: AritySignature, rng: np.random.Generator) -> TreeAut:
    if sig.depth <= 1:
        return identity(sig)
    p = sig.arities[0]
    sub = sig.truncated(1)
    rs = [random_element(sub, rng) for _ in range(p - 1)]
    x = _sample_wreath_derived(sub, rng)
    prod = identity(sub)
    for r in rs:
        prod = multiply(r, prod)
    return compose_from(0, rs + [multiply(inverse(prod), x)], p)


def sample_derived(gid: GroupId, seed: int | np.random.Generator | None = None) -> TreeAut:
    """Uniform random element of a derived subgroup."""
    rng = np.random.default_rng(seed)
    sig = gid.signature
    k = sig.depth
    if gid.kind is GroupKind.DERIVED_FULL_WREATH:
        if not sig.is_binary:
            return _sample_wreath_derived(sig, rng)
        levels = [_even_weight_bits(rng, n) for n in sig.level_sizes]
    elif gid.kind is GroupKind.DERIVED_SYLOW_ALT:
        if k <= 1:
            return identity(sig)
        levels = [_even_weight_bits(rng, n) for n in sig.level_sizes[:-1]]
        half = sig.level_sizes[-1] // 2
        levels.append(np.concatenate([_even_weight_bits(rng, half), _even_weight_bits(rng, half)]))
    else:
        raise ValueError(f"sample_derived needs a derived kind, got {gid.kind.value}")
    labels = np.concatenate(levels) if levels else np.zeros(0, np.uint8)
    return TreeAut(sig, labels, _trusted=True)


def sample_element(gid: GroupId, seed: int | np.random.Generator | None = None) -> TreeAut:
    """Uniform random element of any supported group."""
    if gid.kind.is_derived:
        return sample_derived(gid, seed)
    g = random_element(gid.signature, seed)
    if gid.kind is GroupKind.SYLOW_ALT and not gk_by_bottom_parity(g):
        # toggling one bottom label is a 2-to-1 map from B_k onto G_k
        labels = g.labels.copy()
        labels[gid.signature.offsets[-2]] ^= 1
        g = TreeAut(gid.signature, labels, _trusted=True)
    return g


# -- generators --------------------------------------------------------------

def _single_level(sig: AritySignature, l: int, positions: tuple[int, ...]) -> TreeAut:
    labels = np.zeros(sig.num_vertices, dtype=np.uint8)
    for j in positions:
        labels[sig.offsets[l] + j] = 1
    return TreeAut(sig, labels, _trusted=True)


def standard_generators(gid: GroupId) -> list[TreeAut]:
    """One generator per level, active only at the leftmost vertex of that level.

    For the Sylow-alternating group the bottom generator is replaced by one
    activating the leftmost bottom vertex of each level-1 subtree, which is an
    even leaf permutation.  ``G_1`` is trivial and gets no generators.
    """
    sig = gid.signature
    k = sig.depth
    if gid.kind is GroupKind.FULL_WREATH:
        return [_single_level(sig, l, (0,)) for l in range(k)]
    if gid.kind is GroupKind.SYLOW_ALT:
        if k <= 1:
            return []
        gens = [_single_level(sig, l, (0,)) for l in range(k - 1)]
        gens.append(_single_level(sig, k - 1, (0, sig.level_sizes[-1] // 2)))
        return gens
    raise ValueError(f"standard_generators needs a non-derived kind, got {gid.kind.value}")
