"""Rooted-tree automorphisms of finite depth, stored as portraits.

A portrait assigns to every vertex ``v`` on level ``l`` (root = level 0) a label
``e`` in ``Z_{p_{l+1}}``, meaning the vertex permutation ``sigma**e`` where
``sigma(i) = i + 1 (mod p)`` on the children of ``v``.  Labels are kept for
every vertex, active or not, in one flat level-major array; within a level,
vertices are ordered lexicographically by address.

Products follow the wreath recursion

    g * h = (g|1 h|sigma_g(1), ..., g|d h|sigma_g(d)) sigma_g sigma_h

which is composition "apply ``g`` first".  Conjugation and commutator use

    conjugate(a, b) = b a b^-1        commutator(a, b) = a b a^-1 b^-1

Most computer algebra systems use different conventions for both; every
formula in :mod:`wrcomm.solver` depends on these.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from wrcomm import _backend
from wrcomm.errors import AddressError, SignatureError

MAX_ARITY = 255


@dataclass(frozen=True)
class AritySignature:
    """The arities ``(p_1, ..., p_k)`` of an iterated wreath product of cyclic groups.

    Level ``l`` has ``p_1 * ... * p_l`` vertices, each labelled in ``Z_{p_{l+1}}``.
    """

    arities: tuple[int, ...]
    level_sizes: tuple[int, ...] = field(init=False, repr=False, compare=False)
    offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)
    arities_array: np.ndarray = field(init=False, repr=False, compare=False)
    vertex_arity: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ar = tuple(int(p) for p in self.arities)
        for p in ar:
            if not 2 <= p <= MAX_ARITY:
                raise SignatureError(f"arity {p} outside [2, {MAX_ARITY}]")
        sizes, offsets, n, off = [], [0], 1, 0
        for p in ar:
            sizes.append(n)
            off += n
            offsets.append(off)
            n *= p
        object.__setattr__(self, "arities", ar)
        object.__setattr__(self, "level_sizes", tuple(sizes))
        object.__setattr__(self, "offsets", tuple(offsets))
        a = np.array(ar, dtype=np.intp)
        a.flags.writeable = False
        object.__setattr__(self, "arities_array", a)
        va = np.repeat(np.array(ar, dtype=np.uint8), sizes) if ar else np.zeros(0, np.uint8)
        va.flags.writeable = False
        object.__setattr__(self, "vertex_arity", va)

    @classmethod
    def binary(cls, depth: int) -> "AritySignature":
        return signature((2,) * depth)

    @classmethod
    def parse(cls, text: str) -> "AritySignature":
        """Read ``"2,2,2"`` (spaces allowed; empty string is depth 0)."""
        text = text.strip()
        if not text:
            return signature(())
        try:
            return signature(tuple(int(t) for t in text.split(",")))
        except ValueError as exc:
            if isinstance(exc, SignatureError):
                raise
            raise SignatureError(f"bad signature {text!r}") from None

    @property
    def depth(self) -> int:
        return len(self.arities)

    @property
    def num_vertices(self) -> int:
        """Number of labelled (non-leaf) vertices."""
        return self.offsets[-1]

    @property
    def leaf_count(self) -> int:
        return math.prod(self.arities)

    @property
    def order(self) -> int:
        return math.prod(p ** n for p, n in zip(self.arities, self.level_sizes))

    @property
    def is_binary(self) -> bool:
        return all(p == 2 for p in self.arities)

    def truncated(self, levels: int = 1) -> "AritySignature":
        """Signature of the subtree hanging below a vertex on level ``levels``."""
        return signature(self.arities[levels:])

    def __str__(self) -> str:
        return ",".join(map(str, self.arities))


@functools.lru_cache(maxsize=None)
def signature(arities: tuple[int, ...]) -> AritySignature:
    """Interned constructor; prefer it to ``AritySignature(...)`` in hot paths."""
    return AritySignature(tuple(arities))


def _as_signature(sig: AritySignature | Sequence[int]) -> AritySignature:
    if isinstance(sig, AritySignature):
        return sig
    return signature(tuple(sig))


class TreeAut:
    """An immutable portrait.  Two portraits are equal iff signatures and labels agree."""

    __slots__ = ("sig", "labels", "_hash")

    def __init__(self, sig: AritySignature | Sequence[int], labels: Iterable[int] | np.ndarray,
                 *, _trusted: bool = False):
        sig = _as_signature(sig)
        if _trusted:
            arr = labels
        else:
            raw = np.asarray(labels if isinstance(labels, np.ndarray) else list(labels))
            if raw.shape != (sig.num_vertices,):
                raise SignatureError(
                    f"expected {sig.num_vertices} labels for signature ({sig}), got shape {raw.shape}")
            if raw.size and (raw.dtype.kind not in "iu" or raw.min() < 0 or
                             (raw >= sig.vertex_arity).any()):
                bad = int(np.argmax((raw < 0) | (raw >= sig.vertex_arity)))
                raise SignatureError(f"label {raw[bad]} at flat position {bad} out of range")
            arr = np.array(raw, dtype=np.uint8)
        arr.flags.writeable = False
        self.sig = sig
        self.labels = arr
        self._hash = None

    # -- value semantics -------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeAut):
            return NotImplemented
        return self.sig == other.sig and np.array_equal(self.labels, other.labels)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.sig.arities, self.labels.tobytes()))
        return self._hash

    def key(self) -> bytes:
        """Canonical byte key, usable for set membership across processes."""
        return self.labels.tobytes()

    def __repr__(self) -> str:
        from wrcomm.wrformat import serialize_element
        return f"TreeAut(({self.sig}), {serialize_element(self)!r})"

    # -- operators --------------------------------------------------------
    def __mul__(self, other: "TreeAut") -> "TreeAut":
        if not isinstance(other, TreeAut):
            return NotImplemented
        return multiply(self, other)

    def __pow__(self, n: int) -> "TreeAut":
        return power(self, n)

    def inverse(self) -> "TreeAut":
        return inverse(self)

    # -- accessors --------------------------------------------------------
    @property
    def depth(self) -> int:
        return self.sig.depth

    @property
    def root_label(self) -> int:
        if self.sig.depth == 0:
            return 0
        return int(self.labels[0])

    def level(self, l: int) -> np.ndarray:
        """Read-only view of the labels on level ``l``."""
        _check_level(self.sig, l)
        return self.labels[self.sig.offsets[l]:self.sig.offsets[l + 1]]

    def levels(self) -> list[list[int]]:
        return [self.level(l).tolist() for l in range(self.sig.depth)]

    def is_identity(self) -> bool:
        return not self.labels.any()


def _check_level(sig: AritySignature, l: int) -> None:
    if not 0 <= l < sig.depth:
        raise AddressError(f"level {l} out of range for depth {sig.depth}")


def _same_sig(g: TreeAut, h: TreeAut) -> AritySignature:
    if g.sig != h.sig:
        raise SignatureError(f"signature mismatch: ({g.sig}) vs ({h.sig})")
    return g.sig


def identity(sig: AritySignature | Sequence[int]) -> TreeAut:
    sig = _as_signature(sig)
    return TreeAut(sig, np.zeros(sig.num_vertices, dtype=np.uint8), _trusted=True)


def from_levels(sig: AritySignature | Sequence[int], levels: Sequence[Sequence[int]]) -> TreeAut:
    """Build a portrait from one label list per level."""
    sig = _as_signature(sig)
    if len(levels) != sig.depth:
        raise SignatureError(f"expected {sig.depth} levels, got {len(levels)}")
    flat = [int(x) for lev in levels for x in lev]
    return TreeAut(sig, flat)


def multiply(g: TreeAut, h: TreeAut) -> TreeAut:
    sig = _same_sig(g, h)
    out = np.empty(sig.num_vertices, dtype=np.uint8)
    _backend.kernels.multiply(g.labels, h.labels, sig.arities_array, out)
    return TreeAut(sig, out, _trusted=True)


def inverse(g: TreeAut) -> TreeAut:
    out = np.empty(g.sig.num_vertices, dtype=np.uint8)
    _backend.kernels.inverse(g.labels, g.sig.arities_array, out)
    return TreeAut(g.sig, out, _trusted=True)


def conjugate(a: TreeAut, b: TreeAut) -> TreeAut:
    """``b a b^-1``: ``a`` conjugated by ``b``."""
    return multiply(multiply(b, a), inverse(b))


def commutator(a: TreeAut, b: TreeAut) -> TreeAut:
    """``a b a^-1 b^-1``."""
    sig = _same_sig(a, b)
    out = np.empty(sig.num_vertices, dtype=np.uint8)
    _backend.kernels.commutator(a.labels, b.labels, sig.arities_array, out)
    return TreeAut(sig, out, _trusted=True)


def power(g: TreeAut, n: int) -> TreeAut:
    if n < 0:
        g, n = inverse(g), -n
    result = identity(g.sig)
    while n:
        if n & 1:
            result = multiply(result, g)
        n >>= 1
        if n:
            g = multiply(g, g)
    return result


def vertex_index(sig: AritySignature, address: Sequence[int]) -> int:
    """Flat position within its level of the vertex at a 1-based child-index address."""
    if len(address) > sig.depth:
        raise AddressError(f"address {list(address)} deeper than depth {sig.depth}")
    j = 0
    for p, x in zip(sig.arities, address):
        if not 1 <= x <= p:
            raise AddressError(f"child index {x} outside 1..{p} in address {list(address)}")
        j = j * p + (x - 1)
    return j


def section(g: TreeAut, address: Sequence[int]) -> TreeAut:
    """The automorphism induced on the subtree rooted at ``address``."""
    sig = g.sig
    m = len(address)
    j = vertex_index(sig, address)
    sub = sig.truncated(m)
    if m == 0:
        return g
    parts = []
    for l in range(m, sig.depth):
        width = sig.level_sizes[l] // sig.level_sizes[m]
        start = sig.offsets[l] + j * width
        parts.append(g.labels[start:start + width])
    labels = np.concatenate(parts) if parts else np.zeros(0, np.uint8)
    return TreeAut(sub, labels, _trusted=True)


def _child_rows(g: TreeAut) -> np.ndarray:
    # row c holds the portrait of the section at child c+1
    sig = g.sig
    p = sig.arities[0]
    blocks = [g.labels[sig.offsets[l]:sig.offsets[l + 1]].reshape(p, -1)
              for l in range(1, sig.depth)]
    if not blocks:
        return np.zeros((p, 0), dtype=np.uint8)
    return np.concatenate(blocks, axis=1)


def decompose(g: TreeAut) -> tuple[int, list[TreeAut]]:
    """Wreath recursion ``g = (g_1, ..., g_p) sigma**e``: returns ``(e, [g_1, ..., g_p])``."""
    if g.sig.depth == 0:
        raise SignatureError("cannot decompose an element of depth 0")
    sub = g.sig.truncated(1)
    rows = _child_rows(g)
    return int(g.labels[0]), [TreeAut(sub, rows[c], _trusted=True) for c in range(rows.shape[0])]


def compose_from(root_power: int, sections: Sequence[TreeAut], p: int) -> TreeAut:
    """Inverse of :func:`decompose`."""
    if len(sections) != p:
        raise SignatureError(f"need {p} sections, got {len(sections)}")
    if not 0 <= root_power < p:
        raise SignatureError(f"root power {root_power} outside [0, {p})")
    sub = sections[0].sig
    for s in sections[1:]:
        _same_sig(sections[0], s)
    sig = signature((p,) + sub.arities)
    stacked = np.stack([s.labels for s in sections]) if sub.num_vertices else None
    parts = [np.array([root_power], dtype=np.uint8)]
    for l in range(sub.depth):
        parts.append(stacked[:, sub.offsets[l]:sub.offsets[l + 1]].ravel())
    return TreeAut(sig, np.concatenate(parts), _trusted=True)


def level_index(g: TreeAut, l: int) -> int:
    """Number of vertices on level ``l`` carrying a nonzero label."""
    return int(np.count_nonzero(g.level(l)))


@dataclass(frozen=True)
class LevelIndexProfile:
    """Per-level active-vertex counts, plus the split by level-1 subtree.

    ``per_subtree[l]`` lists, for level ``l >= 1``, the count inside each
    level-1 subtree; ``per_subtree[0]`` is empty.
    """

    counts: tuple[int, ...]
    per_subtree: tuple[tuple[int, ...], ...]

    def parities(self) -> tuple[int, ...]:
        return tuple(c & 1 for c in self.counts)


def level_profile(g: TreeAut) -> LevelIndexProfile:
    sig = g.sig
    counts, split = [], []
    for l in range(sig.depth):
        block = g.level(l)
        counts.append(int(np.count_nonzero(block)))
        if l == 0:
            split.append(())
        else:
            split.append(tuple(int(c) for c in
                               np.count_nonzero(block.reshape(sig.arities[0], -1), axis=1)))
    return LevelIndexProfile(tuple(counts), tuple(split))


def random_element(sig: AritySignature | Sequence[int],
                   seed: int | np.random.Generator | None = None) -> TreeAut:
    """Uniform random element (labels drawn independently per vertex)."""
    sig = _as_signature(sig)
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, sig.vertex_arity, dtype=np.uint8) if sig.num_vertices \
        else np.zeros(0, np.uint8)
    return TreeAut(sig, labels, _trusted=True)
