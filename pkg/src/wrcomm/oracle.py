"""Brute-force ground truth on leaf permutations.

Nothing here calls the portrait kernels: elements are converted to the
permutation they induce on the leaves, all group arithmetic happens on plain
tuples, and results are converted back.  Leaves are numbered lexicographically
by their child-index words, so for depth 3 binary trees leaf 1 is ``111`` and
leaf 8 is ``222``.

Permutation products compose left to right: ``(p * q)(i) = q(p(i))``.  This is
the order under which :func:`to_leaf_perm` is a homomorphism for
:func:`wrcomm.tree.multiply`.
"""
from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

import numpy as np

from wrcomm.errors import GuardExceeded, ParseError, SignatureError
from wrcomm.tree import AritySignature, TreeAut, identity

DEFAULT_GUARD = 2 ** 20
DEFAULT_PAIR_CAP = 2 ** 24

# Expected elements of (Syl_2 A_8)', 1-based points under lexicographic leaf numbering.
A8_SYLOW_DERIVED_CYCLES = (
    "e",
    "(13)(24)(57)(68)",
    "(12)(34)",
    "(14)(23)(57)(68)",
    "(56)(78)",
    "(13)(24)(58)(67)",
    "(12)(34)(56)(78)",
    "(14)(23)(58)(67)",
)


def guard_limit(override: int | None = None) -> int:
    """Effective element-count guard: explicit override, else ``WRCOMM_GUARD``, else 2**20."""
    if override is not None:
        return int(override)
    env = os.environ.get("WRCOMM_GUARD")
    return int(env) if env else DEFAULT_GUARD


@dataclass(frozen=True)
class LeafPermutation:
    """A permutation of the leaves, stored 0-based: ``images[i]`` is the image of leaf ``i``."""

    images: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "LeafPermutation") -> "LeafPermutation":
        return LeafPermutation(compose(self.images, other.images))

    def inverse(self) -> "LeafPermutation":
        return LeafPermutation(invert(self.images))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def parity(self) -> str:
        return permutation_parity(self)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(x + 1 for x in cyc))
        return out

    def cycle_notation(self, sep: str = " ") -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + sep.join(map(str, c)) + ")" for c in cyc)

    def __str__(self) -> str:
        return self.cycle_notation()


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Apply ``p`` first, then ``q``."""
    if len(p) != len(q):
        raise SignatureError(f"degree mismatch {len(p)} vs {len(q)}")
    return tuple(q[x] for x in p)


def invert(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def permutation_parity(perm: LeafPermutation | Sequence[int]) -> str:
    """``"even"`` or ``"odd"``, from the cycle decomposition."""
    images = perm.images if isinstance(perm, LeafPermutation) else tuple(perm)
    seen = [False] * len(images)
    transpositions = 0
    for start in range(len(images)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = images[j]
            length += 1
        transpositions += length - 1
    return "odd" if transpositions & 1 else "even"


def parse_cycles(text: str, degree: int) -> LeafPermutation:
    """Read cycle notation with 1-based points.

    Points inside a cycle may be separated by spaces or commas; a cycle with no
    separators, like ``(13)``, is read one digit per point.  ``e`` and ``()``
    denote the identity.
    """
    s = text.strip()
    images = list(range(degree))
    if s in ("e", "()", ""):
        return LeafPermutation(tuple(images))
    pos = 0
    for m in re.finditer(r"\s*\(([^()]*)\)\s*", s):
        if m.start() != pos:
            raise ParseError("expected '('", len(s[:pos].encode()))
        pos = m.end()
        body = m.group(1).strip()
        if re.search(r"[\s,]", body):
            pts = [int(t) for t in re.split(r"[\s,]+", body) if t]
        else:
            pts = [int(ch) for ch in body]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if not (1 <= a <= degree and 1 <= b <= degree):
                raise ParseError(f"point outside 1..{degree}", m.start(1))
            images[a - 1] = b - 1
    if pos != len(s):
        raise ParseError("trailing characters", len(s[:pos].encode()))
    if sorted(images) != list(range(degree)):
        raise ParseError("cycles do not describe a permutation", 0)
    return LeafPermutation(tuple(images))


# -- portrait <-> leaf permutation ---------------------------------------

def _digits(i: int, arities: Sequence[int]) -> list[int]:
    out = []
    for p in reversed(arities):
        i, r = divmod(i, p)
        out.append(r)
    return out[::-1]


def _undigits(ds: Sequence[int], arities: Sequence[int]) -> int:
    i = 0
    for p, d in zip(arities, ds):
        i = i * p + d
    return i


def to_leaf_perm(g: TreeAut) -> LeafPermutation:
    """Image of every leaf word, by walking the word down the tree.

    At each vertex the vertex's cycle power shifts the next letter; the walk
    then continues in the subtree of the *original* letter.
    """
    ar = g.sig.arities
    offsets = g.sig.offsets
    labels = g.labels.tolist()
    images = []
    for i in range(g.sig.leaf_count):
        word = _digits(i, ar)
        out = []
        j = 0
        for l, (p, x) in enumerate(zip(ar, word)):
            e = labels[offsets[l] + j]
            out.append((x + e) % p)
            j = j * p + x
        images.append(_undigits(out, ar))
    return LeafPermutation(tuple(images))


def from_leaf_perm(perm: LeafPermutation | Sequence[int], sig: AritySignature) -> TreeAut:
    """Recover the portrait of a leaf permutation; raises if it is not a tree automorphism."""
    images = perm.images if isinstance(perm, LeafPermutation) else tuple(perm)
    if len(images) != sig.leaf_count:
        raise SignatureError(f"degree {len(images)} != leaf count {sig.leaf_count}")
    ar = sig.arities
    labels = []
    for l in range(sig.depth):
        below = 1
        for p in ar[l:]:
            below *= p
        for j in range(sig.level_sizes[l]):
            # leftmost leaf under vertex j: its letter on level l is 0
            labels.append(_digits(images[j * below], ar)[l])
    g = TreeAut(sig, labels)
    if to_leaf_perm(g).images != images:
        raise SignatureError("permutation does not preserve the tree structure")
    return g


# -- brute-force group computations ----------------------------------------

def _sig_of(elements: Collection[TreeAut], sig: AritySignature | None) -> AritySignature:
    if sig is not None:
        return sig
    for x in elements:
        return x.sig
    raise SignatureError("empty element set and no signature given")


def _closure(gens: Sequence[tuple[int, ...]], degree: int, guard: int) -> set[tuple[int, ...]]:
    e = tuple(range(degree))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = tuple(s[i] for i in x)  # x then s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > guard:
                        raise GuardExceeded(f"closure exceeds guard of {guard} elements")
        frontier = nxt
    return seen


def _comm(a: tuple[int, ...], b: tuple[int, ...], ia: tuple[int, ...], ib: tuple[int, ...]):
    # a b a^-1 b^-1, left to right
    return compose(compose(compose(a, b), ia), ib)


def _to_elements(perms: Iterable[tuple[int, ...]], sig: AritySignature) -> frozenset[TreeAut]:
    return frozenset(from_leaf_perm(p, sig) for p in perms)


def generated_subgroup(generators: Collection[TreeAut], sig: AritySignature | None = None,
                       guard: int | None = None) -> frozenset[TreeAut]:
    sig = _sig_of(generators, sig)
    perms = [to_leaf_perm(g).images for g in generators]
    return _to_elements(_closure(perms, sig.leaf_count, guard_limit(guard)), sig)


def enumerate_group(gid, guard: int | None = None) -> frozenset[TreeAut]:
    """Every element of a FullWreath or SylowAlt group, by direct portrait enumeration."""
    from wrcomm.groups import GroupKind, is_in_Gk

    limit = guard_limit(guard)
    sig = gid.signature
    if gid.kind not in (GroupKind.FULL_WREATH, GroupKind.SYLOW_ALT):
        raise ValueError(f"enumerate_group supports full wreath / Sylow-alternating kinds, not {gid.kind}")
    if sig.order > limit:
        raise GuardExceeded(f"group order {sig.order} exceeds guard {limit}; use solver-based checks")
    ranges = [range(int(p)) for p in sig.vertex_arity]
    table = np.array(list(itertools.product(*ranges)), dtype=np.uint8).reshape(-1, sig.num_vertices)
    out = (TreeAut(sig, row, _trusted=True) for row in table)
    if gid.kind is GroupKind.SYLOW_ALT:
        return frozenset(g for g in out if is_in_Gk(g))
    return frozenset(out)


def derived_subgroup_closure(generators: Collection[TreeAut], sig: AritySignature | None = None,
                             guard: int | None = None) -> frozenset[TreeAut]:
    """Derived subgroup of ``<generators>``: normal closure of the pairwise generator commutators."""
    sig = _sig_of(generators, sig)
    limit = guard_limit(guard)
    n = sig.leaf_count
    gens = [to_leaf_perm(g).images for g in generators]
    invs = [invert(g) for g in gens]
    e = tuple(range(n))
    normal_gens = []
    for i, j in itertools.combinations(range(len(gens)), 2):
        c = _comm(gens[i], gens[j], invs[i], invs[j])
        if c != e and c not in normal_gens:
            normal_gens.append(c)
    group = _closure(normal_gens, n, limit)
    changed = True
    while changed:
        changed = False
        for t in list(normal_gens):
            for g, ig in zip(gens, invs):
                c = compose(compose(g, t), ig)
                if c not in group:
                    normal_gens.append(c)
                    group = _closure(normal_gens, n, limit)
                    changed = True
    return _to_elements(group, sig)


def commutator_set(elements: Collection[TreeAut], pair_cap: int = DEFAULT_PAIR_CAP,
                   sig: AritySignature | None = None) -> frozenset[TreeAut]:
    """``{[a, b] : a, b in elements}`` by exhaustive pairs."""
    sig = _sig_of(elements, sig)
    if len(elements) ** 2 > pair_cap:
        raise GuardExceeded(
            f"{len(elements)}^2 pairs exceed cap {pair_cap}; verify per element with the solver instead")
    perms = [to_leaf_perm(g).images for g in elements]
    invs = [invert(p) for p in perms]
    out = set()
    for a, ia in zip(perms, invs):
        for b, ib in zip(perms, invs):
            out.add(_comm(a, b, ia, ib))
    return _to_elements(out, sig)


def second_derived(elements: Collection[TreeAut], sig: AritySignature | None = None,
                   guard: int | None = None) -> frozenset[TreeAut]:
    """Derived subgroup of the group generated by ``elements``."""
    sig = _sig_of(elements, sig)
    limit = guard_limit(guard)
    gens: list[TreeAut] = []
    perms: list[tuple[int, ...]] = []
    span = {tuple(range(sig.leaf_count))}
    for x in sorted(elements, key=TreeAut.key):
        px = to_leaf_perm(x).images
        if px not in span:
            gens.append(x)
            perms.append(px)
            span = _closure(perms, sig.leaf_count, limit)
    if not gens:
        return frozenset({identity(sig)})
    return derived_subgroup_closure(gens, sig, guard=limit)
