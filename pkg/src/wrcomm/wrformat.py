"""Text format for portraits and commutator witnesses.

Element grammar (whitespace between tokens is ignored)::

    elem     := 's' INT children?
    children := '(' elem (',' elem)* ')'

``INT`` is the vertex label and must already lie in ``[0, p)`` for that
level's arity ``p``.  A vertex with children lists exactly ``p`` of them; a
vertex without children has an identity subtree.  The signature is never
inferred from the text: it comes from a ``sig: 2,2,2`` header line or from the
caller.

The serializer is canonical.  It emits no whitespace and drops the child list
of every vertex whose subtree below it is the identity, so the identity is
always ``s0``.  Depth-0 (trivial group) elements are written ``s0`` as well.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from wrcomm.errors import InvariantViolation, ParseError, SignatureError
from wrcomm.tree import AritySignature, TreeAut, commutator, signature

SIG_KEY = "sig"


class _Parser:
    def __init__(self, text: str, sig: AritySignature):
        self.text = text
        self.pos = 0
        self.sig = sig
        self.labels = np.zeros(sig.num_vertices, dtype=np.uint8)

    def fail(self, message: str, pos: int | None = None) -> ParseError:
        at = self.pos if pos is None else pos
        return ParseError(message, len(self.text[:at].encode("utf-8")))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            raise self.fail(f"expected {ch!r}, found {found}")
        self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> tuple[int, int]:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        if start == self.pos:
            raise self.fail("expected a label (decimal integer)")
        return int(self.text[start:self.pos]), start

    def elem(self, level: int, index: int) -> None:
        sig = self.sig
        self.expect("s")
        value, at = self.integer()
        if level < sig.depth:
            p = sig.arities[level]
            if value >= p:
                raise self.fail(f"label {value} out of range for arity {p} on level {level}", at)
            self.labels[sig.offsets[level] + index] = value
        elif value != 0:
            # only the depth-0 signature reaches here with a label
            raise self.fail(f"label {value} on a leaf (signature depth {sig.depth})", at)
        if self.peek() != "(":
            return
        if level + 1 >= sig.depth:
            raise self.fail(f"children below level {level} exceed signature depth {sig.depth}")
        p = sig.arities[level]
        self.expect("(")
        for c in range(p):
            if c:
                if self.peek() == ")":
                    raise self.fail(f"vertex on level {level} needs {p} children, got {c}")
                self.expect(",")
            self.elem(level + 1, index * p + c)
        if self.peek() == ",":
            raise self.fail(f"vertex on level {level} needs exactly {p} children")
        self.expect(")")


def parse_element(text: str, sig: AritySignature | Sequence[int]) -> TreeAut:
    if not isinstance(sig, AritySignature):
        sig = signature(tuple(sig))
    parser = _Parser(text, sig)
    parser.elem(0, 0)
    parser.skip_ws()
    if parser.pos != len(text):
        raise parser.fail("trailing characters")
    return TreeAut(sig, parser.labels, _trusted=True)


def _nontrivial_below(g: TreeAut) -> list[np.ndarray]:
    # flags[l][j]: some vertex strictly below (l, j) has a nonzero label
    sig = g.sig
    flags: list[np.ndarray] = [np.zeros(0, bool)] * sig.depth
    below = np.zeros(0, bool)
    for l in range(sig.depth - 1, -1, -1):
        n = sig.level_sizes[l]
        if l == sig.depth - 1:
            flags[l] = np.zeros(n, bool)
        else:
            child = g.level(l + 1).astype(bool) | below
            flags[l] = child.reshape(n, -1).any(axis=1)
        below = flags[l]
    return flags


def serialize_element(g: TreeAut) -> str:
    sig = g.sig
    if sig.depth == 0:
        return "s0"
    flags = _nontrivial_below(g)
    labels = [g.level(l).tolist() for l in range(sig.depth)]
    expand = [f.tolist() for f in flags]
    out: list[str] = []

    def emit(level: int, j: int) -> None:
        out.append(f"s{labels[level][j]}")
        if expand[level][j]:
            p = sig.arities[level]
            out.append("(")
            for c in range(p):
                if c:
                    out.append(",")
                emit(level + 1, j * p + c)
            out.append(")")

    emit(0, 0)
    return "".join(out)


def normalize(text: str, sig: AritySignature | Sequence[int]) -> str:
    return serialize_element(parse_element(text, sig))


# -- documents ---------------------------------------------------------------

def _parse_header(line: str) -> tuple[str, str] | None:
    key, sep, value = line.partition(":")
    if not sep:
        return None
    return key.strip(), value.strip()


def read_element_document(text: str, sig: AritySignature | None = None
                          ) -> tuple[AritySignature, list[TreeAut]]:
    """Parse an element file: optional ``sig:`` header, then one element per non-blank line.

    Lines starting with ``#`` are comments.  If both the header and ``sig`` are
    given they must agree.
    """
    header_sig = None
    body: list[tuple[int, str]] = []
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            kv = _parse_header(stripped)
            if kv is not None and kv[0] == SIG_KEY:
                if body:
                    raise ParseError("sig header must precede elements", offset)
                header_sig = AritySignature.parse(kv[1])
            else:
                body.append((offset + len(line) - len(line.lstrip()), stripped))
        offset += len(line.encode("utf-8"))
    if header_sig is not None and sig is not None and header_sig != sig:
        raise SignatureError(f"file header sig ({header_sig}) conflicts with given sig ({sig})")
    use = header_sig if header_sig is not None else sig
    if use is None:
        raise SignatureError("no signature: add a 'sig: p1,...,pk' header or pass one explicitly")
    elements = []
    for at, line in body:
        try:
            elements.append(parse_element(line, use))
        except ParseError as exc:
            raise ParseError(exc.bare_message, at + exc.offset) from None
    return use, elements


def write_element_document(elements: Sequence[TreeAut]) -> str:
    if not elements:
        raise SignatureError("nothing to write")
    sig = elements[0].sig
    lines = [f"{SIG_KEY}: {sig}"]
    for g in elements:
        if g.sig != sig:
            raise SignatureError("all elements in one document must share a signature")
        lines.append(serialize_element(g))
    return "\n".join(lines) + "\n"


def _flag(v: bool | None) -> str:
    return "n/a" if v is None else ("true" if v else "false")


def export_witness(w) -> str:
    """Key-value document for a :class:`~wrcomm.solver.CommutatorWitness`.

    The ``verified`` stamp is recomputed here; a witness that no longer
    multiplies back to its target raises instead of being written.
    """
    if commutator(w.a, w.b) != w.target:
        raise InvariantViolation("witness failed re-verification at export")
    fields = [
        (SIG_KEY, str(w.target.sig)),
        ("target", serialize_element(w.target)),
        ("a", serialize_element(w.a)),
        ("b", serialize_element(w.b)),
        ("a_in_sylow_alt", _flag(w.a_in_sylow_alt)),
        ("b_in_sylow_alt", _flag(w.b_in_sylow_alt)),
        ("recursion_depth", str(w.recursion_depth)),
        ("verified", "true"),
    ]
    return "".join(f"{k}: {v}\n" for k, v in fields)


def import_witness(text: str):
    """Inverse of :func:`export_witness`; recomputes the commutator and the flags."""
    from wrcomm.solver import CommutatorWitness
    from wrcomm.groups import is_in_Gk

    fields: dict[str, str] = {}
    offset = 0
    for line in text.splitlines(keepends=True):
        if line.strip():
            kv = _parse_header(line.strip())
            if kv is None:
                raise ParseError("expected 'key: value'", offset)
            fields[kv[0]] = kv[1]
        offset += len(line.encode("utf-8"))
    missing = [k for k in (SIG_KEY, "target", "a", "b", "recursion_depth") if k not in fields]
    if missing:
        raise ParseError(f"missing field(s) {', '.join(missing)}", offset)
    sig = AritySignature.parse(fields[SIG_KEY])
    target = parse_element(fields["target"], sig)
    a = parse_element(fields["a"], sig)
    b = parse_element(fields["b"], sig)
    if commutator(a, b) != target:
        raise InvariantViolation("imported witness does not multiply back to its target")
    binary = sig.is_binary
    return CommutatorWitness(a, b, target,
                             is_in_Gk(a) if binary else None,
                             is_in_Gk(b) if binary else None,
                             int(fields["recursion_depth"]))
