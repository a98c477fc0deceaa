"""Vectorised numpy kernels; used when the compiled extension is unavailable.

Portrait layout: one flat uint8 array, level-major, vertices of each level in
lexicographic order of their addresses.  ``arities[l]`` is the arity of the
vertices on level ``l``.  Every kernel walks the levels top-down, carrying the
permutation the left operand induces on the current level.
"""
from __future__ import annotations

import numpy as np

NAME = "numpy"


def _next_perm(perm: np.ndarray, labels: np.ndarray, p: int) -> np.ndarray:
    # image of child x of v is child (x + label[v]) mod p of perm[v]
    shift = (np.arange(p, dtype=np.intp)[None, :] + labels[:, None]) % p
    return (perm[:, None] * p + shift).ravel()


def multiply(g: np.ndarray, h: np.ndarray, arities: np.ndarray, out: np.ndarray) -> None:
    perm = np.zeros(1, dtype=np.intp)
    off = 0
    depth = len(arities)
    for l in range(depth):
        p = int(arities[l])
        n = perm.shape[0]
        gl = g[off:off + n]
        hl = h[off:off + n][perm]
        if p == 2:
            np.bitwise_xor(gl, hl, out=out[off:off + n])
        else:
            s = gl.astype(np.int16) + hl
            s[s >= p] -= p
            out[off:off + n] = s
        if l + 1 < depth:
            perm = _next_perm(perm, gl.astype(np.intp), p)
        off += n


def inverse(g: np.ndarray, arities: np.ndarray, out: np.ndarray) -> None:
    perm = np.zeros(1, dtype=np.intp)
    off = 0
    depth = len(arities)
    for l in range(depth):
        p = int(arities[l])
        n = perm.shape[0]
        gl = g[off:off + n]
        block = out[off:off + n]
        block[perm] = (p - gl.astype(np.int16)) % p
        if l + 1 < depth:
            perm = _next_perm(perm, gl.astype(np.intp), p)
        off += n


def commutator(a: np.ndarray, b: np.ndarray, arities: np.ndarray, out: np.ndarray) -> None:
    ia = np.empty_like(a)
    ib = np.empty_like(b)
    inverse(a, arities, ia)
    inverse(b, arities, ib)
    t = np.empty_like(a)
    u = np.empty_like(a)
    multiply(a, b, arities, t)
    multiply(t, ia, arities, u)
    multiply(u, ib, arities, out)
