# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled portrait kernels.  Same contract as ``wrcomm._pykernels``."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.uint8_t label_t
ctypedef cnp.intp_t idx_t

NAME = "cython"


cdef inline void _advance(idx_t* perm, idx_t* nperm, Py_ssize_t v, idx_t p,
                          label_t e) noexcept nogil:
    cdef idx_t base = perm[v] * p
    cdef idx_t x, y
    for x in range(p):
        y = x + e
        if y >= p:
            y -= p
        nperm[v * p + x] = base + y


cdef void _mul(const label_t* g, const label_t* h, const idx_t* ar, Py_ssize_t depth,
               label_t* out, idx_t* perm, idx_t* nperm) noexcept nogil:
    cdef Py_ssize_t l, v, n = 1, off = 0
    cdef idx_t p
    cdef int s
    cdef idx_t* tmp
    perm[0] = 0
    for l in range(depth):
        p = ar[l]
        for v in range(n):
            s = g[off + v] + h[off + perm[v]]
            if s >= p:
                s -= p
            out[off + v] = <label_t>s
            if l + 1 < depth:
                _advance(perm, nperm, v, p, g[off + v])
        off += n
        n *= p
        tmp = perm
        perm = nperm
        nperm = tmp


cdef void _inv(const label_t* g, const idx_t* ar, Py_ssize_t depth, label_t* out,
               idx_t* perm, idx_t* nperm) noexcept nogil:
    cdef Py_ssize_t l, v, n = 1, off = 0
    cdef idx_t p
    cdef label_t e
    cdef idx_t* tmp
    perm[0] = 0
    for l in range(depth):
        p = ar[l]
        for v in range(n):
            e = g[off + v]
            out[off + perm[v]] = <label_t>(p - e) if e else 0
            if l + 1 < depth:
                _advance(perm, nperm, v, p, e)
        off += n
        n *= p
        tmp = perm
        perm = nperm
        nperm = tmp


cdef Py_ssize_t _bottom_width(const idx_t[::1] ar):
    # vertex count of the deepest labelled level
    cdef Py_ssize_t l, w = 1
    for l in range(ar.shape[0] - 1):
        w *= ar[l]
    return w


def multiply(const label_t[::1] g, const label_t[::1] h, const idx_t[::1] arities,
             label_t[::1] out):
    cdef Py_ssize_t depth = arities.shape[0]
    if depth == 0:
        return
    cdef Py_ssize_t w = _bottom_width(arities)
    cdef idx_t[::1] perm = np.empty(w, dtype=np.intp)
    cdef idx_t[::1] nperm = np.empty(w, dtype=np.intp)
    with nogil:
        _mul(&g[0], &h[0], &arities[0], depth, &out[0], &perm[0], &nperm[0])


def inverse(const label_t[::1] g, const idx_t[::1] arities, label_t[::1] out):
    cdef Py_ssize_t depth = arities.shape[0]
    if depth == 0:
        return
    cdef Py_ssize_t w = _bottom_width(arities)
    cdef idx_t[::1] perm = np.empty(w, dtype=np.intp)
    cdef idx_t[::1] nperm = np.empty(w, dtype=np.intp)
    with nogil:
        _inv(&g[0], &arities[0], depth, &out[0], &perm[0], &nperm[0])


def commutator(const label_t[::1] a, const label_t[::1] b, const idx_t[::1] arities,
               label_t[::1] out):
    cdef Py_ssize_t depth = arities.shape[0]
    if depth == 0:
        return
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t w = _bottom_width(arities)
    cdef idx_t[::1] perm = np.empty(w, dtype=np.intp)
    cdef idx_t[::1] nperm = np.empty(w, dtype=np.intp)
    cdef label_t[::1] ia = np.empty(m, dtype=np.uint8)
    cdef label_t[::1] ib = np.empty(m, dtype=np.uint8)
    cdef label_t[::1] t = np.empty(m, dtype=np.uint8)
    cdef const idx_t* ar = &arities[0]
    with nogil:
        _inv(&a[0], ar, depth, &ia[0], &perm[0], &nperm[0])
        _inv(&b[0], ar, depth, &ib[0], &perm[0], &nperm[0])
        _mul(&a[0], &b[0], ar, depth, &t[0], &perm[0], &nperm[0])
        _mul(&t[0], &ia[0], ar, depth, &out[0], &perm[0], &nperm[0])
        _mul(&out[0], &ib[0], ar, depth, &t[0], &perm[0], &nperm[0])
    out[:] = t
